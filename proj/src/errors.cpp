#include "bbinterp/errors.hpp"

namespace bbinterp {

namespace {
    std::string render_point(const RatVector& p)
    {
        std::string s = "(";
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (i)
                s += ", ";
            s += to_string(p[i]);
        }
        return s + ")";
    }
}

FeasibleLeaf::FeasibleLeaf(int leaf_id, RatVector witness_point) :
    Error("leaf " + std::to_string(leaf_id) + " is LP-feasible, witness " + render_point(witness_point)),
    leaf(leaf_id),
    witness(std::move(witness_point))
{
}

IntegralPointFound::IntegralPointFound(RatVector p) :
    Error("integral LP point " + render_point(p) + " found; system is integer-feasible"),
    point(std::move(p))
{
}

SearchBudgetExceeded::SearchBudgetExceeded(long b, long lower, std::optional<long> upper) :
    Error("search budget of " + std::to_string(b) + " node evaluations exceeded; sizes below "
        + std::to_string(lower) + " excluded"
        + (upper ? ", best tree found has size " + std::to_string(*upper) : std::string{})),
    budget(b),
    proven_lower_bound(lower),
    best_so_far(upper)
{
}

}  // namespace bbinterp
