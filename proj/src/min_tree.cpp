#include "bbinterp/bb_tree.hpp"
#include "bbinterp/errors.hpp"
#include "bbinterp/polytope.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace bbinterp {

namespace {

    std::vector<RatVector> directions(std::size_t n, int cap)
    {
        std::vector<IntVector> out;
        std::vector<long> a(n, -cap);
        while (true) {
            auto first = std::find_if(a.begin(), a.end(), [](long v) { return v != 0; });
            if (first != a.end() && *first > 0) {
                IntVector v(n);
                for (std::size_t j = 0; j < n; ++j)
                    v[j] = a[j];
                out.push_back(std::move(v));
            }
            std::size_t j = n;
            while (j > 0 && a[j - 1] == cap)
                a[--j] = -cap;
            if (j == 0)
                break;
            ++a[j - 1];
        }
        auto l1 = [](const IntVector& v) {
            Integer s = 0;
            for (const auto& x : v)
                s += abs(x);
            return s;
        };
        std::stable_sort(out.begin(), out.end(), [&](const IntVector& x, const IntVector& y) { return l1(x) < l1(y); });
        std::vector<RatVector> rat;
        for (const auto& v : out)
            rat.emplace_back(v.begin(), v.end());
        return rat;
    }

    class Search {
    public:
        Search(std::size_t n, int coeff_cap, long budget) : dirs_(directions(n, coeff_cap)), budget_(budget) {}

        // Is there a valid tree of at most s leaves and depth at most d for P?
        bool can(const Polytope& p, long s, int d)
        {
            if (p.empty())
                return true;
            if (s < 2 || d == 0)
                return false;
            auto key = std::make_tuple(p.key(), s, d);
            if (auto it = memo_.find(key); it != memo_.end())
                return it->second;
            if (++evaluations_ > budget_)
                throw SearchBudgetExceeded(budget_, lower_bound_, std::nullopt);
            bool found = explore(p, s, d);
            memo_.emplace(std::move(key), found);
            return found;
        }

        long lower_bound_ = 1;

    private:
        bool explore(const Polytope& p, long s, int d)
        {
            std::vector<std::pair<Integer, Integer>> ranges;
            ranges.reserve(dirs_.size());
            for (const auto& alpha : dirs_) {
                auto [lo, hi] = p.range(alpha);
                Integer lmin = ceil_div(lo) - 1, lmax = floor_div(hi);
                if (lmax <= lmin)
                    return true;  // some delta leaves both sides empty
                ranges.emplace_back(lmin, lmax);
            }
            if (s == 2)
                return false;
            for (std::size_t k = 0; k < dirs_.size(); ++k) {
                const auto& alpha = dirs_[k];
                auto [lo, hi] = p.range(alpha);
                RatVector neg(alpha.size());
                for (std::size_t j = 0; j < alpha.size(); ++j)
                    neg[j] = -alpha[j];
                for (Integer delta = ranges[k].first; delta <= ranges[k].second; ++delta) {
                    // a side equal to P makes no progress
                    if (Rational(delta) >= hi || Rational(delta + 1) <= lo)
                        continue;
                    Polytope left = p.cut(alpha, Rational(delta));
                    Polytope right = p.cut(neg, Rational(-delta - 1));
                    for (long s1 = 1; s1 < s; ++s1)
                        if (can(left, s1, d - 1) && can(right, s - s1, d - 1))
                            return true;
                }
            }
            return false;
        }

        std::vector<RatVector> dirs_;
        long budget_;
        long evaluations_ = 0;
        std::map<std::tuple<std::vector<RatVector>, long, int>, bool> memo_;
    };

}  // namespace

MinTreeSize min_tree_size_bounded(const LinSystem& sys, int depth_cap, int coeff_cap, const MinTreeSearchOptions& options)
{
    Polytope root = Polytope::from_system(sys);
    if (root.empty())
        return MinTreeSize::finite(1);

    const std::size_t n = sys.num_vars();
    IntBox box(n);
    for (std::size_t j = 0; j < n; ++j) {
        RatVector e(n, Rational(0));
        e[j] = 1;
        auto [lo, hi] = root.range(e);
        box[j] = {ceil_div(lo).get_si(), floor_div(hi).get_si()};
    }
    if (integer_feasible_oracle(sys, box, options.enumeration_cap))
        return MinTreeSize::infinite();

    Search search(n, coeff_cap, options.budget);
    const long max_size = depth_cap >= 62 ? (1L << 62) : (1L << std::max(depth_cap, 0));
    for (long s = 2; s <= max_size; ++s) {
        search.lower_bound_ = s;
        if (search.can(root, s, depth_cap))
            return MinTreeSize::finite(s);
    }
    return MinTreeSize::not_within_caps();
}

}  // namespace bbinterp
