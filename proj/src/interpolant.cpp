#include "bbinterp/interpolant.hpp"
#include "bbinterp/circuit_transforms.hpp"
#include "bbinterp/errors.hpp"

#include <algorithm>
#include <cmath>

namespace bbinterp {

std::string z_input(std::size_t j) { return "z" + std::to_string(j + 1); }

std::string shift_input(int node, BranchSide side)
{
    return (side == BranchSide::Le ? "gm" : "gp") + std::to_string(node);
}

namespace {

    class Compiler {
    public:
        Compiler(const InterpolationInstance& inst, const CertifiedTree& tree)
            : inst_(inst), tree_(tree), full_(inst.full_system())
        {
            for (std::size_t j = 0; j < inst.n3; ++j)
                z_names_.push_back(z_input(j));
            const Box box = inst.box_p();
            ranges_.resize(tree.tree.num_nodes());
            for (int id : tree.tree.internal_nodes()) {
                const auto& alpha = tree.tree.disjunction(id).alpha;
                IntVector ax(alpha.begin(), alpha.begin() + static_cast<std::ptrdiff_t>(inst.n1));
                ranges_[static_cast<std::size_t>(id)] = node_range(ax, box);
            }
        }

        Circuit build(int node) const
        {
            const BBTree& t = tree_.tree;
            if (t.is_leaf(node))
                return leaf(node);
            const int le = t.left(node), ge = t.right(node);
            const Integer width = ranges_[static_cast<std::size_t>(node)].width();
            Circuit c_le = build(le), c_ge = build(ge);
            const std::string gm = shift_input(node, BranchSide::Le), gp = shift_input(node, BranchSide::Ge);
            // Binary search runs on the smaller side.
            if (t.leaf_count(le) <= t.leaf_count(ge))
                return combine_split(c_le, gm, c_ge, gp, width, 0, width, z_names_);
            return combine_split(c_ge, gp, c_le, gm, width, 0, width, z_names_);
        }

    private:
        Circuit leaf(int node) const
        {
            const BBTree& t = tree_.tree;
            const auto& f = tree_.cert(node);
            const std::size_t rows = full_.num_rows();
            const std::size_t z0 = inst_.n1 + inst_.n2;

            LeafSpec spec;
            std::vector<Rational> s(inst_.n3, 0);
            Integer k = 0;
            for (std::size_t i = 0; i < rows; ++i) {
                if (full_.label(i).kind != RowLabel::Kind::OriginalP || f[i] == 0)
                    continue;
                k += f[i] * full_.rhs(i);
                for (std::size_t j = 0; j < inst_.n3; ++j)
                    s[j] += Rational(f[i] * full_.row(i)[z0 + j]);
            }
            struct Shift {
                std::string name;
                Integer weight, level;
            };
            std::vector<Shift> shifts;
            const auto path = t.path_to(node);
            for (std::size_t e = 0; e + 1 < path.size(); ++e) {
                const int m = path[e];
                const auto& r = ranges_[static_cast<std::size_t>(m)];
                const Integer& fe = f[rows + e];
                const bool le = t.left(m) == path[e + 1];
                k += le ? Integer(fe * r.l_max) : Integer(fe * (-r.l_min - 1));
                shifts.push_back({shift_input(m, le ? BranchSide::Le : BranchSide::Ge), fe, r.width()});
            }

            spec.k = k;
            for (std::size_t j = 0; j < inst_.n3; ++j)
                spec.terms.push_back(LeafTerm{z_names_[j], s[j], false, 0, 0});
            for (const auto& sh : shifts) {
                Rational w(sh.weight), level(sh.level);
                Rational big = std::max(Rational(k + 1), Rational(w * level + w));
                spec.terms.push_back(LeafTerm{sh.name, w, true, level, big});
            }
            return build_leaf_circuit(spec, z_names_);
        }

        const InterpolationInstance& inst_;
        const CertifiedTree& tree_;
        LinSystem full_;
        std::vector<std::string> z_names_;
        std::vector<NodeRange> ranges_;
    };

}  // namespace

Circuit compile_interpolant(const InterpolationInstance& inst, const CertifiedTree& tree)
{
    inst.validate();
    if (inst.n3 == 0)
        throw Error("interpolation instance has no coupling variables");
    if (tree.tree.num_nodes() == 0 || tree.certs.size() != tree.tree.num_nodes())
        throw Error("tree carries no certificate list");
    if (! check_certified_tree(tree, inst.full_system()))
        throw Error("tree is not certified against the instance");
    Circuit c = Compiler(inst, tree).build(tree.tree.root());
    c.validate();
    for (const auto& name : c.input_names())
        if (name.empty() || name[0] != 'z')
            throw InvariantViolation("compiled circuit kept shift input " + name);
    return c;
}

int eval_interpolant(const Circuit& c, const std::vector<int>& z)
{
    Assignment a;
    for (std::size_t j = 0; j < z.size(); ++j)
        a[z_input(j)] = z[j];
    Rational v = eval_circuit(c, a);
    if (v != 0 && v != 1)
        throw InvariantViolation("interpolant returned " + to_string(v));
    return v == 1 ? 1 : 0;
}

double size_bound_log2(std::size_t n, std::size_t tree_size)
{
    const double dn = static_cast<double>(n), t = static_cast<double>(tree_size);
    return std::log2(50.0) + 2 * std::log2(dn + 1) + 2 * std::log2(t) +
        std::log2((4 * dn + 5) * t) * std::log2((dn + 2) * (dn + 2) * std::log2(10 * dn * dn * dn + 3));
}

Circuit certificate_from_tree(const SplitCNF& split, const BBTree& refutation)
{
    return compile_interpolant(split.instance(), lift_tree(refutation, split));
}

bool check_certificate(const Circuit& c, const SplitCNF& split, const std::vector<int>& a)
{
    return certificate_holds(split, a, eval_interpolant(c, a));
}

}  // namespace bbinterp
