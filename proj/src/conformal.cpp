#include "bbinterp/conformal.hpp"
#include "bbinterp/errors.hpp"

#include <functional>
#include <map>

namespace bbinterp {

std::pair<Rational, Rational> Box::extremes(const IntVector& alpha) const
{
    if (alpha.size() != bounds.size())
        throw DimensionError("box and direction differ in dimension");
    Rational lo = 0, hi = 0;
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        if (alpha[j] == 0)
            continue;
        Rational a = bounds[j].first * alpha[j], b = bounds[j].second * alpha[j];
        lo += std::min(a, b);
        hi += std::max(a, b);
    }
    return {lo, hi};
}

NodeRange node_range(const IntVector& alpha, const Box& box)
{
    auto [lo, hi] = box.extremes(alpha);
    return {ceil_div(lo) - 1, floor_div(hi)};
}

bool le_side_empty(const IntVector& alpha, const Integer& c, const Box& box)
{
    return Rational(c) < box.extremes(alpha).first;
}

bool ge_side_empty(const IntVector& alpha, const Integer& c, const Box& box)
{
    return Rational(c + 1) > box.extremes(alpha).second;
}

ProductSystem ProductSystem::make(const LinSystem& p, const LinSystem& q)
{
    const std::size_t n = p.num_vars() + q.num_vars();
    LinSystem combined(n);
    for (std::size_t i = 0; i < p.num_rows(); ++i) {
        IntVector a(n, 0);
        std::copy(p.row(i).begin(), p.row(i).end(), a.begin());
        combined.add_row(std::move(a), p.rhs(i), RowLabel::original_p());
    }
    for (std::size_t i = 0; i < q.num_rows(); ++i) {
        IntVector a(n, 0);
        std::copy(q.row(i).begin(), q.row(i).end(), a.begin() + static_cast<long>(p.num_vars()));
        combined.add_row(std::move(a), q.rhs(i), RowLabel::original_q());
    }
    return {p, q, std::move(combined)};
}

ProductSystem ProductSystem::from_combined(const LinSystem& combined, std::size_t n1)
{
    const std::size_t n = combined.num_vars();
    if (n1 > n)
        throw DimensionError("factor dimension exceeds the combined dimension");
    LinSystem p(n1), q(n - n1);
    for (std::size_t i = 0; i < combined.num_rows(); ++i) {
        const auto& row = combined.row(i);
        const auto kind = combined.label(i).kind;
        if (kind == RowLabel::Kind::OriginalP || kind == RowLabel::Kind::OriginalQ) {
            bool is_p = kind == RowLabel::Kind::OriginalP;
            for (std::size_t j = 0; j < n; ++j)
                if (row[j] != 0 && (j < n1) != is_p)
                    throw Error("row " + std::to_string(i) + " mixes the two factors");
            IntVector a = is_p ? IntVector(row.begin(), row.begin() + static_cast<long>(n1))
                               : IntVector(row.begin() + static_cast<long>(n1), row.end());
            (is_p ? p : q).add_row(std::move(a), combined.rhs(i), combined.label(i));
        }
        else if (kind != RowLabel::Kind::Shared)
            throw Error("combined system holds a branch row");
    }
    return {std::move(p), std::move(q), combined};
}

IntVector ProductSystem::part(const IntVector& v, Side side) const
{
    if (v.size() != n1() + n2())
        throw DimensionError("vector does not live in the product space");
    auto begin = v.begin() + (side == Side::P ? 0 : static_cast<long>(n1()));
    return IntVector(begin, begin + static_cast<long>(side == Side::P ? n1() : n2()));
}

FarkasCertificate project_certificate(const FarkasCertificate& f, const std::vector<RowLabel>& labels, Side side)
{
    if (f.size() != labels.size())
        throw DimensionError("certificate and label list differ in length");
    auto keep_kind = side == Side::P ? RowLabel::Kind::OriginalP : RowLabel::Kind::OriginalQ;
    FarkasCertificate out;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (labels[i].kind == keep_kind || labels[i].is_branch())
            out.push_back(f[i]);
    return out;
}

std::vector<RowLabel> labels_of(const LinSystem& sys)
{
    std::vector<RowLabel> out;
    for (std::size_t i = 0; i < sys.num_rows(); ++i)
        out.push_back(sys.label(i));
    return out;
}

int quasi_case(const QuasiCertifiedTree& tree, int leaf, const LinSystem& sys)
{
    auto problem = node_problem(tree.tree, leaf, sys);
    const auto& f = tree.cert(leaf);
    if (f.size() == problem.num_rows() && check_farkas(problem, f))
        return 1;
    auto path = tree.tree.path_to(leaf);
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        const auto& d = tree.tree.disjunction(path[k]);
        bool left = path[k + 1] == tree.tree.left(path[k]);
        if (left ? le_side_empty(d.alpha, d.delta, tree.box) : ge_side_empty(d.alpha, d.delta, tree.box))
            return 2;
    }
    return 0;
}

bool check_quasi(const QuasiCertifiedTree& tree, int leaf, const LinSystem& sys) { return quasi_case(tree, leaf, sys) != 0; }

namespace {

    // Decides, for one factor at a time, whether the subtree below a node admits
    // a conforming tree given the factor right-hand sides chosen at its ancestors.
    // In right-hand-side coordinates both factors look alike: the left verdict is
    // downward closed and the right verdict upward closed in delta'.
    class Engine {
    public:
        enum class LeafMode { Certificates, LpInfeasibility };

        Engine(const BBTree& tree, const std::vector<FarkasCertificate>* certs, const ProductSystem& prod,
            const Box& box_p, const Box& box_q, LeafMode mode, DecompositionTrace* trace)
            : tree_(tree), certs_(certs), prod_(prod), box_p_(box_p), box_q_(box_q), mode_(mode), trace_(trace)
        {
            if (box_p.dim() != prod.n1() || box_q.dim() != prod.n2())
                throw DimensionError("box dimensions do not match the product");
            std::size_t p_rows = 0, q_rows = 0;
            for (std::size_t i = 0; i < prod.combined.num_rows(); ++i) {
                const auto& label = prod.combined.label(i);
                p_rows += label.kind == RowLabel::Kind::OriginalP;
                q_rows += label.kind == RowLabel::Kind::OriginalQ;
                if (label.kind == RowLabel::Kind::Shared)
                    for (const auto& a : prod.combined.row(i))
                        if (a != 0)
                            throw Error("shared rows of a product must not involve factor variables");
            }
            if (p_rows != prod.p.num_rows() || q_rows != prod.q.num_rows())
                throw DimensionError("combined system does not match its factors");
            for (int node : tree.internal_nodes())
                if (tree.disjunction(node).alpha.size() != prod.combined.num_vars())
                    throw DimensionError("disjunction dimension does not match the product");
        }

        bool can(Side s, int node, const std::vector<Integer>& ctx)
        {
            auto key = std::make_pair(node, ctx);
            auto& memo = memo_[s == Side::P ? 0 : 1];
            if (auto it = memo.find(key); it != memo.end())
                return it->second;
            bool verdict = tree_.is_leaf(node) ? leaf_ok(s, node, ctx) : choose(s, node, ctx).has_value();
            memo.emplace(std::move(key), verdict);
            return verdict;
        }

        bool left_ok(Side s, int node, const std::vector<Integer>& ctx, const Integer& rhs)
        {
            bool v = le_side_empty(alpha(s, node), rhs, box(s)) || can(s, tree_.left(node), extend(ctx, rhs));
            record(s, node, ctx, true, rhs, v);
            return v;
        }

        bool right_ok(Side s, int node, const std::vector<Integer>& ctx, const Integer& rhs)
        {
            bool v = ge_side_empty(alpha(s, node), rhs, box(s)) || can(s, tree_.right(node), extend(ctx, rhs));
            record(s, node, ctx, false, rhs, v);
            return v;
        }

        // Largest rhs accepted on the left, provided the right child accepts it too.
        std::optional<Integer> choose(Side s, int node, const std::vector<Integer>& ctx)
        {
            auto range = node_range(alpha(s, node), box(s));
            Integer lo = range.l_min, hi = range.l_max;  // left_ok(lo) holds: that side is empty
            while (lo < hi) {
                Integer mid = lo + (hi - lo + 1) / 2;
                if (left_ok(s, node, ctx, mid))
                    lo = mid;
                else
                    hi = mid - 1;
            }
            if (right_ok(s, node, ctx, lo))
                return lo;
            return std::nullopt;
        }

        void build(Side s, int node, const std::vector<Integer>& ctx, BBTree& out, int out_node,
            std::vector<FarkasCertificate>& certs)
        {
            if (tree_.is_leaf(node)) {
                put_cert(certs, out_node, projected(s, node));
                return;
            }
            auto rhs = choose(s, node, ctx);
            if (! rhs)
                throw InvariantViolation("conforming subtree vanished during construction");
            int l = out.split(out_node, Disjunction{alpha(s, node), *rhs});
            auto next = extend(ctx, *rhs);
            if (can(s, tree_.left(node), next))
                build(s, tree_.left(node), next, out, l, certs);
            else
                filler(s, tree_.left(node), out, l, certs);
            if (can(s, tree_.right(node), next))
                build(s, tree_.right(node), next, out, l + 1, certs);
            else
                filler(s, tree_.right(node), out, l + 1, certs);
        }

        const LinSystem& factor(Side s) const { return s == Side::P ? prod_.p : prod_.q; }
        const Box& box(Side s) const { return s == Side::P ? box_p_ : box_q_; }
        IntVector alpha(Side s, int node) const { return prod_.part(tree_.disjunction(node).alpha, s); }

        // Factor problem at a node with the given ancestor right-hand sides.
        LinSystem factor_problem(Side s, int node, const std::vector<Integer>& ctx) const
        {
            auto path = tree_.path_to(node);
            LinSystem out = factor(s);
            for (std::size_t k = 0; k + 1 < path.size(); ++k) {
                auto a = alpha(s, path[k]);
                if (path[k + 1] == tree_.left(path[k]))
                    out.add_row(std::move(a), ctx[k], RowLabel::branch(path[k], BranchSide::Le));
                else {
                    for (auto& v : a)
                        v = -v;
                    out.add_row(std::move(a), -ctx[k] - 1, RowLabel::branch(path[k], BranchSide::Ge));
                }
            }
            return out;
        }

        FarkasCertificate projected(Side s, int leaf) const
        {
            if (! certs_)
                return {};
            auto labels = labels_of(prod_.combined);
            for (std::size_t k = 1; k < tree_.path_to(leaf).size(); ++k)
                labels.push_back(RowLabel::branch(0, BranchSide::Le));
            return project_certificate(certs_->at(static_cast<std::size_t>(leaf)), labels, s);
        }

    private:
        bool leaf_ok(Side s, int leaf, const std::vector<Integer>& ctx)
        {
            auto problem = factor_problem(s, leaf, ctx);
            if (mode_ == LeafMode::LpInfeasibility)
                return is_infeasible(lp_solve(problem));
            return check_farkas(problem, projected(s, leaf));
        }

        void filler(Side s, int node, BBTree& out, int out_node, std::vector<FarkasCertificate>& certs)
        {
            if (tree_.is_leaf(node)) {
                put_cert(certs, out_node, projected(s, node));
                return;
            }
            int l = out.split(out_node, Disjunction{alpha(s, node), 0});
            filler(s, tree_.left(node), out, l, certs);
            filler(s, tree_.right(node), out, l + 1, certs);
        }

        static void put_cert(std::vector<FarkasCertificate>& certs, int id, FarkasCertificate f)
        {
            if (certs.size() <= static_cast<std::size_t>(id))
                certs.resize(static_cast<std::size_t>(id) + 1);
            certs[static_cast<std::size_t>(id)] = std::move(f);
        }

        static std::vector<Integer> extend(std::vector<Integer> ctx, const Integer& rhs)
        {
            ctx.push_back(rhs);
            return ctx;
        }

        void record(Side s, int node, const std::vector<Integer>& ctx, bool left, const Integer& rhs, bool v)
        {
            if (trace_)
                trace_->probes.push_back(Probe{node, ctx, s, left, rhs, v});
        }

        const BBTree& tree_;
        const std::vector<FarkasCertificate>* certs_;
        const ProductSystem& prod_;
        Box box_p_, box_q_;
        LeafMode mode_;
        DecompositionTrace* trace_;
        std::map<std::pair<int, std::vector<Integer>>, bool> memo_[2];
    };

    void check_tree_certs(const CertifiedTree& tree, const ProductSystem& prod)
    {
        if (tree.certs.size() != tree.tree.num_nodes())
            throw DimensionError("certified tree has a certificate slot count different from its node count");
        for (int leaf : tree.tree.leaves())
            if (tree.cert(leaf).size() != prod.combined.num_rows() + tree.tree.path_to(leaf).size() - 1)
                throw DimensionError("leaf " + std::to_string(leaf) + " certificate has the wrong length");
    }

}  // namespace

Decomposition decompose_conforming(const CertifiedTree& tree, const ProductSystem& prod, const Box& box_p,
    const Box& box_q, DecompositionTrace* trace)
{
    check_tree_certs(tree, prod);
    Engine engine(tree.tree, &tree.certs, prod, box_p, box_q, Engine::LeafMode::Certificates, trace);
    Side side;
    if (engine.can(Side::P, tree.tree.root(), {}))
        side = Side::P;
    else if (engine.can(Side::Q, tree.tree.root(), {}))
        side = Side::Q;
    else
        throw InvariantViolation("neither factor admits a conforming tree; the input tree is not valid");
    Decomposition out{side, QuasiCertifiedTree{BBTree(), {}, side == Side::P ? box_p : box_q}};
    engine.build(side, tree.tree.root(), {}, out.result.tree, out.result.tree.root(), out.result.certs);
    out.result.certs.resize(out.result.tree.num_nodes());
    return out;
}

bool side_admits_conforming(const CertifiedTree& tree, const ProductSystem& prod, const Box& box_p, const Box& box_q,
    Side side)
{
    check_tree_certs(tree, prod);
    Engine engine(tree.tree, &tree.certs, prod, box_p, box_q, Engine::LeafMode::Certificates, nullptr);
    return engine.can(side, tree.tree.root(), {});
}

MuValues mu_values(const CertifiedTree& tree, const ProductSystem& prod, const Box& box_p, const Box& box_q, int node,
    const std::vector<Integer>& context_p, const std::vector<Integer>& context_q, const Integer& gamma)
{
    check_tree_certs(tree, prod);
    Engine engine(tree.tree, &tree.certs, prod, box_p, box_q, Engine::LeafMode::Certificates, nullptr);
    const Integer& delta = tree.tree.disjunction(node).delta;
    bool p_le = engine.left_ok(Side::P, node, context_p, delta + gamma);
    bool q_le = engine.left_ok(Side::Q, node, context_q, -gamma);
    bool p_ge = engine.right_ok(Side::P, node, context_p, delta + gamma);
    bool q_ge = engine.right_ok(Side::Q, node, context_q, -gamma - 1);
    auto mu = [](bool p, bool q) {
        if (! p && ! q)
            throw InvariantViolation("verdict function undefined: neither factor case holds");
        return p && q ? 0 : (p ? -1 : 1);
    };
    return {mu(p_le, q_le), mu(p_ge, q_ge)};
}

bool check_conforming(const BBTree& original, const ProductSystem& prod, const Decomposition& d)
{
    const auto& t = d.result.tree;
    if (! original.same_shape(t))
        return false;
    std::function<bool(int, int)> same_alpha = [&](int a, int b) {
        if (original.is_leaf(a))
            return true;
        if (prod.part(original.disjunction(a).alpha, d.side) != t.disjunction(b).alpha)
            return false;
        return same_alpha(original.left(a), t.left(b)) && same_alpha(original.right(a), t.right(b));
    };
    if (! same_alpha(original.root(), t.root()))
        return false;
    if (d.result.certs.size() != t.num_nodes())
        return false;
    const auto& sys = d.side == Side::P ? prod.p : prod.q;
    for (int leaf : t.leaves())
        if (! check_quasi(d.result, leaf, sys))
            return false;
    return true;
}

ShapeDecomposition decompose_shape_only(const BBTree& tree, const ProductSystem& prod, const Box& box_p,
    const Box& box_q)
{
    Engine engine(tree, nullptr, prod, box_p, box_q, Engine::LeafMode::LpInfeasibility, nullptr);
    Side side;
    if (engine.can(Side::P, tree.root(), {}))
        side = Side::P;
    else if (engine.can(Side::Q, tree.root(), {}))
        side = Side::Q;
    else
        throw InvariantViolation("neither factor admits a conforming tree; the input tree is not valid");
    ShapeDecomposition out{side, BBTree()};
    std::vector<FarkasCertificate> unused;
    engine.build(side, tree.root(), {}, out.tree, out.tree.root(), unused);
    return out;
}

bool naive_projection_tree_exists(const CertifiedTree& tree, const ProductSystem& prod, const Box& box, Side side,
    int slack)
{
    check_tree_certs(tree, prod);
    Box other = Box::unit(side == Side::P ? prod.n2() : prod.n1());
    Engine engine(tree.tree, &tree.certs, prod, side == Side::P ? box : other, side == Side::P ? other : box,
        Engine::LeafMode::Certificates, nullptr);
    auto internal = tree.tree.internal_nodes();
    std::vector<Integer> lo, hi;
    double combos = 1;
    for (int node : internal) {
        auto r = node_range(engine.alpha(side, node), box);
        lo.push_back(r.l_min - slack);
        hi.push_back(r.l_max + slack);
        combos *= Integer(r.width() + 1 + 2 * slack).get_d();
    }
    if (combos > 1e7)
        throw CapExceeded("naive projection search space too large");
    std::map<int, std::size_t> index;
    for (std::size_t k = 0; k < internal.size(); ++k)
        index[internal[k]] = k;
    std::vector<Integer> rhs = lo;
    auto leaves = tree.tree.leaves();
    while (true) {
        bool all_valid = true;
        for (int leaf : leaves) {
            auto path = tree.tree.path_to(leaf);
            std::vector<Integer> ctx;
            for (std::size_t k = 0; k + 1 < path.size(); ++k)
                ctx.push_back(rhs[index.at(path[k])]);
            if (! check_farkas(engine.factor_problem(side, leaf, ctx), engine.projected(side, leaf))) {
                all_valid = false;
                break;
            }
        }
        if (all_valid)
            return true;
        std::size_t k = rhs.size();
        while (k > 0 && rhs[k - 1] == hi[k - 1]) {
            rhs[k - 1] = lo[k - 1];
            --k;
        }
        if (k == 0)
            return false;
        ++rhs[k - 1];
    }
}

}  // namespace bbinterp
