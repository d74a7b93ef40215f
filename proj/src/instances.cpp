#include "bbinterp/instances.hpp"
#include "bbinterp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bbinterp {

void InterpolationInstance::validate() const
{
    if (a_rows.size() != c_rows.size() || a_rows.size() != a_rhs.size())
        throw DimensionError("P block has inconsistent row counts");
    if (b_rows.size() != d_rows.size() || b_rows.size() != b_rhs.size())
        throw DimensionError("Q block has inconsistent row counts");
    for (std::size_t i = 0; i < a_rows.size(); ++i) {
        if (a_rows[i].size() != n1 || c_rows[i].size() != n3)
            throw DimensionError("P row " + std::to_string(i) + " has the wrong width");
        for (const auto& c : c_rows[i])
            if (c < 0)
                throw Error("C must be nonnegative");
    }
    for (std::size_t i = 0; i < b_rows.size(); ++i) {
        if (b_rows[i].size() != n2 || d_rows[i].size() != n3)
            throw DimensionError("Q row " + std::to_string(i) + " has the wrong width");
        for (const auto& d : d_rows[i])
            if (d > 0)
                throw Error("D must be nonpositive");
    }
}

namespace {

    void add_bounds(LinSystem& sys, std::size_t offset, std::size_t count, RowLabel label)
    {
        const std::size_t n = sys.num_vars();
        for (std::size_t j = offset; j < offset + count; ++j) {
            IntVector up(n, 0), down(n, 0);
            up[j] = 1;
            down[j] = -1;
            sys.add_row(std::move(up), 1, label);
            sys.add_row(std::move(down), 0, label);
        }
    }

}  // namespace

LinSystem InterpolationInstance::full_system() const
{
    validate();
    const std::size_t n = num_vars();
    LinSystem sys(n);
    for (std::size_t i = 0; i < a_rows.size(); ++i) {
        IntVector row(n, 0);
        std::copy(a_rows[i].begin(), a_rows[i].end(), row.begin());
        std::copy(c_rows[i].begin(), c_rows[i].end(), row.begin() + static_cast<long>(n1 + n2));
        sys.add_row(std::move(row), a_rhs[i], RowLabel::original_p());
    }
    add_bounds(sys, 0, n1, RowLabel::original_p());
    for (std::size_t i = 0; i < b_rows.size(); ++i) {
        IntVector row(n, 0);
        std::copy(b_rows[i].begin(), b_rows[i].end(), row.begin() + static_cast<long>(n1));
        std::copy(d_rows[i].begin(), d_rows[i].end(), row.begin() + static_cast<long>(n1 + n2));
        sys.add_row(std::move(row), b_rhs[i], RowLabel::original_q());
    }
    add_bounds(sys, n1, n2, RowLabel::original_q());
    add_bounds(sys, n1 + n2, n3, RowLabel::shared());
    return sys;
}

LinSystem InterpolationInstance::instantiate(const std::vector<int>& z) const
{
    if (z.size() != n3)
        throw DimensionError("z has length " + std::to_string(z.size()) + ", expected " + std::to_string(n3));
    LinSystem full = full_system();
    const std::size_t n = n1 + n2;
    LinSystem out(n);
    for (std::size_t i = 0; i < full.num_rows(); ++i) {
        const auto& row = full.row(i);
        Integer rhs = full.rhs(i);
        for (std::size_t j = 0; j < n3; ++j)
            rhs -= row[n + j] * z[j];
        out.add_row(IntVector(row.begin(), row.begin() + static_cast<long>(n)), rhs, full.label(i));
    }
    return out;
}

ProductSystem InterpolationInstance::product_at(const std::vector<int>& z) const
{
    return ProductSystem::from_combined(instantiate(z), n1);
}

bool InterpolationInstance::in_z1(const std::vector<int>& z) const
{
    auto prod = product_at(z);
    return integer_feasible_oracle(prod.p, unit_box(n1)).has_value();
}

bool InterpolationInstance::in_z2(const std::vector<int>& z) const
{
    auto prod = product_at(z);
    return integer_feasible_oracle(prod.q, unit_box(n2)).has_value();
}

CertifiedTree instantiate_tree(const CertifiedTree& tree, const InterpolationInstance& inst, const std::vector<int>& z)
{
    if (z.size() != inst.n3)
        throw DimensionError("z has the wrong length");
    const std::size_t n = inst.n1 + inst.n2;
    BBTree out;
    // Splitting in preorder reproduces the node ids of the source tree.
    std::vector<std::pair<int, int>> stack{{tree.tree.root(), out.root()}};
    std::vector<int> map(tree.tree.num_nodes(), -1);
    while (! stack.empty()) {
        auto [src, dst] = stack.back();
        stack.pop_back();
        map[static_cast<std::size_t>(src)] = dst;
        if (tree.tree.is_leaf(src))
            continue;
        const auto& d = tree.tree.disjunction(src);
        if (d.alpha.size() != inst.num_vars())
            throw DimensionError("disjunction does not live in the instance space");
        Integer delta = d.delta;
        for (std::size_t j = 0; j < inst.n3; ++j)
            delta -= d.alpha[n + j] * z[j];
        int l = out.split(dst, Disjunction{IntVector(d.alpha.begin(), d.alpha.begin() + static_cast<long>(n)), delta});
        stack.push_back({tree.tree.right(src), l + 1});
        stack.push_back({tree.tree.left(src), l});
    }
    std::vector<FarkasCertificate> certs(out.num_nodes());
    for (int leaf : tree.tree.leaves())
        certs[static_cast<std::size_t>(map[static_cast<std::size_t>(leaf)])] = tree.cert(leaf);
    return {std::move(out), std::move(certs)};
}

std::size_t pair_index(int r, int i, int j)
{
    if (i < 0 || j <= i || j >= r)
        throw Error("pair index needs 0 <= i < j < r");
    // pairs (0,1), (0,2), ..., (0,r-1), (1,2), ...
    return static_cast<std::size_t>(i * r - i * (i + 1) / 2 + (j - i - 1));
}

InterpolationInstance gen_cc_instance(int r, int k)
{
    if (r < 2 || k < 2 || k > r)
        throw Error("clique-coloring instance needs r >= 2 and 2 <= k <= r");
    InterpolationInstance inst;
    inst.n1 = static_cast<std::size_t>(r * (k - 1));
    inst.n2 = static_cast<std::size_t>(r);
    inst.n3 = static_cast<std::size_t>(r * (r - 1) / 2);
    inst.id = "cc_r" + std::to_string(r) + "_k" + std::to_string(k);
    auto x = [&](int i, int l) { return static_cast<std::size_t>(i * (k - 1) + l); };
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j)
            for (int l = 0; l < k - 1; ++l) {
                IntVector a(inst.n1, 0), c(inst.n3, 0);
                a[x(i, l)] = 1;
                a[x(j, l)] = 1;
                c[pair_index(r, i, j)] = 1;
                inst.a_rows.push_back(std::move(a));
                inst.c_rows.push_back(std::move(c));
                inst.a_rhs.push_back(2);
            }
    for (int i = 0; i < r; ++i) {
        IntVector a(inst.n1, 0);
        for (int l = 0; l < k - 1; ++l)
            a[x(i, l)] = -1;
        inst.a_rows.push_back(std::move(a));
        inst.c_rows.push_back(IntVector(inst.n3, 0));
        inst.a_rhs.push_back(-1);
    }
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) {
            IntVector b(inst.n2, 0), d(inst.n3, 0);
            b[static_cast<std::size_t>(i)] = 1;
            b[static_cast<std::size_t>(j)] = 1;
            d[pair_index(r, i, j)] = -1;
            inst.b_rows.push_back(std::move(b));
            inst.d_rows.push_back(std::move(d));
            inst.b_rhs.push_back(1);
        }
    inst.b_rows.push_back(IntVector(inst.n2, -1));
    inst.d_rows.push_back(IntVector(inst.n3, 0));
    inst.b_rhs.push_back(-k);
    inst.validate();
    return inst;
}

int default_k(int r)
{
    if (r < 2)
        return 0;
    double v = std::pow(r / std::log2(static_cast<double>(r)), 2.0 / 3.0) / 8.0;
    return static_cast<int>(std::floor(v));
}

ZWitness gen_z_witness(int r, int k, ZSide side, std::mt19937_64& rng)
{
    auto inst = gen_cc_instance(r, k);
    std::bernoulli_distribution coin(0.5);
    ZWitness w;
    w.z.assign(inst.n3, 0);
    if (side == ZSide::Z1) {
        std::uniform_int_distribution<int> colour(0, k - 2);
        std::vector<int> c(static_cast<std::size_t>(r));
        for (auto& v : c)
            v = colour(rng);
        for (int i = 0; i < r; ++i)
            for (int j = i + 1; j < r; ++j)
                if (c[static_cast<std::size_t>(i)] != c[static_cast<std::size_t>(j)] && coin(rng))
                    w.z[pair_index(r, i, j)] = 1;
        w.point.assign(inst.n1, 0);
        for (int i = 0; i < r; ++i)
            w.point[static_cast<std::size_t>(i * (k - 1) + c[static_cast<std::size_t>(i)])] = 1;
    }
    else {
        std::vector<int> order(static_cast<std::size_t>(r));
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        w.point.assign(inst.n2, 0);
        for (int t = 0; t < k; ++t)
            w.point[static_cast<std::size_t>(order[static_cast<std::size_t>(t)])] = 1;
        for (int i = 0; i < r; ++i)
            for (int j = i + 1; j < r; ++j) {
                bool in_clique = w.point[static_cast<std::size_t>(i)] && w.point[static_cast<std::size_t>(j)];
                if (in_clique || coin(rng))
                    w.z[pair_index(r, i, j)] = 1;
            }
    }
    auto prod = inst.product_at(w.z);
    const LinSystem& factor = side == ZSide::Z1 ? prod.p : prod.q;
    RatVector pt(w.point.begin(), w.point.end());
    if (! factor.satisfied_by(pt))
        throw InvariantViolation("generated witness does not satisfy its factor system");
    return w;
}

std::vector<std::vector<int>> all_z(std::size_t n)
{
    if (n > 24)
        throw CapExceeded("refusing to enumerate 2^" + std::to_string(n) + " vectors");
    std::vector<std::vector<int>> out;
    for (unsigned long mask = 0; mask < (1UL << n); ++mask) {
        std::vector<int> z(n);
        for (std::size_t j = 0; j < n; ++j)
            z[j] = static_cast<int>((mask >> (n - 1 - j)) & 1);
        out.push_back(std::move(z));
    }
    return out;
}

LinSystem cross_polytope(RowLabel label)
{
    LinSystem sys(2);
    for (int s = 0; s < 4; ++s) {
        IntVector a(2);
        int outside = 0;
        for (int j = 0; j < 2; ++j) {
            bool in = (s >> j) & 1;
            a[static_cast<std::size_t>(j)] = in ? 2 : -2;
            outside += in ? 0 : 1;
        }
        sys.add_row(std::move(a), 3 - 2 * outside, label);
    }
    sys.add_box_rows(0, 1, label);
    return sys;
}

CrossPolytopeFixture cross_polytope_fixture()
{
    auto product = ProductSystem::make(cross_polytope(), cross_polytope(RowLabel::original_q()));
    auto e = [](std::size_t j) {
        IntVector a(4, 0);
        a[j] = 1;
        return a;
    };
    BBTree tree;
    int l = tree.split(tree.root(), {e(0), 0});
    int ll = tree.split(l, {e(2), 0});
    tree.split(ll, {e(3), 0});
    tree.split(ll + 1, {e(3), 0});
    tree.split(l + 1, {e(1), 0});

    // Each leaf fixes both coordinates of one factor; the cross row whose S is
    // the set of coordinates branched up, plus twice each of those branch rows,
    // sums to 0 <= -1.
    const std::size_t base = product.combined.num_rows();
    std::vector<FarkasCertificate> certs(tree.num_nodes());
    for (int leaf : tree.leaves()) {
        auto path = tree.path_to(leaf);
        std::size_t last_var = 0;
        for (std::size_t k = 0; k + 1 < path.size(); ++k) {
            const auto& a = tree.disjunction(path[k]).alpha;
            last_var = static_cast<std::size_t>(std::find(a.begin(), a.end(), 1) - a.begin());
        }
        const bool q_side = last_var >= 2;
        FarkasCertificate f(base + path.size() - 1, 0);
        int s = 0;
        for (std::size_t k = 0; k + 1 < path.size(); ++k) {
            const auto& a = tree.disjunction(path[k]).alpha;
            auto var = static_cast<std::size_t>(std::find(a.begin(), a.end(), 1) - a.begin());
            if ((var >= 2) != q_side)
                continue;
            f[base + k] = 2;
            if (path[k + 1] == tree.right(path[k]))
                s |= 1 << (var % 2);
        }
        f[(q_side ? 8 : 0) + static_cast<std::size_t>(s)] = 1;
        certs[static_cast<std::size_t>(leaf)] = std::move(f);
    }
    return {std::move(product), CertifiedTree{std::move(tree), std::move(certs)}};
}

namespace {

    IntVector random_row(std::mt19937_64& rng, std::size_t n, long lo, long hi)
    {
        std::uniform_int_distribution<long> d(lo, hi);
        IntVector a(n);
        for (auto& v : a)
            v = d(rng);
        return a;
    }

    // A right-hand side near the value at the box centre, so rows cut through the box.
    Integer central_rhs(std::mt19937_64& rng, const IntVector& a, const IntVector& extra = {})
    {
        Integer sum = 0;
        for (const auto& v : a)
            sum += v;
        for (const auto& v : extra)
            sum += v;
        std::uniform_int_distribution<int> shift(-1, 0);
        return floor_div(Rational(sum, 2)) + shift(rng);
    }

}  // namespace

LinSystem random_infeasible_system(std::mt19937_64& rng, std::size_t n, std::size_t m)
{
    for (int attempt = 0; attempt < 100000; ++attempt) {
        LinSystem sys(n);
        for (std::size_t i = 0; i < m; ++i) {
            auto a = random_row(rng, n, -3, 3);
            auto rhs = central_rhs(rng, a);
            sys.add_row(std::move(a), rhs);
        }
        sys.add_box_rows(0, 1);
        if (! integer_feasible_oracle(sys, unit_box(n)))
            return sys;
    }
    throw Error("could not draw an integer-infeasible system");
}

namespace {

    LinSystem relabel(const LinSystem& sys, RowLabel label)
    {
        LinSystem out(sys.num_vars());
        for (std::size_t i = 0; i < sys.num_rows(); ++i)
            out.add_row(sys.row(i), sys.rhs(i), label);
        return out;
    }

    LinSystem random_lp_feasible(std::mt19937_64& rng, std::size_t n, std::size_t m)
    {
        while (true) {
            LinSystem sys(n);
            for (std::size_t i = 0; i < m; ++i) {
                auto a = random_row(rng, n, -3, 3);
                auto rhs = central_rhs(rng, a);
                sys.add_row(std::move(a), rhs);
            }
            sys.add_box_rows(0, 1);
            if (! is_infeasible(lp_solve(sys)))
                return sys;
        }
    }

}  // namespace

ProductSystem random_product(std::mt19937_64& rng, std::size_t max_dim)
{
    std::uniform_int_distribution<std::size_t> dim(1, max_dim);
    std::uniform_int_distribution<int> which(0, 2);
    while (true) {
        std::size_t n1 = dim(rng), n2 = dim(rng);
        int w = which(rng);  // 0: P infeasible, 1: Q infeasible, 2: both
        LinSystem p = w != 1 ? random_infeasible_system(rng, n1, n1 + 1) : random_lp_feasible(rng, n1, n1);
        LinSystem q = w != 0 ? random_infeasible_system(rng, n2, n2 + 1) : random_lp_feasible(rng, n2, n2);
        // Only LP-feasible factors give trees with internal nodes.
        if (is_infeasible(lp_solve(p)) || is_infeasible(lp_solve(q)))
            continue;
        return ProductSystem::make(p, relabel(q, RowLabel::original_q()));
    }
}

CertifiedTree random_certified_tree(std::mt19937_64& rng, const LinSystem& sys, int general_depth)
{
    const std::size_t n = sys.num_vars();
    BBTree tree;
    std::vector<FarkasCertificate> certs;
    std::bernoulli_distribution coin(0.6);
    std::uniform_int_distribution<long> coeff(-1, 1);
    std::vector<int> todo{tree.root()};
    while (! todo.empty()) {
        int node = todo.back();
        todo.pop_back();
        auto problem = node_problem(tree, node, sys);
        auto result = lp_solve(problem);
        if (auto* inf = std::get_if<LpInfeasible>(&result)) {
            if (certs.size() <= static_cast<std::size_t>(node))
                certs.resize(static_cast<std::size_t>(node) + 1);
            certs[static_cast<std::size_t>(node)] = inf->certificate;
            continue;
        }
        const auto& x = std::get<LpFeasible>(result).point;
        std::optional<Disjunction> d;
        if (tree.depth(node) < general_depth && coin(rng)) {
            IntVector a(n);
            for (auto& v : a)
                v = coeff(rng);
            Rational value = 0;
            for (std::size_t j = 0; j < n; ++j)
                value += a[j] * x[j];
            if (value.get_den() != 1)
                d = Disjunction{a, floor_div(value)};
        }
        if (! d) {
            std::vector<std::size_t> fractional;
            for (std::size_t j = 0; j < n; ++j)
                if (x[j].get_den() != 1)
                    fractional.push_back(j);
            if (fractional.empty())
                throw IntegralPointFound(x);
            std::uniform_int_distribution<std::size_t> pick(0, fractional.size() - 1);
            std::size_t j = fractional[pick(rng)];
            IntVector a(n, 0);
            a[j] = 1;
            d = Disjunction{a, floor_div(x[j])};
        }
        int l = tree.split(node, *d);
        todo.push_back(l + 1);
        todo.push_back(l);
    }
    certs.resize(tree.num_nodes());
    return {std::move(tree), std::move(certs)};
}

InterpolationInstance random_interpolation_instance(std::mt19937_64& rng, std::size_t n1, std::size_t n2,
    std::size_t n3)
{
    for (int attempt = 0; attempt < 100000; ++attempt) {
        InterpolationInstance inst;
        inst.n1 = n1;
        inst.n2 = n2;
        inst.n3 = n3;
        inst.id = "random";
        for (std::size_t i = 0; i < n1 + 1; ++i) {
            auto a = random_row(rng, n1, -2, 2);
            auto c = random_row(rng, n3, 0, 2);
            inst.a_rhs.push_back(central_rhs(rng, a, c));
            inst.a_rows.push_back(std::move(a));
            inst.c_rows.push_back(std::move(c));
        }
        for (std::size_t i = 0; i < n2 + 1; ++i) {
            auto b = random_row(rng, n2, -2, 2);
            auto d = random_row(rng, n3, -2, 0);
            inst.b_rhs.push_back(central_rhs(rng, b, d));
            inst.b_rows.push_back(std::move(b));
            inst.d_rows.push_back(std::move(d));
        }
        auto full = inst.full_system();
        if (is_infeasible(lp_solve(full)))
            continue;
        if (! integer_feasible_oracle(full, unit_box(inst.num_vars())))
            return inst;
    }
    throw Error("could not draw an integer-infeasible interpolation instance");
}

}  // namespace bbinterp
