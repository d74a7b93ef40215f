#include "support.hpp"

#include "bbinterp/lp.hpp"

#include <bit>
#include <cstdint>
#include <set>

namespace testsupport {

bool fm_empty(const LinSystem& sys)
{
    // history = original rows combined into this one (Kohler's criterion drops
    // rows combining more than k+1 originals after k eliminations)
    struct Row {
        RatVector a;
        Rational b;
        std::uint64_t history;
    };
    const std::size_t n = sys.num_vars();
    std::vector<Row> rows;
    for (std::size_t i = 0; i < sys.num_rows(); ++i) {
        Row r{RatVector(n), Rational(sys.rhs(i)), std::uint64_t{1} << i};
        for (std::size_t j = 0; j < n; ++j)
            r.a[j] = sys.row(i)[j];
        rows.push_back(std::move(r));
    }
    std::vector<bool> done(n, false);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t j = n, best = 0;
        for (std::size_t c = 0; c < n; ++c) {
            if (done[c])
                continue;
            std::size_t pos = 0, neg = 0;
            for (const auto& r : rows)
                (r.a[c] > 0 ? pos : neg) += r.a[c] != 0;
            if (j == n || pos * neg < best) {
                j = c;
                best = pos * neg;
            }
        }
        done[j] = true;
        std::vector<Row> pos, neg, keep;
        for (auto& r : rows) {
            if (r.a[j] > 0)
                pos.push_back(r);
            else if (r.a[j] < 0)
                neg.push_back(r);
            else
                keep.push_back(r);
        }
        for (const auto& p : pos)
            for (const auto& q : neg) {
                std::uint64_t h = p.history | q.history;
                if (static_cast<std::size_t>(std::popcount(h)) > k + 2)
                    continue;
                Rational sp = 1 / p.a[j], sq = -1 / q.a[j];
                Row c{RatVector(n), p.b * sp + q.b * sq, h};
                for (std::size_t t = 0; t < n; ++t)
                    c.a[t] = p.a[t] * sp + q.a[t] * sq;
                keep.push_back(std::move(c));
            }
        std::set<std::pair<RatVector, Rational>> uniq;
        rows.clear();
        for (auto& r : keep) {
            Rational scale = 0;
            for (const auto& v : r.a)
                if (abs(v) > scale)
                    scale = abs(v);
            if (scale == 0) {
                if (r.b < 0)
                    return true;
                continue;
            }
            for (auto& v : r.a)
                v /= scale;
            r.b /= scale;
            if (uniq.emplace(r.a, r.b).second)
                rows.push_back(std::move(r));
        }
    }
    return false;
}

long uniform(std::mt19937_64& rng, long lo, long hi)
{
    return lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1));
}

LinSystem random_system(std::mt19937_64& rng, std::size_t n, std::size_t m, long lo, long hi)
{
    LinSystem sys(n);
    for (std::size_t i = 0; i < m; ++i) {
        IntVector a(n);
        for (auto& v : a)
            v = uniform(rng, lo, hi);
        sys.add_row(std::move(a), uniform(rng, lo, hi));
    }
    return sys;
}

LinSystem with_unit_bounds(LinSystem sys)
{
    sys.add_box_rows(0, 1);
    return sys;
}

LinSystem cross_polytope_2d()
{
    LinSystem sys(2);
    for (int s = 0; s < 4; ++s) {
        IntVector a(2);
        int outside = 0;
        for (int j = 0; j < 2; ++j) {
            bool in = (s >> j) & 1;
            a[j] = in ? 2 : -2;
            outside += in ? 0 : 1;
        }
        sys.add_row(std::move(a), 3 - 2 * outside);
    }
    sys.add_box_rows(0, 1);
    return sys;
}

GateFn random_fn(std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> kind(0, 5);
    std::uniform_int_distribution<long> small(-3, 3);
    const Rational half(1, 2);
    const Rational scales[] = {0, 1, 2, half};
    std::uniform_int_distribution<int> pick(0, 3);
    switch (kind(rng)) {
    case 0:
    case 1:
        return fn::combine(scales[pick(rng)], scales[pick(rng)], small(rng));
    case 2:
        return fn::max();
    case 3: {
        Rational s = scales[pick(rng)], level = small(rng) + 3;
        return fn::bump(s, level, s * level + pick(rng));
    }
    case 4:
        return fn::threshold(small(rng), pick(rng) % 2 == 0);
    default:
        return fn::phi();
    }
}

// A random monotone circuit over x1..x<k> and y whose output is a threshold gate.
Circuit random_circuit(std::mt19937_64& rng, int k, int gates)
{
    CircuitBuilder b;
    for (int i = 1; i <= k; ++i)
        b.input("x" + std::to_string(i));
    b.input("y");
    for (int g = 0; g < gates; ++g) {
        std::uniform_int_distribution<int> pred(0, b.num_gates() - 1);
        b.apply(random_fn(rng), pred(rng), pred(rng));
    }
    std::uniform_int_distribution<int> pred(0, b.num_gates() - 1);
    std::uniform_int_distribution<long> t(-4, 8);
    GateFn out = fn::threshold(t(rng), rng() % 2 == 0, fn::combine(1, 1, 0));
    return b.finish(b.apply(out, pred(rng), pred(rng)));
}

Assignment random_point(std::mt19937_64& rng, int k)
{
    std::uniform_int_distribution<long> num(-12, 24), den(1, 4);
    Assignment x;
    for (int i = 1; i <= k; ++i) {
        Rational r(num(rng), den(rng));
        r.canonicalize();
        x["x" + std::to_string(i)] = r;
    }
    return x;
}

// Largest lambda in {0..2^q-1} with c(x, top - lambda) = 1, by enumeration.
long brute_search(const Circuit& c, Assignment x, const std::string& var, int q, const Rational& top)
{
    long best = -1;
    for (long l = 0; l < (1L << q); ++l) {
        x[var] = top - l;
        if (eval_circuit(c, x) == 1)
            best = l;
    }
    return best;
}

// Independent conformance check: shape, alpha projection, and every leaf either
// LP-infeasible with its cert verified by check_farkas or cut off by an empty
// halfspace recomputed from the box extremes.
bool independent_conforming(const CertifiedTree& original, const ProductSystem& prod, const Decomposition& d)
{
    const auto& t = d.result.tree;
    if (! original.tree.same_shape(t) || d.result.certs.size() != t.num_nodes())
        return false;
    const std::size_t off = d.side == Side::P ? 0 : prod.n1();
    const std::size_t dim = d.side == Side::P ? prod.n1() : prod.n2();
    for (int node : t.internal_nodes()) {
        const auto& full = original.tree.disjunction(node).alpha;
        IntVector expect(full.begin() + static_cast<long>(off), full.begin() + static_cast<long>(off + dim));
        if (t.disjunction(node).alpha != expect)
            return false;
    }
    const auto& sys = d.side == Side::P ? prod.p : prod.q;
    for (int leaf : t.leaves()) {
        auto problem = node_problem(t, leaf, sys);
        if (check_farkas(problem, d.result.cert(leaf)))
            continue;
        bool empty_edge = false;
        auto path = t.path_to(leaf);
        for (std::size_t k = 0; k + 1 < path.size() && ! empty_edge; ++k) {
            const auto& dj = t.disjunction(path[k]);
            Rational lo = 0, hi = 0;
            for (std::size_t j = 0; j < dim; ++j) {
                Rational a = dj.alpha[j];
                auto [blo, bhi] = d.result.box.bounds[j];
                lo += std::min(a * blo, a * bhi);
                hi += std::max(a * blo, a * bhi);
            }
            bool left = path[k + 1] == t.left(path[k]);
            empty_edge = left ? Rational(dj.delta) < lo : Rational(dj.delta + 1) > hi;
        }
        if (! empty_edge)
            return false;
    }
    return true;
}

}  // namespace testsupport
