#include "bbinterp/cnf.hpp"
#include "bbinterp/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace bbinterp {

void CNF::validate() const
{
    if (n < 0)
        throw Error("negative variable count");
    for (const auto& c : clauses) {
        std::set<int> seen;
        for (int lit : c) {
            if (lit == 0 || std::abs(lit) > n)
                throw Error("literal " + std::to_string(lit) + " out of range");
            if (seen.count(-lit))
                throw Error("clause contains a variable and its negation");
            seen.insert(lit);
        }
    }
}

bool CNF::is_k_cnf(int k) const
{
    return std::all_of(clauses.begin(), clauses.end(), [k](const Clause& c) { return static_cast<int>(c.size()) == k; });
}

Clause canonical_clause(Clause c)
{
    std::sort(c.begin(), c.end(), [](int a, int b) { return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b; });
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
}

RandomCnf gen_random_kcnf(int n, int k, int m, std::uint64_t seed)
{
    if (k < 1 || k > n || m < 0)
        throw Error("random k-CNF needs 1 <= k <= n and m >= 0");
    RandomCnf out;
    out.seed = seed;
    out.cnf.n = n;
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution sign(0.5);
    std::set<Clause> seen;
    std::vector<int> vars(static_cast<std::size_t>(n));
    for (int d = 0; d < m; ++d) {
        std::iota(vars.begin(), vars.end(), 1);
        // partial Fisher-Yates: the first k entries are a uniform k-subset
        for (int t = 0; t < k; ++t) {
            std::uniform_int_distribution<int> pick(t, n - 1);
            std::swap(vars[static_cast<std::size_t>(t)], vars[static_cast<std::size_t>(pick(rng))]);
        }
        Clause c;
        for (int t = 0; t < k; ++t)
            c.push_back(sign(rng) ? vars[static_cast<std::size_t>(t)] : -vars[static_cast<std::size_t>(t)]);
        c = canonical_clause(std::move(c));
        out.draws.push_back(c);
        if (seen.insert(c).second)
            out.cnf.clauses.push_back(c);
    }
    return out;
}

std::string to_dimacs(const CNF& cnf)
{
    std::ostringstream out;
    out << "p cnf " << cnf.n << ' ' << cnf.clauses.size() << '\n';
    for (const auto& c : cnf.clauses) {
        for (int lit : c)
            out << lit << ' ';
        out << "0\n";
    }
    return out.str();
}

CNF parse_dimacs(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    CNF cnf;
    long declared = -1;
    Clause current;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string first;
        if (! (ls >> first) || first == "c" || first[0] == 'c')
            continue;
        if (first == "p") {
            std::string fmt;
            if (! (ls >> fmt >> cnf.n >> declared) || fmt != "cnf")
                throw Error("malformed DIMACS header");
            continue;
        }
        if (declared < 0)
            throw Error("DIMACS clause before header");
        std::istringstream all(line);
        long lit;
        while (all >> lit) {
            if (lit == 0) {
                cnf.clauses.push_back(current);
                current.clear();
            }
            else
                current.push_back(static_cast<int>(lit));
        }
        if (! all.eof())
            throw Error("malformed DIMACS clause line: " + line);
    }
    if (! current.empty())
        throw Error("unterminated DIMACS clause");
    if (declared >= 0 && static_cast<long>(cnf.clauses.size()) != declared)
        throw Error("DIMACS clause count does not match the header");
    cnf.validate();
    return cnf;
}

namespace {

    // Row of "clause satisfied" over the given variable positions.
    void clause_row(const Clause& c, const std::vector<long>& position, IntVector& row, Integer& rhs)
    {
        long neg = 0;
        for (int lit : c) {
            auto j = static_cast<std::size_t>(position[static_cast<std::size_t>(std::abs(lit) - 1)]);
            if (lit > 0)
                row[j] -= 1;
            else {
                row[j] += 1;
                ++neg;
            }
        }
        rhs = neg - 1;
    }

}  // namespace

LinSystem cnf_to_ilp(const CNF& cnf)
{
    cnf.validate();
    const auto n = static_cast<std::size_t>(cnf.n);
    std::vector<long> identity(n);
    std::iota(identity.begin(), identity.end(), 0L);
    LinSystem sys(n);
    for (const auto& c : cnf.clauses) {
        IntVector row(n, 0);
        Integer rhs;
        clause_row(c, identity, row, rhs);
        sys.add_row(std::move(row), rhs);
    }
    sys.add_box_rows(0, 1);
    return sys;
}

namespace {

    struct Masks {
        std::uint32_t pos = 0, neg = 0;
    };

    std::vector<Masks> clause_masks(const std::vector<Clause>& clauses, const std::vector<long>& position)
    {
        std::vector<Masks> out;
        for (const auto& c : clauses) {
            Masks m;
            for (int lit : c) {
                long j = position[static_cast<std::size_t>(std::abs(lit) - 1)];
                if (j < 0)
                    throw InvariantViolation("clause mentions a variable outside the enumerated set");
                (lit > 0 ? m.pos : m.neg) |= 1U << j;
            }
            out.push_back(m);
        }
        return out;
    }

    std::optional<std::uint32_t> enumerate(const std::vector<Masks>& clauses, std::size_t n)
    {
        if (n > 24)
            throw CapExceeded("SAT enumeration over " + std::to_string(n) + " variables");
        const std::uint32_t full = n == 0 ? 0 : (n == 32 ? ~0U : (1U << n) - 1);
        for (std::uint64_t a = 0; a < (1ULL << n); ++a) {
            auto assign = static_cast<std::uint32_t>(a);
            bool ok = true;
            for (const auto& m : clauses)
                if (! (assign & m.pos) && ! (~assign & full & m.neg)) {
                    ok = false;
                    break;
                }
            if (ok)
                return assign;
        }
        return std::nullopt;
    }

}  // namespace

std::optional<std::uint32_t> satisfying_assignment(const CNF& cnf)
{
    cnf.validate();
    std::vector<long> identity(static_cast<std::size_t>(cnf.n));
    std::iota(identity.begin(), identity.end(), 0L);
    return enumerate(clause_masks(cnf.clauses, identity), static_cast<std::size_t>(cnf.n));
}

bool satisfiable(const CNF& cnf) { return satisfying_assignment(cnf).has_value(); }

SplitCNF split_cnf(const CNF& cnf, const std::vector<int>& x0, const std::vector<int>& x1)
{
    cnf.validate();
    std::vector<int> side(static_cast<std::size_t>(cnf.n), -1);
    for (int v : x0) {
        if (v < 0 || v >= cnf.n || side[static_cast<std::size_t>(v)] != -1)
            throw Error("X0, X1 is not a partition of the variables");
        side[static_cast<std::size_t>(v)] = 0;
    }
    for (int v : x1) {
        if (v < 0 || v >= cnf.n || side[static_cast<std::size_t>(v)] != -1)
            throw Error("X0, X1 is not a partition of the variables");
        side[static_cast<std::size_t>(v)] = 1;
    }
    if (std::count(side.begin(), side.end(), -1) != 0)
        throw Error("X0, X1 is not a partition of the variables");
    SplitCNF s{cnf, x0, x1, {}, {}};
    const int m = static_cast<int>(cnf.clauses.size());
    s.d0.n = s.d1.n = cnf.n + m;
    for (int i = 0; i < m; ++i) {
        Clause c0, c1;
        for (int lit : cnf.clauses[static_cast<std::size_t>(i)])
            (side[static_cast<std::size_t>(std::abs(lit) - 1)] == 0 ? c0 : c1).push_back(lit);
        int y = cnf.n + i + 1;
        c0.push_back(-y);
        c1.push_back(y);
        s.d0.clauses.push_back(std::move(c0));
        s.d1.clauses.push_back(std::move(c1));
    }
    return s;
}

CNF SplitCNF::combined() const
{
    CNF c{d0.n, d0.clauses};
    c.clauses.insert(c.clauses.end(), d1.clauses.begin(), d1.clauses.end());
    return c;
}

InterpolationInstance SplitCNF::instance() const
{
    InterpolationInstance inst;
    inst.n1 = x0.size();
    inst.n2 = x1.size();
    inst.n3 = m();
    inst.id = "split_cnf";
    // position of every d0/d1 variable inside its block
    std::vector<long> pos(static_cast<std::size_t>(d0.n), -1);
    for (std::size_t k = 0; k < x0.size(); ++k)
        pos[static_cast<std::size_t>(x0[k])] = static_cast<long>(k);
    for (std::size_t k = 0; k < x1.size(); ++k)
        pos[static_cast<std::size_t>(x1[k])] = static_cast<long>(k);
    for (std::size_t i = 0; i < m(); ++i)
        pos[static_cast<std::size_t>(base.n) + i] = static_cast<long>(i);
    auto split_row = [&](const Clause& c, std::size_t width, IntVector& a, IntVector& z, Integer& rhs) {
        a.assign(width, 0);
        z.assign(m(), 0);
        long neg = 0;
        for (int lit : c) {
            auto v = static_cast<std::size_t>(std::abs(lit) - 1);
            IntVector& target = v >= static_cast<std::size_t>(base.n) ? z : a;
            target[static_cast<std::size_t>(pos[v])] += lit > 0 ? -1 : 1;
            neg += lit < 0;
        }
        rhs = neg - 1;
    };
    for (std::size_t i = 0; i < m(); ++i) {
        IntVector a, z;
        Integer rhs;
        split_row(d0.clauses[i], inst.n1, a, z, rhs);
        inst.a_rows.push_back(std::move(a));
        inst.c_rows.push_back(std::move(z));
        inst.a_rhs.push_back(rhs);
        split_row(d1.clauses[i], inst.n2, a, z, rhs);
        inst.b_rows.push_back(std::move(a));
        inst.d_rows.push_back(std::move(z));
        inst.b_rhs.push_back(rhs);
    }
    inst.validate();
    return inst;
}

CertifiedTree lift_tree(const BBTree& tree, const SplitCNF& split)
{
    const auto inst = split.instance();
    const std::size_t n = inst.num_vars();
    std::vector<std::size_t> target(static_cast<std::size_t>(split.base.n));
    for (std::size_t k = 0; k < split.x0.size(); ++k)
        target[static_cast<std::size_t>(split.x0[k])] = k;
    for (std::size_t k = 0; k < split.x1.size(); ++k)
        target[static_cast<std::size_t>(split.x1[k])] = inst.n1 + k;
    BBTree out;
    std::vector<std::pair<int, int>> stack{{tree.root(), out.root()}};
    while (! stack.empty()) {
        auto [src, dst] = stack.back();
        stack.pop_back();
        if (tree.is_leaf(src))
            continue;
        const auto& d = tree.disjunction(src);
        if (d.alpha.size() != static_cast<std::size_t>(split.base.n))
            throw DimensionError("tree does not live in the CNF's variable space");
        IntVector alpha(n, 0);
        for (std::size_t j = 0; j < d.alpha.size(); ++j)
            alpha[target[j]] = d.alpha[j];
        int l = out.split(dst, Disjunction{std::move(alpha), d.delta});
        stack.push_back({tree.right(src), l + 1});
        stack.push_back({tree.left(src), l});
    }
    return certify_tree(out, inst.full_system());
}

bool certificate_holds(const SplitCNF& split, const std::vector<int>& a, int value)
{
    if (a.size() != split.m())
        throw DimensionError("subset indicator has the wrong length");
    const auto& vars = value == 1 ? split.x0 : split.x1;
    std::vector<long> position(static_cast<std::size_t>(split.d0.n), -1);
    for (std::size_t k = 0; k < vars.size(); ++k)
        position[static_cast<std::size_t>(vars[k])] = static_cast<long>(k);
    std::vector<Clause> active;
    for (std::size_t i = 0; i < split.m(); ++i) {
        bool in_a = a[i] != 0;
        if (value == 1 && in_a)
            active.push_back(split.d0.clauses[i]);
        else if (value == 0 && ! in_a)
            active.push_back(split.d1.clauses[i]);
    }
    for (auto& c : active)
        c.pop_back();  // drop the selector literal
    return ! enumerate(clause_masks(active, position), vars.size()).has_value();
}

}  // namespace bbinterp
