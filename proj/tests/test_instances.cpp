#include "bbinterp/cnf.hpp"
#include "bbinterp/errors.hpp"
#include "bbinterp/instances.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace bbinterp;

namespace {

IntVector iv(std::initializer_list<long> v) { return IntVector(v.begin(), v.end()); }

// Independent check of the clique-coloring semantics straight from the graph.
bool colourable(int r, int colours, const std::vector<int>& z)
{
    std::vector<int> c(static_cast<std::size_t>(r), 0);
    while (true) {
        bool ok = true;
        for (int i = 0; i < r && ok; ++i)
            for (int j = i + 1; j < r && ok; ++j)
                if (z[pair_index(r, i, j)] && c[static_cast<std::size_t>(i)] == c[static_cast<std::size_t>(j)])
                    ok = false;
        if (ok)
            return true;
        int k = 0;
        while (k < r && ++c[static_cast<std::size_t>(k)] == colours)
            c[static_cast<std::size_t>(k++)] = 0;
        if (k == r)
            return false;
    }
}

bool has_clique(int r, int k, const std::vector<int>& z)
{
    for (unsigned mask = 0; mask < (1U << r); ++mask) {
        if (__builtin_popcount(mask) != k)
            continue;
        bool ok = true;
        for (int i = 0; i < r && ok; ++i)
            for (int j = i + 1; j < r && ok; ++j)
                if ((mask >> i & 1) && (mask >> j & 1) && ! z[pair_index(r, i, j)])
                    ok = false;
        if (ok)
            return true;
    }
    return false;
}

}  // namespace

TEST(CliqueColoring, Dimensions)
{
    auto inst = gen_cc_instance(3, 2);
    EXPECT_EQ(inst.n1, 3u);
    EXPECT_EQ(inst.n2, 3u);
    EXPECT_EQ(inst.n3, 3u);
    auto big = gen_cc_instance(5, 3);
    EXPECT_EQ(big.n1, 10u);
    EXPECT_EQ(big.n2, 5u);
    EXPECT_EQ(big.n3, 10u);
    EXPECT_THROW(gen_cc_instance(1, 2), Error);
    EXPECT_THROW(gen_cc_instance(3, 4), Error);
    EXPECT_THROW(gen_cc_instance(3, 1), Error);
}

TEST(CliqueColoring, PairIndexIsLexicographic)
{
    EXPECT_EQ(pair_index(4, 0, 1), 0u);
    EXPECT_EQ(pair_index(4, 0, 3), 2u);
    EXPECT_EQ(pair_index(4, 1, 2), 3u);
    EXPECT_EQ(pair_index(4, 2, 3), 5u);
}

TEST(CliqueColoring, DefaultK)
{
    for (int r : {2, 8, 100, 1000, 100000}) {
        double expect = std::floor(std::pow(r / std::log2(double(r)), 2.0 / 3.0) / 8.0);
        EXPECT_EQ(default_k(r), static_cast<int>(expect));
    }
    EXPECT_EQ(default_k(1000), 2);
}

TEST(CliqueColoring, FullSystemIsIntegerInfeasible)
{
    for (auto [r, k] : {std::pair{3, 2}, std::pair{3, 3}, std::pair{4, 2}}) {
        auto inst = gen_cc_instance(r, k);
        EXPECT_FALSE(integer_feasible_oracle(inst.full_system(), unit_box(inst.num_vars()))) << r << "," << k;
    }
}

TEST(CliqueColoring, TriangleWithKTwo)
{
    auto inst = gen_cc_instance(3, 2);
    std::vector<int> triangle{1, 1, 1};
    EXPECT_TRUE(inst.in_z2(triangle));
    EXPECT_FALSE(inst.in_z1(triangle));
}

TEST(CliqueColoring, FactorSemanticsMatchTheGraph)
{
    for (auto [r, k] : {std::pair{3, 2}, std::pair{4, 3}}) {
        auto inst = gen_cc_instance(r, k);
        for (const auto& z : all_z(inst.n3)) {
            EXPECT_EQ(inst.in_z1(z), colourable(r, k - 1, z));
            EXPECT_EQ(inst.in_z2(z), has_clique(r, k, z));
        }
    }
}

TEST(CliqueColoring, WitnessesHaveExactlyOneFeasibleFactor)
{
    std::mt19937_64 rng(3);
    for (int t = 0; t < 40; ++t) {
        for (auto side : {ZSide::Z1, ZSide::Z2}) {
            auto w = gen_z_witness(5, 3, side, rng);
            auto inst = gen_cc_instance(5, 3);
            EXPECT_EQ(inst.in_z1(w.z), side == ZSide::Z1);
            EXPECT_EQ(inst.in_z2(w.z), side == ZSide::Z2);
        }
    }
}

TEST(CliqueColoring, EmptyAndCompleteGraphs)
{
    auto inst = gen_cc_instance(4, 3);
    EXPECT_TRUE(inst.in_z1(std::vector<int>(6, 0)));
    EXPECT_TRUE(inst.in_z2(std::vector<int>(6, 1)));
}

TEST(Interpolation, SignValidation)
{
    auto inst = gen_cc_instance(3, 2);
    inst.c_rows[0][0] = -1;
    EXPECT_THROW(inst.validate(), Error);
    inst = gen_cc_instance(3, 2);
    inst.d_rows[0][0] = 1;
    EXPECT_THROW(inst.validate(), Error);
    inst = gen_cc_instance(3, 2);
    inst.a_rows[0].pop_back();
    EXPECT_THROW(inst.validate(), DimensionError);
}

TEST(Interpolation, InstantiatedTreeStaysValid)
{
    std::mt19937_64 rng(17);
    for (int t = 0; t < 20; ++t) {
        auto inst = random_interpolation_instance(rng, 2, 2, 2);
        auto tree = random_certified_tree(rng, inst.full_system());
        ASSERT_TRUE(check_certified_tree(tree, inst.full_system()));
        for (const auto& z : all_z(inst.n3)) {
            auto local = instantiate_tree(tree, inst, z);
            EXPECT_TRUE(check_certified_tree(local, inst.instantiate(z)));
        }
    }
}

TEST(CrossPolytope, Rows)
{
    auto c = cross_polytope();
    ASSERT_EQ(c.num_rows(), 8u);
    EXPECT_EQ(c.row(0), iv({-2, -2}));
    EXPECT_EQ(c.rhs(0), -1);
    EXPECT_EQ(c.row(3), iv({2, 2}));
    EXPECT_EQ(c.rhs(3), 3);
    EXPECT_FALSE(integer_feasible_oracle(c, unit_box(2)));
    EXPECT_FALSE(is_infeasible(lp_solve(c)));
}

TEST(RandomKcnf, ReproducibleAndWellFormed)
{
    auto a = gen_random_kcnf(10, 3, 63, 42), b = gen_random_kcnf(10, 3, 63, 42);
    EXPECT_EQ(to_dimacs(a.cnf), to_dimacs(b.cnf));
    EXPECT_EQ(a.draws.size(), 63u);
    EXPECT_LE(a.cnf.clauses.size(), 63u);
    EXPECT_TRUE(a.cnf.is_k_cnf(3));
    a.cnf.validate();
    EXPECT_EQ(parse_dimacs(to_dimacs(a.cnf)), a.cnf);
}

TEST(RandomKcnf, FullWidthDrawsPickSignPatterns)
{
    auto r = gen_random_kcnf(4, 4, 30, 1);
    for (const auto& c : r.draws) {
        ASSERT_EQ(c.size(), 4u);
        for (int v = 1; v <= 4; ++v)
            EXPECT_EQ(std::abs(c[static_cast<std::size_t>(v - 1)]), v);
    }
}

TEST(RandomKcnf, DenseRegimeIsMostlyUnsatisfiable)
{
    const int m = 63;
    EXPECT_LT(m, (std::log(2.0) + 0.1) * 8 * 10);
    EXPECT_GT(m, std::log(2.0) * 8 * 10);
    int unsat = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed)
        unsat += ! satisfiable(gen_random_kcnf(10, 3, m, seed).cnf);
    EXPECT_GE(unsat, 20);
}

TEST(Dimacs, RejectsMalformed)
{
    EXPECT_THROW(parse_dimacs("1 2 0\n"), Error);
    EXPECT_THROW(parse_dimacs("p cnf 2 1\n1 -1 0\n"), Error);
    EXPECT_THROW(parse_dimacs("p cnf 2 2\n1 2 0\n"), Error);
    EXPECT_THROW(parse_dimacs("p cnf 2 1\n1 3 0\n"), Error);
    auto c = parse_dimacs("c comment\np cnf 2 2\n1 -2 0\n2 0\n");
    EXPECT_EQ(c.clauses.size(), 2u);
}

TEST(CnfToIlp, Rows)
{
    auto s = cnf_to_ilp(CNF{2, {{1}}});
    EXPECT_EQ(s.row(0), iv({-1, 0}));
    EXPECT_EQ(s.rhs(0), -1);
    s = cnf_to_ilp(CNF{2, {{-1, 2}}});
    EXPECT_EQ(s.row(0), iv({1, -1}));
    EXPECT_EQ(s.rhs(0), 0);
    s = cnf_to_ilp(CNF{1, {{1}, {-1}}});
    auto r = lp_solve(s);
    ASSERT_TRUE(is_infeasible(r));
    const auto& f = std::get<LpInfeasible>(r).certificate;
    EXPECT_TRUE(check_farkas(s, f));
    EXPECT_EQ(f[0], f[1]);
    EXPECT_GT(f[0], 0);
}

TEST(CnfToIlp, IntegerPointsAreSatisfyingAssignments)
{
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto cnf = gen_random_kcnf(6, 3, 20, seed).cnf;
        auto pt = integer_feasible_oracle(cnf_to_ilp(cnf), unit_box(6));
        EXPECT_EQ(pt.has_value(), satisfiable(cnf));
    }
}

TEST(SplitCnf, Examples)
{
    CNF cnf{2, {{1}, {2}}};
    auto s = split_cnf(cnf, {0}, {1});
    EXPECT_EQ(s.d0.clauses[0], (Clause{1, -3}));
    EXPECT_EQ(s.d1.clauses[0], (Clause{3}));
    EXPECT_EQ(s.d1.clauses[1], (Clause{2, 4}));
    EXPECT_THROW(split_cnf(cnf, {0}, {0}), Error);
    EXPECT_THROW(split_cnf(cnf, {0}, {}), Error);
}

TEST(SplitCnf, SignPatternAndEquisatisfiability)
{
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        auto cnf = gen_random_kcnf(6, 3, 10 + static_cast<int>(seed % 5), seed).cnf;
        auto s = split_cnf(cnf, {0, 2, 4}, {1, 3, 5});
        EXPECT_EQ(satisfiable(cnf), satisfiable(s.combined()));
        auto inst = s.instance();
        EXPECT_NO_THROW(inst.validate());
        bool int_feasible = integer_feasible_oracle(inst.full_system(), unit_box(inst.num_vars())).has_value();
        EXPECT_EQ(int_feasible, satisfiable(cnf));
    }
}

TEST(SplitCnf, LiftedTreesStayValid)
{
    int lifted = 0;
    for (std::uint64_t seed = 0; seed < 30 && lifted < 8; ++seed) {
        auto cnf = gen_random_kcnf(6, 3, 40, seed).cnf;
        if (satisfiable(cnf))
            continue;
        auto tree = solve_bb(cnf_to_ilp(cnf));
        auto s = split_cnf(cnf, {0, 1, 2}, {3, 4, 5});
        auto lifted_tree = lift_tree(tree.tree, s);
        EXPECT_TRUE(validate_tree(lifted_tree.tree, s.instance().full_system()));
        EXPECT_EQ(tree_size(lifted_tree.tree), tree_size(tree.tree));
        ++lifted;
    }
    EXPECT_GT(lifted, 0);
}

TEST(SplitCnf, CertificateHolds)
{
    // {x} and {not x} with X0 = {x}: every A is decided by the X0 side.
    auto s = split_cnf(CNF{1, {{1}, {-1}}}, {0}, {});
    EXPECT_TRUE(certificate_holds(s, {1, 1}, 1));
    EXPECT_FALSE(certificate_holds(s, {1, 0}, 1));
    EXPECT_TRUE(certificate_holds(s, {0, 0}, 0));  // both C_i^1 are empty clauses
    EXPECT_THROW(certificate_holds(s, {1}, 1), DimensionError);
}
