#include "bbinterp/errors.hpp"
#include "bbinterp/lp.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace bbinterp;
using namespace testsupport;

namespace {

LinSystem one_var(std::initializer_list<std::pair<long, long>> rows)
{
    LinSystem sys(1);
    for (auto [a, b] : rows)
        sys.add_row({Integer(a)}, b);
    return sys;
}

}  // namespace

TEST(Rational, RoundTripsThroughText)
{
    EXPECT_EQ(to_string(parse_rational("6/4")), "3/2");
    EXPECT_EQ(to_string(parse_rational("-7")), "-7");
    EXPECT_EQ(parse_rational("-1/2"), Rational(-1, 2));
    EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
    EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
    EXPECT_EQ(floor_div(Rational(-1, 2)), -1);
    EXPECT_EQ(ceil_div(Rational(-1, 2)), 0);
    EXPECT_EQ(floor_to_multiple(Rational(11, 2), 2), 4);
}

TEST(CheckFarkas, TelescopingPair)
{
    EXPECT_TRUE(check_farkas(one_var({{1, 0}, {-1, -1}}), {1, 1}));
}

TEST(CheckFarkas, NonNegativeCombinationIsNotACertificate)
{
    EXPECT_FALSE(check_farkas(one_var({{1, 1}, {-1, 0}}), {1, 1}));
}

TEST(CheckFarkas, RejectsNegativeEntriesAndWrongLength)
{
    EXPECT_FALSE(check_farkas(one_var({{1, 0}, {-1, -1}}), {-1, 1}));
    EXPECT_THROW(check_farkas(one_var({{1, 0}}), {1, 1}), DimensionError);
}

TEST(LpSolve, UnitIntervalGivesZero)
{
    auto r = lp_solve(one_var({{1, 1}, {-1, 0}}));
    ASSERT_FALSE(is_infeasible(r));
    EXPECT_EQ(std::get<LpFeasible>(r).point, RatVector{0});
}

TEST(LpSolve, TelescopingPairIsInfeasible)
{
    auto r = lp_solve(one_var({{1, 0}, {-1, -1}}));
    ASSERT_TRUE(is_infeasible(r));
    EXPECT_EQ(std::get<LpInfeasible>(r).certificate, (IntVector{1, 1}));
}

TEST(LpSolve, EmptySystemIsFeasibleAtOrigin)
{
    auto r = lp_solve(LinSystem(3));
    ASSERT_FALSE(is_infeasible(r));
    EXPECT_EQ(std::get<LpFeasible>(r).point, RatVector(3, Rational(0)));
}

TEST(LpSolve, CrossPolytopeIsFeasibleAndContainsCentre)
{
    auto sys = cross_polytope_2d();
    EXPECT_TRUE(sys.satisfied_by({Rational(1, 2), Rational(1, 2)}));
    EXPECT_FALSE(fm_empty(sys));
    auto r = lp_solve(sys);
    ASSERT_FALSE(is_infeasible(r));
    EXPECT_TRUE(sys.satisfied_by(std::get<LpFeasible>(r).point));
}

TEST(LpSolve, UnboundedFeasibleReportsAPoint)
{
    auto r = lp_solve(one_var({{-1, -5}}));
    ASSERT_FALSE(is_infeasible(r));
    EXPECT_GE(std::get<LpFeasible>(r).point[0], 5);
}

TEST(LpSolve, AgreesWithFourierMotzkinOnRandomCorpus)
{
    std::mt19937_64 rng(20240611);
    int infeasible = 0;
    for (int t = 0; t < 600; ++t) {
        std::size_t n = 1 + rng() % 5, m = 1 + rng() % 7;
        auto sys = random_system(rng, n, m, -5, 5);
        auto r = lp_solve(sys);
        ASSERT_EQ(is_infeasible(r), fm_empty(sys)) << "case " << t;
        if (auto* inf = std::get_if<LpInfeasible>(&r)) {
            ++infeasible;
            EXPECT_TRUE(check_farkas(sys, inf->certificate));
        }
        else
            EXPECT_TRUE(sys.satisfied_by(std::get<LpFeasible>(r).point));
    }
    EXPECT_GT(infeasible, 50);
}

TEST(LpSolve, IsDeterministic)
{
    std::mt19937_64 rng(7);
    for (int t = 0; t < 50; ++t) {
        auto sys = random_system(rng, 4, 6, -5, 5);
        auto a = lp_solve(sys), b = lp_solve(sys);
        if (is_infeasible(a))
            EXPECT_EQ(std::get<LpInfeasible>(a).certificate, std::get<LpInfeasible>(b).certificate);
        else
            EXPECT_EQ(std::get<LpFeasible>(a).point, std::get<LpFeasible>(b).point);
    }
}

TEST(IntegerOracle, CrossPolytopeHasNoLatticePoint)
{
    EXPECT_FALSE(integer_feasible_oracle(cross_polytope_2d(), unit_box(2)));
}

TEST(IntegerOracle, FindsOriginFirst)
{
    LinSystem sys(2);
    sys.add_row({1, 1}, 1);
    auto p = integer_feasible_oracle(sys, unit_box(2));
    ASSERT_TRUE(p);
    EXPECT_EQ(*p, (std::vector<long>{0, 0}));
}

TEST(IntegerOracle, CapIsEnforced)
{
    EXPECT_THROW(integer_feasible_oracle(LinSystem(3), IntBox(3, {0, 99}), 1000), CapExceeded);
}
