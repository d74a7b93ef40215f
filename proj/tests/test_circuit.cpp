#include "bbinterp/circuit.hpp"
#include "bbinterp/circuit_transforms.hpp"
#include "bbinterp/errors.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace bbinterp;

namespace {

Rational rat(long p, long q = 1)
{
    Rational r(p, q);
    r.canonicalize();
    return r;
}

// c(x1, y) = [max(x1, 0) + y >= 10]
Circuit max_plus_threshold()
{
    CircuitBuilder b;
    int x = b.input("x1");
    int y = b.input("y");
    int m = b.apply(fn::max(fn::arg_u(), fn::constant(0)), x, x);
    return b.finish(b.apply(fn::threshold(10, false, fn::combine(1, 1, 0)), m, y));
}

}  // namespace

TEST(GateFn, PhiValues)
{
    EXPECT_EQ(phi(ExtRational(0L)), ExtRational(rat(1, 4)));
    EXPECT_EQ(phi(ExtRational(1L)), ExtRational(rat(3, 8)));
    EXPECT_EQ(phi(ExtRational(-1L)), ExtRational(rat(1, 8)));
    EXPECT_EQ(phi(ExtRational::pos_inf()), ExtRational(rat(1, 2)));
    EXPECT_EQ(phi(ExtRational::neg_inf()), ExtRational(0L));
    for (long p = -30; p <= 30; p += 7)
        for (long q = 1; q <= 5; ++q) {
            ExtRational y(rat(p, q));
            EXPECT_EQ(phi_inv(phi(y)), y);
        }
    EXPECT_EQ(phi_inv(ExtRational(0L)), ExtRational::neg_inf());
}

TEST(GateFn, EvaluatesTemplates)
{
    auto ev = [](const GateFn& f, long u, long v) { return evaluate(f, ExtRational(u), ExtRational(v)); };
    EXPECT_EQ(ev(fn::combine(2, 3, -1), 1, 2), ExtRational(7L));
    EXPECT_EQ(ev(fn::bump(1, 3, 5), 10, 2), ExtRational(12L));
    EXPECT_EQ(ev(fn::bump(1, 3, 5), 10, 3), ExtRational(15L));
    EXPECT_EQ(ev(fn::threshold(4, true), 4, 0), ExtRational(0L));
    EXPECT_EQ(ev(fn::threshold(4, false), 4, 0), ExtRational(1L));
    EXPECT_EQ(ev(fn::max(), -2, 5), ExtRational(5L));
    EXPECT_EQ(ev(fn::round_phase(4, 2), 8, 0), ExtRational(8L));
    EXPECT_EQ(evaluate(fn::round_phase(4, 2), ExtRational(Rational(8 + rat(3, 8))), ExtRational(0L)), ExtRational(10L));
}

TEST(GateFn, CheckMonotoneExamples)
{
    std::vector<Rational> grid = {0, 1, 2, rat(29, 10), 3, 4};
    EXPECT_FALSE(admissible(fn::bump(1, 3, 2)));
    EXPECT_FALSE(check_monotone(fn::bump(1, 3, 2), grid));
    EXPECT_TRUE(admissible(fn::bump(1, 3, 3)));
    EXPECT_TRUE(check_monotone(fn::bump(1, 3, 3), grid));
    EXPECT_FALSE(check_monotone(fn::combine(-1, 0, 0), grid));
    EXPECT_TRUE(check_monotone(fn::phi_inv(fn::phi()), grid));
}

TEST(Circuit, EvaluatesAndPrunes)
{
    Circuit c = max_plus_threshold();
    EXPECT_NO_THROW(c.validate());
    EXPECT_EQ(circuit_size(c), 4U);
    EXPECT_EQ(eval_circuit(c, {{"x1", 3}, {"y", 7}}), 1);
    EXPECT_EQ(eval_circuit(c, {{"x1", -3}, {"y", 9}}), 0);
    EXPECT_THROW(eval_circuit(c, {{"x1", 3}}), UnboundVariable);

    CircuitBuilder b;
    int x = b.input("x");
    b.apply(fn::combine(1, 0, 5), x, x);  // dropped
    Circuit d = b.finish(b.apply(fn::phi(), x, x));
    EXPECT_EQ(circuit_size(d), 2U);
}

TEST(Circuit, RejectsNonAdmissibleGates)
{
    Circuit c = max_plus_threshold();
    c.gates.back().fn = fn::combine(-1, 1, 0);
    EXPECT_THROW(c.validate(), InvariantViolation);
}

TEST(LeafCircuit, WeightedSumAboveK)
{
    LeafSpec spec{3, {{"z1", 2}, {"z2", 1}, {"z3", 0}}};
    Circuit c = build_leaf_circuit(spec, {"z1", "z2", "z3"});
    for (long a = 0; a <= 1; ++a)
        for (long b = 0; b <= 3; ++b)
            EXPECT_EQ(eval_circuit(c, {{"z1", a}, {"z2", b}, {"z3", 0}}), 2 * a + b > 3 ? 1 : 0);
}

TEST(LeafCircuit, BumpedTermForcesOutput)
{
    LeafSpec spec{4, {{"z1", 1}, {"g", 2, true, 3, 8}, {"z2", 1}}};
    Circuit c = build_leaf_circuit(spec, {"z1", "z2", "g"});
    for (long z1 = 0; z1 <= 1; ++z1)
        for (long z2 = 0; z2 <= 1; ++z2)
            for (long g = 0; g <= 5; ++g) {
                Rational contrib = g >= 3 ? Rational(8) : Rational(2 * g);
                EXPECT_EQ(eval_circuit(c, {{"z1", z1}, {"z2", z2}, {"g", g}}), z1 + z2 + contrib > 4 ? 1 : 0);
            }
    LeafSpec bad{4, {{"g", 2, true, 3, 7}}};
    EXPECT_THROW(build_leaf_circuit(bad, {"g"}), Error);
}

TEST(LeafCircuit, DegenerateShapes)
{
    Circuit yes = build_leaf_circuit(LeafSpec{-1, {}}, {"z1"});
    Circuit no = build_leaf_circuit(LeafSpec{0, {{"z1", 0}}}, {"z1"});
    EXPECT_EQ(eval_circuit(yes, {{"z1", 0}}), 1);
    EXPECT_EQ(eval_circuit(no, {{"z1", 1}}), 0);
    Circuit one = build_leaf_circuit(LeafSpec{1, {{"z1", 3}}}, {"z1"});
    EXPECT_EQ(eval_circuit(one, {{"z1", 0}}), 0);
    EXPECT_EQ(eval_circuit(one, {{"z1", 1}}), 1);
    EXPECT_THROW(build_leaf_circuit(LeafSpec{0, {{"z1", -1}}}, {"z1"}), Error);
}

TEST(BinarySearch, BitsFor)
{
    EXPECT_EQ(bits_for(0), 0);
    EXPECT_EQ(bits_for(1), 1);
    EXPECT_EQ(bits_for(7), 3);
    EXPECT_EQ(bits_for(8), 4);
    EXPECT_THROW(bits_for(-1), Error);
}

TEST(BinarySearch, MaxPlusThresholdExamples)
{
    auto r = binary_search_transform(max_plus_threshold(), 3, 10, "y");
    EXPECT_NO_THROW(r.circuit.validate());
    EXPECT_EQ(eval_circuit(r.circuit, {{"x1", rat(11, 2)}}), 5);
    EXPECT_EQ(eval_circuit(r.circuit, {{"x1", -2}}), 0);
    EXPECT_EQ(eval_circuit(r.circuit, {{"x1", 100}}), 7);
    EXPECT_EQ(r.phase_outputs.size(), 3U);
    EXPECT_LE(circuit_size(r.circuit), circuit_size(max_plus_threshold()) * 3);
}

TEST(BinarySearch, DegenerateInputs)
{
    Circuit c = max_plus_threshold();
    EXPECT_THROW(binary_search_transform(c, 0, 10, "y"), Error);
    EXPECT_THROW(binary_search_transform(c, 3, 10, "nope"), Error);

    CircuitBuilder b;
    int x = b.input("x");
    b.input("y");
    Circuit ignores = b.finish(b.apply(fn::threshold(0, false), x, x));
    ignores.gates.push_back(Gate{Gate::Kind::Input, "y", nullptr, -1, -1});
    auto r = binary_search_transform(ignores, 3, 10, "y");
    EXPECT_EQ(eval_circuit(r.circuit, {{"x", 4}}), 7);

    CircuitBuilder only;
    only.input("y");
    Circuit just_y = only.finish(only.apply(fn::threshold(0, false), 0, 0));
    EXPECT_THROW(binary_search_transform(just_y, 2, 3, "y"), Error);
}

TEST(BinarySearch, RandomCircuitsMatchEnumeration)
{
    std::mt19937_64 rng(8080);
    int checked = 0;
    for (int trial = 0; checked < 1200; ++trial) {
        ASSERT_LT(trial, 20000);
        const int k = 1 + static_cast<int>(rng() % 3);
        Circuit c = testsupport::random_circuit(rng, k, 2 + static_cast<int>(rng() % 6));
        if (c.find_input("y") < 0 || c.input_names().size() < 2)
            continue;
        const int q = 1 + static_cast<int>(rng() % 6);
        const Rational top = static_cast<long>(rng() % 40) - 8;
        Assignment x = testsupport::random_point(rng, k);
        Assignment at_top = x;
        at_top["y"] = top;
        if (eval_circuit(c, at_top) != 1)
            continue;
        auto r = binary_search_transform(c, q, top, "y");
        ASSERT_NO_THROW(r.circuit.validate());
        const long expect = testsupport::brute_search(c, x, "y", q, top);
        ASSERT_EQ(eval_circuit(r.circuit, x), expect) << "trial " << trial;
        ASSERT_LE(circuit_size(r.circuit), circuit_size(c) * static_cast<std::size_t>(q));

        if (! r.phase_outputs.empty()) {
            auto values = eval_all(r.circuit, x);
            for (int i = 0; i < q; ++i) {
                const long unit = 1L << (q - 1 - i);
                ExtRational h = values[static_cast<std::size_t>(r.phase_outputs[static_cast<std::size_t>(i)])];
                ASSERT_EQ(h, ExtRational(Rational(expect / unit * unit))) << "phase " << i;
            }
        }
        ++checked;
    }
}

TEST(BinarySearch, AllGatesAdmissibleAndMonotone)
{
    std::mt19937_64 rng(11);
    auto r = binary_search_transform(max_plus_threshold(), 4, 10, "y");
    for (const auto& g : r.circuit.gates)
        if (g.kind == Gate::Kind::Apply) {
            EXPECT_TRUE(admissible(g.fn)) << describe(g.fn);
            EXPECT_TRUE(check_monotone_random(g.fn, rng, 300)) << describe(g.fn);
        }
}

TEST(CombineSplit, SmallWindow)
{
    // c1(x, t) = [x + t >= 5], c2(x, u) = [u - x >= 0]; exists t in [0, 6] with x + t >= 5 and 8 - t >= x.
    CircuitBuilder b1;
    int x = b1.input("x");
    int t = b1.input("t");
    Circuit c1 = b1.finish(b1.apply(fn::threshold(5, false, fn::combine(1, 1, 0)), x, t));
    // c2 reads -x as its own input, keeping every gate non-decreasing.
    CircuitBuilder b3;
    int nx = b3.input("nx");
    int u3 = b3.input("u");
    Circuit c2 = b3.finish(b3.apply(fn::threshold(0, false, fn::combine(1, 1, 0)), nx, u3));

    Circuit c = combine_split(c1, "t", c2, "u", 8, 0, 6);
    for (long xv = -1; xv <= 8; ++xv) {
        bool pre = xv + 6 >= 5 && 8 - xv >= 0;
        if (! pre)
            continue;
        bool expect = false;
        for (long tv = 0; tv <= 6; ++tv)
            expect = expect || (xv + tv >= 5 && 8 - tv - xv >= 0);
        EXPECT_EQ(eval_circuit(c, {{"x", xv}, {"nx", -xv}}), expect ? 1 : 0) << xv;
    }
}

TEST(CombineSplit, ZeroWidthWindowIsConstantOne)
{
    Circuit c1 = max_plus_threshold();
    Circuit c = combine_split(c1, "y", c1, "y", 3, 2, 2);
    EXPECT_EQ(eval_circuit(c, {{"x1", 0}}), 1);
}

TEST(CombineSplit, RandomCircuitsMatchEnumeration)
{
    std::mt19937_64 rng(99);
    int checked = 0;
    for (int trial = 0; checked < 400; ++trial) {
        ASSERT_LT(trial, 40000);
        Circuit c1 = testsupport::random_circuit(rng, 2, 2 + static_cast<int>(rng() % 4));
        Circuit c2 = testsupport::random_circuit(rng, 2, 2 + static_cast<int>(rng() % 4));
        if (c1.input_names().size() + c2.input_names().size() < 3)
            continue;
        const Integer lo = static_cast<long>(rng() % 5) - 2;
        const Integer hi = lo + static_cast<long>(rng() % 9);
        const Integer kappa = static_cast<long>(rng() % 12) - 2;
        Assignment x = testsupport::random_point(rng, 2);
        auto c1_at = [&](const Integer& t) {
            Assignment a = x;
            a["y"] = Rational(t);
            return eval_circuit(c1, a) == 1;
        };
        auto c2_at = [&](const Integer& t) {
            Assignment a = x;
            a["y"] = Rational(kappa - t);
            return eval_circuit(c2, a) == 1;
        };
        if (! c1_at(hi) || ! c2_at(lo))
            continue;
        bool expect = false;
        for (Integer t = lo; t <= hi; ++t)
            expect = expect || (c1_at(t) && c2_at(t));
        Circuit c = combine_split(c1, "y", c2, "y", kappa, lo, hi);
        ASSERT_NO_THROW(c.validate());
        ASSERT_EQ(eval_circuit(c, x), expect ? 1 : 0) << "trial " << trial;
        ++checked;
    }
}
