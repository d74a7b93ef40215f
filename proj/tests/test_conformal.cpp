#include "bbinterp/conformal.hpp"
#include "bbinterp/errors.hpp"
#include "bbinterp/instances.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>

using namespace bbinterp;

namespace {

IntVector iv(std::initializer_list<long> v) { return IntVector(v.begin(), v.end()); }


}  // namespace

TEST(NodeRange, Examples)
{
    auto box = Box::unit(2);
    auto r = node_range(iv({1, 1}), box);
    EXPECT_EQ(r.l_min, -1);
    EXPECT_EQ(r.l_max, 2);
    EXPECT_EQ(r.width(), 3);
    r = node_range(iv({0, 0}), box);
    EXPECT_EQ(r.l_min, -1);
    EXPECT_EQ(r.l_max, 0);
    r = node_range(iv({2, -3}), box);
    EXPECT_EQ(r.l_min, -4);
    EXPECT_EQ(r.l_max, 2);
    EXPECT_EQ(r.width(), 6);
}

TEST(NodeRange, EmptinessInvariantsOnRandomDirections)
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> d(-4, 4);
    for (int t = 0; t < 300; ++t) {
        IntVector a(3);
        for (auto& v : a)
            v = d(rng);
        auto box = Box::unit(3);
        auto r = node_range(a, box);
        EXPECT_GE(r.width(), 0);
        EXPECT_TRUE(le_side_empty(a, r.l_min, box));
        EXPECT_TRUE(ge_side_empty(a, r.l_max, box));
        EXPECT_FALSE(le_side_empty(a, r.l_min + 1, box));
        EXPECT_FALSE(ge_side_empty(a, r.l_max - 1, box));
    }
}

TEST(ProjectCertificate, Examples)
{
    std::vector<RowLabel> labels{RowLabel::original_p(), RowLabel::original_q(), RowLabel::branch(0, BranchSide::Le)};
    EXPECT_EQ(project_certificate(iv({0, 0, 0}), labels, Side::P), iv({0, 0}));
    EXPECT_EQ(project_certificate(iv({1, 2, 3}), labels, Side::Q), iv({2, 3}));
    EXPECT_THROW(project_certificate(iv({1, 2}), labels, Side::P), DimensionError);
}

TEST(ProjectCertificate, SingleLeafProductCertIsValidForTheInfeasibleFactor)
{
    LinSystem p(1);
    p.add_row(iv({1}), 0);
    p.add_row(iv({-1}), -1);
    LinSystem q(1);
    q.add_box_rows(0, 1, RowLabel::original_q());
    auto prod = ProductSystem::make(p, q);
    auto r = lp_solve(prod.combined);
    ASSERT_TRUE(is_infeasible(r));
    auto f = project_certificate(std::get<LpInfeasible>(r).certificate, labels_of(prod.combined), Side::P);
    EXPECT_TRUE(check_farkas(p, f));
}

TEST(CrossPolytopeFixture, FixtureTreeIsValid)
{
    auto fx = cross_polytope_fixture();
    EXPECT_EQ(tree_size(fx.tree.tree), 6u);
    EXPECT_TRUE(check_certified_tree(fx.tree, fx.product.combined));
}

TEST(CrossPolytopeFixture, LeafCertsUnderTheYBranchProjectToInvalidPCerts)
{
    auto fx = cross_polytope_fixture();
    const auto& tree = fx.tree.tree;
    auto labels = labels_of(fx.product.combined);
    int y_node = tree.left(tree.root());
    for (int leaf : tree.leaves()) {
        auto path = tree.path_to(leaf);
        if (path.size() < 2 || path[1] != y_node)
            continue;
        auto ext = labels;
        for (std::size_t k = 1; k < path.size(); ++k)
            ext.push_back(RowLabel::branch(path[k - 1], BranchSide::Le));
        auto f = project_certificate(fx.tree.cert(leaf), ext, Side::P);
        for (std::size_t i = 0; i < fx.product.p.num_rows(); ++i)
            EXPECT_EQ(f[i], 0);
    }
}

TEST(CrossPolytopeFixture, DecomposesToTheQSide)
{
    auto fx = cross_polytope_fixture();
    auto d = decompose_conforming(fx.tree, fx.product, Box::unit(2), Box::unit(2));
    EXPECT_EQ(d.side, Side::Q);
    const auto& t = d.result.tree;
    EXPECT_EQ(t.disjunction(t.root()).alpha, iv({0, 0}));
    EXPECT_EQ(t.disjunction(t.root()).delta, 0);
    EXPECT_TRUE(check_conforming(fx.tree.tree, fx.product, d));
    EXPECT_TRUE(testsupport::independent_conforming(fx.tree, fx.product, d));
    // The right subtree hangs below the empty halfspace 0 >= 1.
    EXPECT_TRUE(ge_side_empty(t.disjunction(t.root()).alpha, t.disjunction(t.root()).delta, Box::unit(2)));
    for (int leaf : t.leaves()) {
        EXPECT_NE(quasi_case(d.result, leaf, fx.product.q), 0);
        if (t.path_to(leaf)[1] == t.left(t.root()))
            EXPECT_EQ(quasi_case(d.result, leaf, fx.product.q), 1);
    }
}

TEST(CrossPolytopeFixture, PSideIsImpossible)
{
    auto fx = cross_polytope_fixture();
    EXPECT_FALSE(side_admits_conforming(fx.tree, fx.product, Box::unit(2), Box::unit(2), Side::P));
    EXPECT_TRUE(side_admits_conforming(fx.tree, fx.product, Box::unit(2), Box::unit(2), Side::Q));
    EXPECT_FALSE(naive_projection_tree_exists(fx.tree, fx.product, Box::unit(2), Side::P, 2));
}

TEST(Decompose, LpInfeasiblePSingleLeaf)
{
    LinSystem p(1);
    p.add_row(iv({1}), 0);
    p.add_row(iv({-1}), -1);
    LinSystem q(1);
    q.add_box_rows(0, 1, RowLabel::original_q());
    auto prod = ProductSystem::make(p, q);
    auto tree = certify_tree(BBTree(), prod.combined);
    auto d = decompose_conforming(tree, prod, Box::unit(1), Box::unit(1));
    EXPECT_EQ(d.side, Side::P);
    EXPECT_EQ(d.result.tree.num_nodes(), 1u);
    EXPECT_TRUE(check_farkas(p, d.result.cert(0)));
}

TEST(Decompose, RejectsMalformedCertificates)
{
    auto fx = cross_polytope_fixture();
    auto broken = fx.tree;
    broken.certs[static_cast<std::size_t>(broken.tree.leaves()[0])].pop_back();
    EXPECT_THROW(decompose_conforming(broken, fx.product, Box::unit(2), Box::unit(2)), DimensionError);
}

TEST(Decompose, RandomProductsAreSoundAndMonotone)
{
    std::mt19937_64 rng(2024);
    int nontrivial = 0;
    for (int t = 0; t < 220; ++t) {
        auto prod = random_product(rng, 3);
        auto tree = random_certified_tree(rng, prod.combined);
        ASSERT_TRUE(check_certified_tree(tree, prod.combined));
        DecompositionTrace trace;
        auto bp = Box::unit(prod.n1()), bq = Box::unit(prod.n2());
        auto d = decompose_conforming(tree, prod, bp, bq, &trace);
        ASSERT_TRUE(check_conforming(tree.tree, prod, d)) << "case " << t;
        ASSERT_TRUE(testsupport::independent_conforming(tree, prod, d)) << "case " << t;

        // A conforming quasi-certified tree for a factor proves it has no integer point.
        const auto& factor = d.side == Side::P ? prod.p : prod.q;
        EXPECT_FALSE(integer_feasible_oracle(factor, unit_box(factor.num_vars()))) << "case " << t;
        nontrivial += tree.tree.num_nodes() > 1;

        // Left verdicts are downward closed, right verdicts upward closed in the rhs.
        std::map<std::tuple<int, std::vector<Integer>, int, bool>, std::map<Integer, bool>> seen;
        for (const auto& p : trace.probes)
            seen[{p.node, p.context, static_cast<int>(p.side), p.left_child}][p.rhs] = p.verdict;
        for (const auto& [key, verdicts] : seen) {
            bool left = std::get<3>(key);
            bool prev = left;
            for (const auto& [rhs, v] : verdicts) {
                if (left)
                    EXPECT_FALSE(v && ! prev) << "left verdict not downward closed";
                else
                    EXPECT_FALSE(! v && prev) << "right verdict not upward closed";
                prev = v;
            }
        }
    }
    EXPECT_GT(nontrivial, 150);
}

TEST(Decompose, MuValuesAreMonotoneInGamma)
{
    std::mt19937_64 rng(99);
    for (int t = 0; t < 40; ++t) {
        auto prod = random_product(rng, 2);
        auto tree = random_certified_tree(rng, prod.combined);
        if (tree.tree.is_leaf(tree.tree.root()))
            continue;
        auto bp = Box::unit(prod.n1()), bq = Box::unit(prod.n2());
        const auto& d = tree.tree.disjunction(tree.tree.root());
        auto rp = node_range(prod.part(d.alpha, Side::P), bp);
        int prev_le = -2, prev_ge = 2;
        for (Integer g = rp.l_min - d.delta - 1; g <= rp.l_max - d.delta + 1; ++g) {
            MuValues mu;
            try {
                mu = mu_values(tree, prod, bp, bq, tree.tree.root(), {}, {}, g);
            }
            catch (const InvariantViolation&) {
                continue;
            }
            EXPECT_GE(mu.mu_le, prev_le);
            EXPECT_LE(mu.mu_ge, prev_ge);
            prev_le = mu.mu_le;
            prev_ge = mu.mu_ge;
        }
    }
}

TEST(Decompose, ExclusivityOnInterpolationInstances)
{
    std::mt19937_64 rng(5);
    int checked = 0;
    for (int t = 0; t < 30; ++t) {
        auto inst = random_interpolation_instance(rng, 2, 2, 2);
        auto tree = random_certified_tree(rng, inst.full_system());
        for (const auto& z : all_z(inst.n3)) {
            bool p_feasible = inst.in_z1(z), q_feasible = inst.in_z2(z);
            ASSERT_FALSE(p_feasible && q_feasible);
            auto prod = inst.product_at(z);
            auto local = instantiate_tree(tree, inst, z);
            ASSERT_TRUE(check_certified_tree(local, prod.combined));
            auto d = decompose_conforming(local, prod, inst.box_p(), inst.box_q());
            if (p_feasible != q_feasible) {
                EXPECT_EQ(d.side, p_feasible ? Side::Q : Side::P);
                ++checked;
            }
        }
    }
    EXPECT_GT(checked, 20);
}

TEST(Decompose, ShapeOnlyAgreesWithValidateTree)
{
    std::mt19937_64 rng(11);
    for (int t = 0; t < 60; ++t) {
        auto prod = random_product(rng, 3);
        auto tree = random_certified_tree(rng, prod.combined);
        auto s = decompose_shape_only(tree.tree, prod, Box::unit(prod.n1()), Box::unit(prod.n2()));
        EXPECT_TRUE(tree.tree.same_shape(s.tree));
        // Leaves under empty halfspaces are not required to be LP-infeasible, so
        // validate the produced tree after pruning those subtrees: every leaf either
        // is LP-infeasible or lies below an empty halfspace.
        const auto& sys = s.side == Side::P ? prod.p : prod.q;
        QuasiCertifiedTree q{s.tree, std::vector<FarkasCertificate>(s.tree.num_nodes()),
            Box::unit(sys.num_vars())};
        for (int leaf : s.tree.leaves()) {
            bool lp_empty = is_infeasible(lp_solve(node_problem(s.tree, leaf, sys)));
            EXPECT_TRUE(lp_empty || quasi_case(q, leaf, sys) == 2);
        }
        if (validate_tree(s.tree, sys)) {
            EXPECT_FALSE(integer_feasible_oracle(sys, unit_box(sys.num_vars())));
        }
    }
}

TEST(NaiveProjection, QSideOfTheFixtureHasAnExplicitWitness)
{
    auto fx = cross_polytope_fixture();
    EXPECT_TRUE(naive_projection_tree_exists(fx.tree, fx.product, Box::unit(2), Side::Q, 2));

    // Every right-hand side 0: below the root's 0 >= 1 edge the projected x certs
    // reduce to 1 * (0 <= -1) plus a branch row with nonpositive right-hand side.
    const auto& src = fx.tree.tree;
    BBTree t;
    std::vector<std::pair<int, int>> stack{{src.root(), t.root()}};
    std::vector<int> map(src.num_nodes());
    while (! stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        map[static_cast<std::size_t>(a)] = b;
        if (src.is_leaf(a))
            continue;
        int l = t.split(b, Disjunction{fx.product.part(src.disjunction(a).alpha, Side::Q), 0});
        stack.push_back({src.right(a), l + 1});
        stack.push_back({src.left(a), l});
    }
    CertifiedTree q{t, std::vector<FarkasCertificate>(t.num_nodes())};
    auto labels = labels_of(fx.product.combined);
    for (int leaf : src.leaves()) {
        auto ext = labels;
        ext.resize(labels.size() + src.path_to(leaf).size() - 1, RowLabel::branch(0, BranchSide::Le));
        q.certs[static_cast<std::size_t>(map[static_cast<std::size_t>(leaf)])] =
            project_certificate(fx.tree.cert(leaf), ext, Side::Q);
    }
    EXPECT_TRUE(check_certified_tree(q, fx.product.q));
}
