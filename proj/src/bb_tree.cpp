#include "bbinterp/bb_tree.hpp"
#include "bbinterp/errors.hpp"

#include <functional>

namespace bbinterp {

BBTree::BBTree() : nodes_(1) {}

const BBTree::Node& BBTree::at(int id) const
{
    if (! contains(id))
        throw UnknownNode(id);
    return nodes_[static_cast<std::size_t>(id)];
}

bool BBTree::is_leaf(int id) const { return ! at(id).split.has_value(); }

const Disjunction& BBTree::disjunction(int id) const
{
    const auto& n = at(id);
    if (! n.split)
        throw Error("node " + std::to_string(id) + " is a leaf");
    return *n.split;
}

int BBTree::left(int id) const { return at(id).left; }
int BBTree::right(int id) const { return at(id).right; }
int BBTree::parent(int id) const { return at(id).parent; }

int BBTree::depth(int id) const
{
    int d = 0;
    for (int p = parent(id); p != -1; p = parent(p))
        ++d;
    return d;
}

int BBTree::split(int leaf, Disjunction d)
{
    if (! is_leaf(leaf))
        throw Error("node " + std::to_string(leaf) + " is already split");
    int l = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{std::nullopt, -1, -1, leaf});
    nodes_.push_back(Node{std::nullopt, -1, -1, leaf});
    auto& n = nodes_[static_cast<std::size_t>(leaf)];
    n.split = std::move(d);
    n.left = l;
    n.right = l + 1;
    return l;
}

std::vector<int> BBTree::leaves() const
{
    std::vector<int> out;
    std::function<void(int)> walk = [&](int id) {
        if (is_leaf(id))
            out.push_back(id);
        else {
            walk(left(id));
            walk(right(id));
        }
    };
    walk(root());
    return out;
}

std::vector<int> BBTree::internal_nodes() const
{
    std::vector<int> out;
    std::function<void(int)> walk = [&](int id) {
        if (is_leaf(id))
            return;
        out.push_back(id);
        walk(left(id));
        walk(right(id));
    };
    walk(root());
    return out;
}

std::vector<int> BBTree::path_to(int id) const
{
    std::vector<int> path;
    for (int cur = id; cur != -1; cur = parent(cur))
        path.push_back(cur);
    return {path.rbegin(), path.rend()};
}

std::size_t BBTree::leaf_count(int id) const
{
    if (is_leaf(id))
        return 1;
    return leaf_count(left(id)) + leaf_count(right(id));
}

bool BBTree::same_shape(const BBTree& other) const
{
    std::function<bool(int, int)> eq = [&](int a, int b) {
        if (is_leaf(a) != other.is_leaf(b))
            return false;
        if (is_leaf(a))
            return true;
        return eq(left(a), other.left(b)) && eq(right(a), other.right(b));
    };
    return eq(root(), other.root());
}

LinSystem node_problem(const BBTree& tree, int node, const LinSystem& sys)
{
    auto path = tree.path_to(node);
    LinSystem out = sys;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        int m = path[k];
        const auto& d = tree.disjunction(m);
        if (d.alpha.size() != sys.num_vars())
            throw DimensionError("disjunction at node " + std::to_string(m) + " has wrong dimension");
        if (path[k + 1] == tree.left(m))
            out.add_row(d.alpha, d.delta, RowLabel::branch(m, BranchSide::Le));
        else {
            IntVector neg(d.alpha.size());
            for (std::size_t j = 0; j < neg.size(); ++j)
                neg[j] = -d.alpha[j];
            out.add_row(std::move(neg), -d.delta - 1, RowLabel::branch(m, BranchSide::Ge));
        }
    }
    return out;
}

std::optional<TreeDefect> find_feasible_leaf(const BBTree& tree, const LinSystem& sys)
{
    for (int leaf : tree.leaves()) {
        auto result = lp_solve(node_problem(tree, leaf, sys));
        if (auto* feasible = std::get_if<LpFeasible>(&result))
            return TreeDefect{leaf, feasible->point};
    }
    return std::nullopt;
}

bool validate_tree(const BBTree& tree, const LinSystem& sys) { return ! find_feasible_leaf(tree, sys); }

CertifiedTree certify_tree(const BBTree& tree, const LinSystem& sys)
{
    CertifiedTree out{tree, std::vector<FarkasCertificate>(tree.num_nodes())};
    for (int leaf : tree.leaves()) {
        auto result = lp_solve(node_problem(tree, leaf, sys));
        if (auto* feasible = std::get_if<LpFeasible>(&result))
            throw FeasibleLeaf(leaf, feasible->point);
        out.certs[static_cast<std::size_t>(leaf)] = std::get<LpInfeasible>(result).certificate;
    }
    return out;
}

bool check_certified_tree(const CertifiedTree& tree, const LinSystem& sys)
{
    if (tree.certs.size() != tree.tree.num_nodes())
        return false;
    for (int leaf : tree.tree.leaves()) {
        auto problem = node_problem(tree.tree, leaf, sys);
        const auto& f = tree.cert(leaf);
        if (f.size() != problem.num_rows() || ! check_farkas(problem, f))
            return false;
    }
    return true;
}

namespace {

    std::optional<std::size_t> pick_branch_variable(const RatVector& x, BranchingStrategy strategy)
    {
        std::optional<std::size_t> best;
        Rational best_distance;
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (x[j].get_den() == 1)
                continue;
            if (strategy == BranchingStrategy::VariableBranching)
                return j;
            Rational frac = x[j] - Rational(floor_div(x[j]));
            Rational distance = abs(frac - Rational(1, 2));
            if (! best || distance < best_distance) {
                best = j;
                best_distance = distance;
            }
        }
        return best;
    }

}  // namespace

CertifiedTree solve_bb(const LinSystem& sys, BranchingStrategy strategy, int depth_cap)
{
    if (depth_cap < 0)
        depth_cap = 2 * static_cast<int>(sys.num_vars());
    CertifiedTree out;
    std::function<void(int, int)> grow = [&](int node, int depth) {
        auto result = lp_solve(node_problem(out.tree, node, sys));
        if (out.certs.size() < out.tree.num_nodes())
            out.certs.resize(out.tree.num_nodes());
        if (auto* infeasible = std::get_if<LpInfeasible>(&result)) {
            out.certs[static_cast<std::size_t>(node)] = infeasible->certificate;
            return;
        }
        const auto& x = std::get<LpFeasible>(result).point;
        auto j = pick_branch_variable(x, strategy);
        if (! j)
            throw IntegralPointFound(x);
        if (depth >= depth_cap)
            throw DepthCapExceeded(depth_cap);
        IntVector alpha(sys.num_vars(), 0);
        alpha[*j] = 1;
        int l = out.tree.split(node, Disjunction{std::move(alpha), floor_div(x[*j])});
        grow(l, depth + 1);
        grow(l + 1, depth + 1);
    };
    grow(out.tree.root(), 0);
    out.certs.resize(out.tree.num_nodes());
    return out;
}

std::size_t tree_size(const BBTree& tree) { return tree.leaf_count(tree.root()); }

}  // namespace bbinterp
