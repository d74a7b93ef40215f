#pragma once

#include "bbinterp/lin_system.hpp"
#include "bbinterp/lp.hpp"

#include <optional>
#include <vector>

namespace bbinterp {

/// alpha^T x <= delta  OR  alpha^T x >= delta + 1. The zero vector is allowed.
struct Disjunction {
    IntVector alpha;
    Integer delta;
    friend bool operator==(const Disjunction&, const Disjunction&) = default;
};

/// Rooted binary tree of disjunctions. Node 0 is the root; splitting a leaf
/// appends its two children, so ids follow "split, then left subtree, then
/// right subtree" when trees are grown recursively.
class BBTree {
public:
    BBTree();

    int root() const { return 0; }
    std::size_t num_nodes() const { return nodes_.size(); }
    bool contains(int id) const { return id >= 0 && static_cast<std::size_t>(id) < nodes_.size(); }

    bool is_leaf(int id) const;
    const Disjunction& disjunction(int id) const;
    int left(int id) const;
    int right(int id) const;
    int parent(int id) const;
    int depth(int id) const;

    /// Turns a leaf into an internal node; returns the id of the new left child (right is +1).
    int split(int leaf, Disjunction d);

    std::vector<int> leaves() const;
    std::vector<int> internal_nodes() const;
    /// Node ids from the root down to `id`, inclusive.
    std::vector<int> path_to(int id) const;
    std::size_t leaf_count(int id) const;

    /// Same shape and child order; disjunctions are not compared.
    bool same_shape(const BBTree& other) const;

    friend bool operator==(const BBTree&, const BBTree&) = default;

private:
    struct Node {
        std::optional<Disjunction> split;
        int left = -1, right = -1, parent = -1;
        friend bool operator==(const Node&, const Node&) = default;
    };
    const Node& at(int id) const;
    std::vector<Node> nodes_;
};

/// A tree together with a certificate on every leaf (indexed by node id;
/// internal nodes carry an empty vector).
struct CertifiedTree {
    BBTree tree;
    std::vector<FarkasCertificate> certs;

    const FarkasCertificate& cert(int leaf) const { return certs.at(static_cast<std::size_t>(leaf)); }
};

/// `sys` plus one row per edge on the root-to-node path, root edge first.
LinSystem node_problem(const BBTree& tree, int node, const LinSystem& sys);

/// First LP-feasible leaf and its witness, if any.
struct TreeDefect {
    int leaf;
    RatVector witness;
};
std::optional<TreeDefect> find_feasible_leaf(const BBTree& tree, const LinSystem& sys);

bool validate_tree(const BBTree& tree, const LinSystem& sys);

/// Throws FeasibleLeaf when some leaf problem is LP-feasible.
CertifiedTree certify_tree(const BBTree& tree, const LinSystem& sys);

/// Independent re-check of a certified tree: every cert is a Farkas certificate for its leaf.
bool check_certified_tree(const CertifiedTree& tree, const LinSystem& sys);

enum class BranchingStrategy { VariableBranching, MostFractional };

/// Variable-disjunction branch-and-bound. A depth cap of -1 means 2n.
/// Throws IntegralPointFound or DepthCapExceeded.
CertifiedTree solve_bb(const LinSystem& sys, BranchingStrategy strategy = BranchingStrategy::VariableBranching,
    int depth_cap = -1);

/// Number of leaves.
std::size_t tree_size(const BBTree& tree);

struct MinTreeSize {
    enum class Kind { Finite, Infinite, NotWithinCaps };
    Kind kind;
    long size = 0;

    static MinTreeSize finite(long s) { return {Kind::Finite, s}; }
    static MinTreeSize infinite() { return {Kind::Infinite, 0}; }
    static MinTreeSize not_within_caps() { return {Kind::NotWithinCaps, 0}; }
    friend bool operator==(const MinTreeSize&, const MinTreeSize&) = default;
};

struct MinTreeSearchOptions {
    long budget = 5'000'000;  // node evaluations
    long enumeration_cap = 1L << 22;
};

/// Smallest tree over disjunctions with |alpha|_inf <= coeff_cap and depth <= depth_cap.
/// Requires a bounded system. Infinite when the system has an integer point.
/// Throws SearchBudgetExceeded.
MinTreeSize min_tree_size_bounded(const LinSystem& sys, int depth_cap, int coeff_cap,
    const MinTreeSearchOptions& options = {});

}  // namespace bbinterp
