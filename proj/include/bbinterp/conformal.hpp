#pragma once

#include "bbinterp/bb_tree.hpp"

#include <utility>
#include <vector>

namespace bbinterp {

/// Axis-aligned box with finite rational bounds.
struct Box {
    std::vector<std::pair<Rational, Rational>> bounds;

    static Box unit(std::size_t n) { return Box{std::vector<std::pair<Rational, Rational>>(n, {0, 1})}; }
    std::size_t dim() const { return bounds.size(); }
    /// Exact min and max of alpha^T x over the box.
    std::pair<Rational, Rational> extremes(const IntVector& alpha) const;
    friend bool operator==(const Box&, const Box&) = default;
};

/// {alpha^T x <= l_min} and {alpha^T x >= l_max + 1} miss the box, and neither
/// bound can be moved inwards.
struct NodeRange {
    Integer l_min, l_max;
    Integer width() const { return l_max - l_min; }
};

NodeRange node_range(const IntVector& alpha, const Box& box);

/// Whether {alpha^T x <= c} (resp. {alpha^T x >= c + 1}) misses the box.
bool le_side_empty(const IntVector& alpha, const Integer& c, const Box& box);
bool ge_side_empty(const IntVector& alpha, const Integer& c, const Box& box);

/// Block-diagonal product. `combined` lists P's rows, then Q's rows, then any
/// Shared rows; Shared rows must have zero coefficients.
struct ProductSystem {
    LinSystem p, q, combined;

    static ProductSystem make(const LinSystem& p, const LinSystem& q);
    /// Splits a labelled system whose first n1 variables belong to P.
    static ProductSystem from_combined(const LinSystem& combined, std::size_t n1);
    std::size_t n1() const { return p.num_vars(); }
    std::size_t n2() const { return q.num_vars(); }
    /// The part of a combined-space vector belonging to one factor.
    IntVector part(const IntVector& v, Side side) const;
};

/// Keeps the chosen side's original rows and every branch row.
FarkasCertificate project_certificate(const FarkasCertificate& f, const std::vector<RowLabel>& labels, Side side);

std::vector<RowLabel> labels_of(const LinSystem& sys);

struct QuasiCertifiedTree {
    BBTree tree;
    std::vector<FarkasCertificate> certs;
    Box box;

    const FarkasCertificate& cert(int leaf) const { return certs.at(static_cast<std::size_t>(leaf)); }
};

/// 1 if the cert is a Farkas certificate of the leaf problem, 2 if some edge on
/// the path has a halfspace missing the box, 0 otherwise.
int quasi_case(const QuasiCertifiedTree& tree, int leaf, const LinSystem& sys);
bool check_quasi(const QuasiCertifiedTree& tree, int leaf, const LinSystem& sys);

/// One evaluation of a child verdict during the threshold search. `rhs` is the
/// factor-side right-hand side delta' of the node's disjunction.
struct Probe {
    int node;
    std::vector<Integer> context;
    Side side;
    bool left_child;
    Integer rhs;
    bool verdict;
};

struct DecompositionTrace {
    std::vector<Probe> probes;
};

struct Decomposition {
    Side side;
    QuasiCertifiedTree result;
};

/// Conforming quasi-certified tree for one factor. P wins ties.
Decomposition decompose_conforming(const CertifiedTree& tree, const ProductSystem& prod, const Box& box_p,
    const Box& box_q, DecompositionTrace* trace = nullptr);

/// Whether a conforming quasi-certified tree for the given side exists.
bool side_admits_conforming(const CertifiedTree& tree, const ProductSystem& prod, const Box& box_p, const Box& box_q,
    Side side);

/// The two verdict functions of the node at `node` for the shift gamma
/// (P side gets alpha^T x <= delta + gamma, Q side beta^T y <= -gamma).
/// `context` holds factor right-hand sides for the ancestors, root first.
struct MuValues {
    int mu_le, mu_ge;
};
MuValues mu_values(const CertifiedTree& tree, const ProductSystem& prod, const Box& box_p, const Box& box_q, int node,
    const std::vector<Integer>& context_p, const std::vector<Integer>& context_q, const Integer& gamma);

/// Shape equality, alpha projection and check_quasi on every leaf.
bool check_conforming(const BBTree& original, const ProductSystem& prod, const Decomposition& d);

/// Certificate-free variant: leaves only need LP-infeasible factor problems.
struct ShapeDecomposition {
    Side side;
    BBTree tree;
};
ShapeDecomposition decompose_shape_only(const BBTree& tree, const ProductSystem& prod, const Box& box_p,
    const Box& box_q);

/// Exhaustive search over right-hand sides in each node's range widened by
/// `slack`: is there an assignment making every naively projected certificate
/// a valid Farkas certificate?
bool naive_projection_tree_exists(const CertifiedTree& tree, const ProductSystem& prod, const Box& box, Side side,
    int slack = 1);

}  // namespace bbinterp
