#pragma once

#include "bbinterp/bb_tree.hpp"
#include "bbinterp/conformal.hpp"

#include <random>
#include <string>
#include <vector>

namespace bbinterp {

/// Ax + Cz <= a and By + Dz <= b with C >= 0, D <= 0, every variable in [0, 1].
/// Variables are ordered x (n1), y (n2), z (n3).
struct InterpolationInstance {
    std::size_t n1 = 0, n2 = 0, n3 = 0;
    std::vector<IntVector> a_rows, c_rows;  // P rows: A | C
    IntVector a_rhs;
    std::vector<IntVector> b_rows, d_rows;  // Q rows: B | D
    IntVector b_rhs;
    std::string id;

    std::size_t num_vars() const { return n1 + n2 + n3; }

    /// Throws DimensionError or Error when shapes or signs are off.
    void validate() const;

    /// All rows over (x, y, z): A rows and x bounds (P), B rows and y bounds (Q),
    /// then z bounds (Shared).
    LinSystem full_system() const;

    /// The full system with z fixed: same rows over (x, y); z bounds become
    /// zero rows with nonnegative right-hand sides.
    LinSystem instantiate(const std::vector<int>& z) const;
    ProductSystem product_at(const std::vector<int>& z) const;

    /// P(z) integer-feasible, Q(z) integer-feasible.
    bool in_z1(const std::vector<int>& z) const;
    bool in_z2(const std::vector<int>& z) const;

    Box box_p() const { return Box::unit(n1); }
    Box box_q() const { return Box::unit(n2); }
};

/// Restricts every disjunction to (x, y) and moves alpha_z^T z into the right-hand side.
CertifiedTree instantiate_tree(const CertifiedTree& tree, const InterpolationInstance& inst, const std::vector<int>& z);

/// Clique-coloring: z encodes a graph on r vertices; P(z) says it is (k-1)-colourable,
/// Q(z) that it has a k-clique.
InterpolationInstance gen_cc_instance(int r, int k);
int default_k(int r);

/// Index of z_{ij} (i < j) among the pairs in lexicographic order.
std::size_t pair_index(int r, int i, int j);

enum class ZSide { Z1, Z2 };

/// A graph z with an integral point of the matching factor: a colouring x of
/// P(z) for Z1, a clique indicator y of Q(z) for Z2.
struct ZWitness {
    std::vector<int> z;
    std::vector<int> point;
};

/// Z1: random (k-1)-partite graph with the partition colouring. Z2: planted
/// k-clique plus random further edges. The point is checked against its factor.
ZWitness gen_z_witness(int r, int k, ZSide side, std::mt19937_64& rng);

/// Every 0/1 vector of length n, in lexicographic order.
std::vector<std::vector<int>> all_z(std::size_t n);

/// The 2-dimensional cross-polytope in [0,1]^2: rows 2 sum_S x - 2 sum_{not S} x <= 3 - 2|not S|
/// for every S, then the box rows.
LinSystem cross_polytope(RowLabel label = RowLabel::original_p());

/// The cross-polytope squared together with a certified tree that branches on x1
/// at the root, on y1 then y2 below x1 <= 0 and on x2 below x1 >= 1.
struct CrossPolytopeFixture {
    ProductSystem product;
    CertifiedTree tree;
};
CrossPolytopeFixture cross_polytope_fixture();

/// Random integer-infeasible systems in [0,1]^n with entries in [-3, 3].
LinSystem random_infeasible_system(std::mt19937_64& rng, std::size_t n, std::size_t m);

/// Random product of factors with n1, n2 in [1, max_dim], integer-infeasible as a whole.
ProductSystem random_product(std::mt19937_64& rng, std::size_t max_dim);

/// A random valid certified tree for an integer-infeasible system in the unit box. Mixes
/// random general disjunctions over all variables with variable branching.
CertifiedTree random_certified_tree(std::mt19937_64& rng, const LinSystem& sys, int general_depth = 3);

/// Random instance with n1, n2, n3 given, integer-infeasible as a whole.
InterpolationInstance random_interpolation_instance(std::mt19937_64& rng, std::size_t n1, std::size_t n2,
    std::size_t n3);

}  // namespace bbinterp
