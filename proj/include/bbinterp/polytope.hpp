#pragma once

#include "bbinterp/lin_system.hpp"

#include <utility>
#include <vector>

namespace bbinterp {

/// A bounded polyhedron kept in both forms: its defining rows and its vertex list.
/// Cutting with a halfspace updates the vertices incrementally (one double
/// description step), so repeated branching stays cheap at desk scale.
class Polytope {
public:
    struct Vertex {
        RatVector x;
        std::vector<int> tight;  // sorted row indices with equality
    };

    /// Throws Error when the system is feasible but unbounded.
    static Polytope from_system(const LinSystem& sys);

    std::size_t dim() const { return n_; }
    bool empty() const { return vertices_.empty(); }
    const std::vector<Vertex>& vertices() const { return vertices_; }

    /// Intersection with {x : a^T x <= b}.
    Polytope cut(const RatVector& a, const Rational& b) const;

    /// min and max of a^T x; the polytope must be nonempty.
    std::pair<Rational, Rational> range(const RatVector& a) const;

    /// Sorted vertex coordinates; equal keys mean equal polytopes.
    std::vector<RatVector> key() const;

private:
    void recompute_tight(Vertex& v) const;

    std::size_t n_ = 0;
    std::vector<RatVector> a_;
    RatVector b_;
    std::vector<Vertex> vertices_;
};

/// Rank of a rational matrix given as rows.
std::size_t matrix_rank(std::vector<RatVector> rows);

}  // namespace bbinterp
