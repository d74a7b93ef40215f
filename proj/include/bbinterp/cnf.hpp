#pragma once

#include "bbinterp/bb_tree.hpp"
#include "bbinterp/instances.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bbinterp {

/// Literals are signed 1-based variable numbers, as in DIMACS: +v is x_{v-1}, -v its negation.
using Clause = std::vector<int>;

struct CNF {
    int n = 0;
    std::vector<Clause> clauses;

    /// Throws Error on out-of-range literals or a clause holding x and not-x.
    void validate() const;
    bool is_k_cnf(int k) const;
    friend bool operator==(const CNF&, const CNF&) = default;
};

/// Sorted by variable; duplicate literals removed.
Clause canonical_clause(Clause c);

struct RandomCnf {
    CNF cnf;                   // distinct clauses in order of first draw
    std::vector<Clause> draws; // every draw, repetitions kept
    std::uint64_t seed = 0;
};

/// m independent uniform draws from the (n choose k) 2^k clauses of width k.
RandomCnf gen_random_kcnf(int n, int k, int m, std::uint64_t seed);

std::string to_dimacs(const CNF& cnf);
CNF parse_dimacs(const std::string& text);

/// One row -sum_{x in C} x + sum_{not x in C} x <= |neg(C)| - 1 per clause, then 0/1 bounds.
LinSystem cnf_to_ilp(const CNF& cnf);

/// Exhaustive search over all 2^n assignments (n <= 24); bit j of the result is x_j.
std::optional<std::uint32_t> satisfying_assignment(const CNF& cnf);
bool satisfiable(const CNF& cnf);

/// Selector split. Variables of d0 and d1 are the base variables followed by
/// y_1..y_m (number n + i for y_i). D0_i = C_i restricted to X0 plus not-y_i,
/// D1_i = C_i restricted to X1 plus y_i.
struct SplitCNF {
    CNF base;
    std::vector<int> x0, x1;  // 0-based base variables
    CNF d0, d1;

    std::size_t m() const { return base.clauses.size(); }
    CNF combined() const;
    /// The interpolation instance of D0 and D1: x = X0, y = X1, z = Y.
    InterpolationInstance instance() const;
};

SplitCNF split_cnf(const CNF& cnf, const std::vector<int>& x0, const std::vector<int>& x1);

/// Carries a tree for cnf_to_ilp(base) over to the split instance: disjunctions are
/// zero-extended into the (X0, X1, Y) order and leaves re-certified by LP.
/// Throws FeasibleLeaf if the source tree is not valid.
CertifiedTree lift_tree(const BBTree& tree, const SplitCNF& split);

/// Whether {C_i^0 : i in A} (value 1) or {C_i^1 : i not in A} (value 0) is
/// unsatisfiable. `a` is the 0/1 indicator of A. Throws CapExceeded for more
/// than 24 variables on the relevant side.
bool certificate_holds(const SplitCNF& split, const std::vector<int>& a, int value);

}  // namespace bbinterp
