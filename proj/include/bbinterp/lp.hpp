#pragma once

#include "bbinterp/lin_system.hpp"

#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace bbinterp {

/// True iff f >= 0, f^T A = 0 and f^T b < 0. Throws DimensionError on length mismatch.
bool check_farkas(const LinSystem& sys, const FarkasCertificate& f);

struct LpFeasible {
    RatVector point;
};

struct LpInfeasible {
    FarkasCertificate certificate;
};

using LpResult = std::variant<LpFeasible, LpInfeasible>;

inline bool is_infeasible(const LpResult& r) { return std::holds_alternative<LpInfeasible>(r); }

/// Exact LP feasibility via phase-one simplex under Bland's rule. Infeasible
/// results carry an integral Farkas certificate read off the final reduced costs.
LpResult lp_solve(const LinSystem& sys);

/// Per-variable integer bounds [lo, hi].
using IntBox = std::vector<std::pair<long, long>>;

inline IntBox unit_box(std::size_t n) { return IntBox(n, {0L, 1L}); }

/// Exhaustive integer search over `box`; first hit in lexicographic order.
/// Throws CapExceeded when the box holds more than `cap` points.
std::optional<std::vector<long>> integer_feasible_oracle(const LinSystem& sys, const IntBox& box,
    long cap = 1L << 22);

}  // namespace bbinterp
