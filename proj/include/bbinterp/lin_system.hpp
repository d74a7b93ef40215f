#pragma once

#include "bbinterp/rational.hpp"

#include <string>
#include <vector>

namespace bbinterp {

enum class Side { P, Q };

enum class BranchSide { Le, Ge };

/// Provenance tag of a row. Shared rows are bound rows on coupling
/// variables, which belong to neither factor of a product.
struct RowLabel {
    enum class Kind { OriginalP, OriginalQ, Shared, Branch };
    Kind kind = Kind::OriginalP;
    int node = -1;
    BranchSide side = BranchSide::Le;

    static RowLabel original_p() { return {Kind::OriginalP, -1, BranchSide::Le}; }
    static RowLabel original_q() { return {Kind::OriginalQ, -1, BranchSide::Le}; }
    static RowLabel shared() { return {Kind::Shared, -1, BranchSide::Le}; }
    static RowLabel branch(int node_id, BranchSide s) { return {Kind::Branch, node_id, s}; }

    bool is_branch() const { return kind == Kind::Branch; }
    friend bool operator==(const RowLabel&, const RowLabel&) = default;
};

std::string to_string(const RowLabel& label);
RowLabel parse_row_label(const std::string& text);

/// An integral system Ax <= b over n variables.
class LinSystem {
public:
    LinSystem() = default;
    explicit LinSystem(std::size_t num_vars) : n_(num_vars) {}

    void add_row(IntVector coefficients, Integer rhs, RowLabel label = RowLabel::original_p());

    std::size_t num_vars() const { return n_; }
    std::size_t num_rows() const { return rows_.size(); }

    const IntVector& row(std::size_t i) const { return rows_[i]; }
    const Integer& rhs(std::size_t i) const { return rhs_[i]; }
    const RowLabel& label(std::size_t i) const { return labels_[i]; }

    bool satisfied_by(const RatVector& point) const;
    Rational row_value(std::size_t i, const RatVector& point) const;

    /// Adds lo <= x_j <= hi rows for every variable.
    void add_box_rows(const Integer& lo, const Integer& hi, RowLabel label = RowLabel::original_p());

    friend bool operator==(const LinSystem&, const LinSystem&) = default;

private:
    std::size_t n_ = 0;
    std::vector<IntVector> rows_;
    IntVector rhs_;
    std::vector<RowLabel> labels_;
};

/// Nonnegative integral multipliers, one per row.
using FarkasCertificate = IntVector;

}  // namespace bbinterp
