#include "bbinterp/lin_system.hpp"
#include "bbinterp/errors.hpp"

#include <stdexcept>

namespace bbinterp {

std::string to_string(const RowLabel& label)
{
    switch (label.kind) {
    case RowLabel::Kind::OriginalP: return "OriginalP";
    case RowLabel::Kind::OriginalQ: return "OriginalQ";
    case RowLabel::Kind::Shared: return "Shared";
    case RowLabel::Kind::Branch:
        return "Branch:" + std::to_string(label.node) + ":" + (label.side == BranchSide::Le ? "le" : "ge");
    }
    return "?";
}

RowLabel parse_row_label(const std::string& text)
{
    if (text == "OriginalP")
        return RowLabel::original_p();
    if (text == "OriginalQ")
        return RowLabel::original_q();
    if (text == "Shared")
        return RowLabel::shared();
    if (text.rfind("Branch:", 0) == 0) {
        auto rest = text.substr(7);
        auto colon = rest.find(':');
        if (colon != std::string::npos) {
            auto side = rest.substr(colon + 1);
            if (side == "le" || side == "ge")
                return RowLabel::branch(std::stoi(rest.substr(0, colon)), side == "le" ? BranchSide::Le : BranchSide::Ge);
        }
    }
    throw std::invalid_argument("unknown row label '" + text + "'");
}

void LinSystem::add_row(IntVector coefficients, Integer rhs, RowLabel label)
{
    if (coefficients.size() != n_)
        throw DimensionError("row has " + std::to_string(coefficients.size()) + " coefficients, system has "
            + std::to_string(n_) + " variables");
    rows_.push_back(std::move(coefficients));
    rhs_.push_back(std::move(rhs));
    labels_.push_back(label);
}

Rational LinSystem::row_value(std::size_t i, const RatVector& point) const
{
    Rational v = 0;
    for (std::size_t j = 0; j < n_; ++j)
        if (rows_[i][j] != 0)
            v += rows_[i][j] * point[j];
    return v;
}

bool LinSystem::satisfied_by(const RatVector& point) const
{
    if (point.size() != n_)
        throw DimensionError("point dimension does not match system");
    for (std::size_t i = 0; i < rows_.size(); ++i)
        if (row_value(i, point) > rhs_[i])
            return false;
    return true;
}

void LinSystem::add_box_rows(const Integer& lo, const Integer& hi, RowLabel label)
{
    for (std::size_t j = 0; j < n_; ++j) {
        IntVector up(n_, 0), down(n_, 0);
        up[j] = 1;
        down[j] = -1;
        add_row(std::move(up), hi, label);
        add_row(std::move(down), -lo, label);
    }
}

}  // namespace bbinterp
