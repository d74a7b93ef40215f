#include "bbinterp/lp.hpp"
#include "bbinterp/errors.hpp"

#include <cassert>
#include <limits>

namespace bbinterp {

bool check_farkas(const LinSystem& sys, const FarkasCertificate& f)
{
    if (f.size() != sys.num_rows())
        throw DimensionError("certificate has " + std::to_string(f.size()) + " entries, system has "
            + std::to_string(sys.num_rows()) + " rows");
    for (const auto& fi : f)
        if (fi < 0)
            return false;
    for (std::size_t j = 0; j < sys.num_vars(); ++j) {
        Integer col = 0;
        for (std::size_t i = 0; i < sys.num_rows(); ++i)
            if (f[i] != 0)
                col += f[i] * sys.row(i)[j];
        if (col != 0)
            return false;
    }
    Integer total = 0;
    for (std::size_t i = 0; i < sys.num_rows(); ++i)
        total += f[i] * sys.rhs(i);
    return total < 0;
}

namespace {

    // Dense phase-one tableau for
    //   sigma_i (A_i x+ - A_i x- + s_i) (+ a_i) = sigma_i b_i,  all variables >= 0,
    // where sigma_i = -1 exactly when b_i < 0 and those rows get an artificial.
    class PhaseOne {
    public:
        explicit PhaseOne(const LinSystem& sys) : sys_(sys), m_(sys.num_rows()), n_(sys.num_vars())
        {
            std::size_t art = 0;
            sigma_.resize(m_);
            for (std::size_t i = 0; i < m_; ++i) {
                sigma_[i] = sys.rhs(i) < 0 ? -1 : 1;
                if (sigma_[i] < 0)
                    ++art;
            }
            cols_ = 2 * n_ + m_ + art;
            rows_.assign(m_, RatVector(cols_ + 1, Rational(0)));
            basis_.resize(m_);
            objective_.assign(cols_ + 1, Rational(0));

            std::size_t next_art = 2 * n_ + m_;
            for (std::size_t i = 0; i < m_; ++i) {
                auto& r = rows_[i];
                for (std::size_t j = 0; j < n_; ++j) {
                    if (sys.row(i)[j] == 0)
                        continue;
                    r[j] = sigma_[i] * sys.row(i)[j];
                    r[n_ + j] = -r[j];
                }
                r[2 * n_ + i] = sigma_[i];
                r[cols_] = sigma_[i] * sys.rhs(i);
                if (sigma_[i] < 0) {
                    r[next_art] = 1;
                    basis_[i] = next_art;
                    objective_[next_art] = 1;
                    ++next_art;
                }
                else
                    basis_[i] = 2 * n_ + i;
            }
            // price out the artificial basis: reduced costs c_j - sum over artificial rows
            for (std::size_t i = 0; i < m_; ++i)
                if (sigma_[i] < 0)
                    for (std::size_t j = 0; j <= cols_; ++j)
                        if (rows_[i][j] != 0)
                            objective_[j] -= rows_[i][j];
        }

        void optimise()
        {
            while (true) {
                std::size_t enter = cols_;
                for (std::size_t j = 0; j < cols_; ++j)
                    if (objective_[j] < 0) {
                        enter = j;
                        break;
                    }
                if (enter == cols_)
                    return;

                std::size_t leave = m_;
                Rational best_ratio;
                for (std::size_t i = 0; i < m_; ++i) {
                    if (rows_[i][enter] <= 0)
                        continue;
                    Rational ratio = rows_[i][cols_] / rows_[i][enter];
                    if (leave == m_ || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[leave])) {
                        leave = i;
                        best_ratio = ratio;
                    }
                }
                // phase one is bounded below by zero, so an entering column always has a leaving row
                assert(leave != m_);
                pivot(leave, enter);
            }
        }

        // objective_[cols_] holds -(sum of artificials)
        bool infeasible() const { return objective_[cols_] < 0; }

        RatVector point() const
        {
            RatVector x(n_, Rational(0));
            for (std::size_t i = 0; i < m_; ++i) {
                auto b = basis_[i];
                if (b < n_)
                    x[b] += rows_[i][cols_];
                else if (b < 2 * n_)
                    x[b - n_] -= rows_[i][cols_];
            }
            return x;
        }

        // The slack column of row i starts as sigma_i e_i with zero cost, so its
        // reduced cost is -sigma_i y_i, which is exactly the Farkas multiplier.
        FarkasCertificate certificate() const
        {
            RatVector f(m_);
            for (std::size_t i = 0; i < m_; ++i)
                f[i] = objective_[2 * n_ + i];
            Integer scale = lcm_of_denominators(f);
            FarkasCertificate out(m_);
            for (std::size_t i = 0; i < m_; ++i) {
                Rational scaled = f[i] * scale;
                out[i] = scaled.get_num();
            }
            return out;
        }

    private:
        void pivot(std::size_t r, std::size_t c)
        {
            Rational p = rows_[r][c];
            for (auto& v : rows_[r])
                if (v != 0)
                    v /= p;
            const auto& prow = rows_[r];
            auto eliminate = [&](RatVector& target) {
                Rational factor = target[c];
                if (factor == 0)
                    return;
                for (std::size_t j = 0; j <= cols_; ++j)
                    if (prow[j] != 0)
                        target[j] -= factor * prow[j];
            };
            for (std::size_t i = 0; i < m_; ++i)
                if (i != r)
                    eliminate(rows_[i]);
            eliminate(objective_);
            basis_[r] = c;
        }

        const LinSystem& sys_;
        std::size_t m_, n_, cols_ = 0;
        std::vector<int> sigma_;
        std::vector<RatVector> rows_;
        std::vector<std::size_t> basis_;
        RatVector objective_;
    };

}  // namespace

LpResult lp_solve(const LinSystem& sys)
{
    if (sys.num_rows() == 0)
        return LpFeasible{RatVector(sys.num_vars(), Rational(0))};
    PhaseOne tableau(sys);
    tableau.optimise();
    if (tableau.infeasible()) {
        auto cert = tableau.certificate();
        if (! check_farkas(sys, cert))
            throw InvariantViolation("simplex produced an invalid Farkas certificate");
        return LpInfeasible{std::move(cert)};
    }
    auto x = tableau.point();
    if (! sys.satisfied_by(x))
        throw InvariantViolation("simplex produced a point violating the system");
    return LpFeasible{std::move(x)};
}

std::optional<std::vector<long>> integer_feasible_oracle(const LinSystem& sys, const IntBox& box, long cap)
{
    const std::size_t n = sys.num_vars();
    if (box.size() != n)
        throw DimensionError("box dimension does not match system");
    long volume = 1;
    for (const auto& [lo, hi] : box) {
        if (hi < lo)
            return std::nullopt;
        long width = hi - lo + 1;
        if (volume > cap / width)
            throw CapExceeded("integer enumeration box exceeds cap of " + std::to_string(cap) + " points");
        volume *= width;
    }

    bool small = true;
    for (std::size_t i = 0; i < sys.num_rows() && small; ++i) {
        small = fits_int64(sys.rhs(i));
        for (const auto& a : sys.row(i))
            small = small && a.fits_sint_p();
    }

    std::vector<long> x(n);
    for (std::size_t j = 0; j < n; ++j)
        x[j] = box[j].first;

    auto satisfies = [&]() {
        for (std::size_t i = 0; i < sys.num_rows(); ++i) {
            if (small) {
                __int128 lhs = 0;
                for (std::size_t j = 0; j < n; ++j)
                    lhs += static_cast<__int128>(sys.row(i)[j].get_si()) * x[j];
                if (lhs > static_cast<__int128>(sys.rhs(i).get_si()))
                    return false;
            }
            else {
                Integer lhs = 0;
                for (std::size_t j = 0; j < n; ++j)
                    lhs += sys.row(i)[j] * x[j];
                if (lhs > sys.rhs(i))
                    return false;
            }
        }
        return true;
    };

    // lexicographic order: first coordinate most significant
    while (true) {
        if (satisfies())
            return x;
        std::size_t j = n;
        while (j > 0) {
            --j;
            if (x[j] < box[j].second) {
                ++x[j];
                for (std::size_t k = j + 1; k < n; ++k)
                    x[k] = box[k].first;
                break;
            }
            if (j == 0)
                return std::nullopt;
        }
        if (n == 0)
            return std::nullopt;
    }
}

}  // namespace bbinterp
