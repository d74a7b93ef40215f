#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace bbinterp {

using Integer = mpz_class;
using Rational = mpq_class;

using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

/// Canonical "p/q" rendering; integers render without the denominator.
std::string to_string(const Rational& r);
std::string to_string(const Integer& z);

/// Parses "p", "-p" or "p/q" into canonical form. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

Integer floor_div(const Rational& r);
Integer ceil_div(const Rational& r);

/// Rounds down to the nearest multiple of `m` (m > 0).
Rational floor_to_multiple(const Rational& r, const Rational& m);

Integer lcm_of_denominators(const RatVector& v);

bool fits_int64(const Integer& z);

}  // namespace bbinterp
