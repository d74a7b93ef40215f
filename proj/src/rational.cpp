#include "bbinterp/rational.hpp"

#include <stdexcept>

namespace bbinterp {

std::string to_string(const Rational& r)
{
    if (r.get_den() == 1)
        return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string to_string(const Integer& z) { return z.get_str(); }

Rational parse_rational(std::string_view text)
{
    auto bad = [&] { return std::invalid_argument("malformed rational: '" + std::string(text) + "'"); };
    if (text.empty())
        throw bad();
    auto slash = text.find('/');
    auto parse_int = [&](std::string_view s) {
        if (s.empty())
            throw bad();
        std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (start == s.size())
            throw bad();
        for (std::size_t i = start; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9')
                throw bad();
        std::string digits(s[0] == '+' ? s.substr(1) : s);
        return Integer(digits, 10);
    };
    if (slash == std::string_view::npos)
        return Rational(parse_int(text));
    Integer num = parse_int(text.substr(0, slash));
    Integer den = parse_int(text.substr(slash + 1));
    if (den == 0)
        throw bad();
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Integer floor_div(const Rational& r)
{
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

Integer ceil_div(const Rational& r)
{
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

Rational floor_to_multiple(const Rational& r, const Rational& m)
{
    Rational quotient = r / m;
    return Rational(floor_div(quotient)) * m;
}

Integer lcm_of_denominators(const RatVector& v)
{
    Integer l = 1;
    for (const auto& x : v)
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    return l;
}

bool fits_int64(const Integer& z)
{
    static const Integer lo("-9223372036854775808");
    static const Integer hi("9223372036854775807");
    return z >= lo && z <= hi;
}

}  // namespace bbinterp
