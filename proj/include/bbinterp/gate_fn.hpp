#pragma once

#include "bbinterp/rational.hpp"

#include <compare>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace bbinterp {

/// A rational or one of +-infinity. Gate functions are evaluated on this domain
/// so that Phi^{-1} is total; opposite infinities cancel to 0 and 0 * inf = 0.
struct ExtRational {
    int inf = 0;  // -1, 0 or +1
    Rational value;

    ExtRational() = default;
    ExtRational(Rational v) : value(std::move(v)) {}
    ExtRational(long v) : value(v) {}
    static ExtRational pos_inf() { return make_inf(1); }
    static ExtRational neg_inf() { return make_inf(-1); }

    bool finite() const { return inf == 0; }
    friend bool operator==(const ExtRational& a, const ExtRational& b)
    {
        return a.inf == b.inf && (a.inf != 0 || a.value == b.value);
    }
    friend std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b);

private:
    static ExtRational make_inf(int s)
    {
        ExtRational e;
        e.inf = s;
        return e;
    }
};

std::string to_string(const ExtRational& e);

/// y -> 1/4 + y / (4 (1 + |y|)), an increasing bijection onto (0, 1/2).
ExtRational phi(const ExtRational& y);
ExtRational phi_inv(const ExtRational& w);

/// The closed template set. A gate function is an expression over the two
/// gate inputs U and V; FloorCarry* templates carry an inner two-argument
/// expression evaluated on the split-off low-order parts.
enum class Template {
    ArgU,
    ArgV,
    Const,             // params: c
    Combine,           // params: s1, s2, c          args: a, b   -> s1 a + s2 b + c
    BumpAccumulate,    // params: s, L, K            args: a, b   -> a + (b >= L ? K : s b)
    Max,               //                            args: a, b   -> max(a, b)
    Threshold,         // params: t, strict          args: a      -> [a > t] or [a >= t]
    Phi,               //                            args: a
    PhiInv,            //                            args: a
    FloorCarryInput,   // params: m, Lambda, off     args: a      -> fl(a) + phi(Lambda - fl(a) - off)
    FloorCarryFirst,   // params: m   inner          args: a, b   -> fl(a) + inner({a}, b)
    FloorCarrySecond,  // params: m   inner          args: a, b   -> fl(b) + inner(a, {b})
    FloorCarryBoth,    // params: m   inner          args: a, b   -> (fl(a) + fl(b)) / 2 + inner({a}, {b})
    RoundPhase,        // params: m, half            args: a      -> fl(a) + ({a} >= phi(1) ? half : 0)
};
// fl and {} round down to multiples of m and take the remainder.

std::string template_name(Template t);
Template parse_template(const std::string& name);

struct Expr;
using GateFn = std::shared_ptr<const Expr>;

struct Expr {
    Template kind;
    RatVector params;
    std::vector<GateFn> args;
    GateFn inner;
};

namespace fn {
    GateFn arg_u();
    GateFn arg_v();
    GateFn constant(const Rational& c);
    GateFn combine(const Rational& s1, const Rational& s2, const Rational& c, GateFn a = arg_u(), GateFn b = arg_v());
    GateFn bump(const Rational& s, const Rational& level, const Rational& k, GateFn a = arg_u(), GateFn b = arg_v());
    GateFn max(GateFn a = arg_u(), GateFn b = arg_v());
    GateFn threshold(const Rational& t, bool strict, GateFn a = arg_u());
    GateFn phi(GateFn a = arg_u());
    GateFn phi_inv(GateFn a = arg_u());
    GateFn floor_carry_input(const Rational& m, const Rational& lambda, const Rational& off, GateFn a = arg_u());
    GateFn floor_carry_first(const Rational& m, GateFn inner, GateFn a = arg_u(), GateFn b = arg_v());
    GateFn floor_carry_second(const Rational& m, GateFn inner, GateFn a = arg_u(), GateFn b = arg_v());
    GateFn floor_carry_both(const Rational& m, GateFn inner, GateFn a = arg_u(), GateFn b = arg_v());
    GateFn round_phase(const Rational& m, const Rational& half, GateFn a = arg_u());

    /// Replaces ArgU / ArgV (outside inner functions) by the given expressions.
    GateFn substitute(const GateFn& f, const GateFn& u, const GateFn& v);
}  // namespace fn

ExtRational evaluate(const Expr& f, const ExtRational& u, const ExtRational& v);
inline ExtRational evaluate(const GateFn& f, const ExtRational& u, const ExtRational& v) { return evaluate(*f, u, v); }

/// Which of U, V the function reads.
struct ArgUse {
    bool u = false, v = false;
};
ArgUse arg_use(const GateFn& f);

/// Structural side conditions that make every template non-decreasing:
/// nonnegative scalings, K >= s L for bumps, m >= 1 and inner ranges inside
/// (0, 1/2) for floor carries.
bool admissible(const GateFn& f);

/// Every template occurring in f (with repetition, outermost first).
void collect_templates(const GateFn& f, std::vector<Template>& out);

/// Non-decreasing in each argument over all ordered pairs drawn from the grid.
bool check_monotone(const GateFn& f, const std::vector<Rational>& grid);

/// Randomised check on `pairs` ordered pairs (u1 <= u2, v1 <= v2) drawn near
/// integers, multiples of powers of two and the given landmarks.
bool check_monotone_random(const GateFn& f, std::mt19937_64& rng, int pairs, const std::vector<Rational>& landmarks = {});

std::string describe(const GateFn& f);

}  // namespace bbinterp
