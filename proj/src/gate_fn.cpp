#include "bbinterp/gate_fn.hpp"
#include "bbinterp/errors.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace bbinterp {

std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b)
{
    if (a.inf != b.inf)
        return a.inf <=> b.inf;
    if (a.inf != 0)
        return std::strong_ordering::equal;
    int c = cmp(a.value, b.value);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

std::string to_string(const ExtRational& e)
{
    if (e.inf > 0)
        return "inf";
    if (e.inf < 0)
        return "-inf";
    return to_string(e.value);
}

namespace {

    ExtRational add(const ExtRational& a, const ExtRational& b)
    {
        if (a.inf != 0 && b.inf != 0)
            return a.inf == b.inf ? a : ExtRational(0L);
        if (a.inf != 0)
            return a;
        if (b.inf != 0)
            return b;
        return ExtRational(Rational(a.value + b.value));
    }

    ExtRational neg(const ExtRational& a)
    {
        if (a.inf > 0)
            return ExtRational::neg_inf();
        if (a.inf < 0)
            return ExtRational::pos_inf();
        return ExtRational(Rational(-a.value));
    }

    ExtRational scale(const Rational& s, const ExtRational& a)
    {
        if (s == 0)
            return ExtRational(0L);
        if (a.inf != 0)
            return s > 0 ? a : neg(a);
        return ExtRational(Rational(s * a.value));
    }

    ExtRational floor_m(const ExtRational& a, const Rational& m)
    {
        if (a.inf != 0)
            return a;
        return ExtRational(floor_to_multiple(a.value, m));
    }

    ExtRational frac_m(const ExtRational& a, const Rational& m)
    {
        if (a.inf != 0)
            return ExtRational(0L);
        return ExtRational(Rational(a.value - floor_to_multiple(a.value, m)));
    }

    GateFn make(Template kind, RatVector params, std::vector<GateFn> args, GateFn inner = nullptr)
    {
        return std::make_shared<const Expr>(Expr{kind, std::move(params), std::move(args), std::move(inner)});
    }

    const std::map<Template, std::string>& names()
    {
        static const std::map<Template, std::string> table = {
            {Template::ArgU, "ArgU"},
            {Template::ArgV, "ArgV"},
            {Template::Const, "Const"},
            {Template::Combine, "Combine"},
            {Template::BumpAccumulate, "BumpAccumulate"},
            {Template::Max, "Max"},
            {Template::Threshold, "Threshold"},
            {Template::Phi, "Phi"},
            {Template::PhiInv, "PhiInv"},
            {Template::FloorCarryInput, "FloorCarryInput"},
            {Template::FloorCarryFirst, "FloorCarryFirst"},
            {Template::FloorCarrySecond, "FloorCarrySecond"},
            {Template::FloorCarryBoth, "FloorCarryBoth"},
            {Template::RoundPhase, "RoundPhase"},
        };
        return table;
    }

}  // namespace

ExtRational phi(const ExtRational& y)
{
    if (y.inf > 0)
        return ExtRational(Rational(1, 2));
    if (y.inf < 0)
        return ExtRational(0L);
    Rational r = Rational(1, 4) + y.value / (4 * (1 + abs(y.value)));
    r.canonicalize();
    return ExtRational(r);
}

ExtRational phi_inv(const ExtRational& w)
{
    if (w <= ExtRational(0L))
        return ExtRational::neg_inf();
    if (w >= ExtRational(Rational(1, 2)))
        return ExtRational::pos_inf();
    Rational t = 4 * w.value - 1;
    Rational y = t / (1 - abs(t));
    y.canonicalize();
    return ExtRational(y);
}

std::string template_name(Template t) { return names().at(t); }

Template parse_template(const std::string& name)
{
    for (const auto& [t, s] : names())
        if (s == name)
            return t;
    throw Error("unknown gate template: " + name);
}

namespace fn {

    GateFn arg_u()
    {
        static const GateFn u = make(Template::ArgU, {}, {});
        return u;
    }
    GateFn arg_v()
    {
        static const GateFn v = make(Template::ArgV, {}, {});
        return v;
    }
    GateFn constant(const Rational& c) { return make(Template::Const, {c}, {}); }
    GateFn combine(const Rational& s1, const Rational& s2, const Rational& c, GateFn a, GateFn b)
    {
        return make(Template::Combine, {s1, s2, c}, {std::move(a), std::move(b)});
    }
    GateFn bump(const Rational& s, const Rational& level, const Rational& k, GateFn a, GateFn b)
    {
        return make(Template::BumpAccumulate, {s, level, k}, {std::move(a), std::move(b)});
    }
    GateFn max(GateFn a, GateFn b) { return make(Template::Max, {}, {std::move(a), std::move(b)}); }
    GateFn threshold(const Rational& t, bool strict, GateFn a)
    {
        return make(Template::Threshold, {t, Rational(strict ? 1 : 0)}, {std::move(a)});
    }
    GateFn phi(GateFn a) { return make(Template::Phi, {}, {std::move(a)}); }
    GateFn phi_inv(GateFn a) { return make(Template::PhiInv, {}, {std::move(a)}); }
    GateFn floor_carry_input(const Rational& m, const Rational& lambda, const Rational& off, GateFn a)
    {
        return make(Template::FloorCarryInput, {m, lambda, off}, {std::move(a)});
    }
    GateFn floor_carry_first(const Rational& m, GateFn inner, GateFn a, GateFn b)
    {
        return make(Template::FloorCarryFirst, {m}, {std::move(a), std::move(b)}, std::move(inner));
    }
    GateFn floor_carry_second(const Rational& m, GateFn inner, GateFn a, GateFn b)
    {
        return make(Template::FloorCarrySecond, {m}, {std::move(a), std::move(b)}, std::move(inner));
    }
    GateFn floor_carry_both(const Rational& m, GateFn inner, GateFn a, GateFn b)
    {
        return make(Template::FloorCarryBoth, {m}, {std::move(a), std::move(b)}, std::move(inner));
    }
    GateFn round_phase(const Rational& m, const Rational& half, GateFn a)
    {
        return make(Template::RoundPhase, {m, half}, {std::move(a)});
    }

    GateFn substitute(const GateFn& f, const GateFn& u, const GateFn& v)
    {
        if (f->kind == Template::ArgU)
            return u;
        if (f->kind == Template::ArgV)
            return v;
        if (f->args.empty())
            return f;
        std::vector<GateFn> args;
        args.reserve(f->args.size());
        for (const auto& a : f->args)
            args.push_back(substitute(a, u, v));
        return make(f->kind, f->params, std::move(args), f->inner);
    }

}  // namespace fn

ExtRational evaluate(const Expr& f, const ExtRational& u, const ExtRational& v)
{
    auto arg = [&](std::size_t i) { return evaluate(*f.args.at(i), u, v); };
    const RatVector& p = f.params;
    switch (f.kind) {
    case Template::ArgU:
        return u;
    case Template::ArgV:
        return v;
    case Template::Const:
        return ExtRational(p[0]);
    case Template::Combine:
        return add(add(scale(p[0], arg(0)), scale(p[1], arg(1))), ExtRational(p[2]));
    case Template::BumpAccumulate: {
        ExtRational b = arg(1);
        return add(arg(0), b >= ExtRational(p[1]) ? ExtRational(p[2]) : scale(p[0], b));
    }
    case Template::Max:
        return std::max(arg(0), arg(1));
    case Template::Threshold: {
        ExtRational a = arg(0);
        bool on = p[1] != 0 ? a > ExtRational(p[0]) : a >= ExtRational(p[0]);
        return ExtRational(on ? 1L : 0L);
    }
    case Template::Phi:
        return phi(arg(0));
    case Template::PhiInv:
        return phi_inv(arg(0));
    case Template::FloorCarryInput: {
        ExtRational fl = floor_m(arg(0), p[0]);
        return add(fl, phi(add(ExtRational(Rational(p[1] - p[2])), neg(fl))));
    }
    case Template::FloorCarryFirst: {
        ExtRational a = arg(0);
        return add(floor_m(a, p[0]), evaluate(*f.inner, frac_m(a, p[0]), arg(1)));
    }
    case Template::FloorCarrySecond: {
        ExtRational b = arg(1);
        return add(floor_m(b, p[0]), evaluate(*f.inner, arg(0), frac_m(b, p[0])));
    }
    case Template::FloorCarryBoth: {
        ExtRational a = arg(0), b = arg(1);
        ExtRational high = scale(Rational(1, 2), add(floor_m(a, p[0]), floor_m(b, p[0])));
        return add(high, evaluate(*f.inner, frac_m(a, p[0]), frac_m(b, p[0])));
    }
    case Template::RoundPhase: {
        ExtRational a = arg(0);
        bool up = frac_m(a, p[0]) >= phi(ExtRational(1L));
        return add(floor_m(a, p[0]), up ? ExtRational(p[1]) : ExtRational(0L));
    }
    }
    throw InvariantViolation("unhandled gate template");
}

ArgUse arg_use(const GateFn& f)
{
    ArgUse use;
    if (f->kind == Template::ArgU)
        use.u = true;
    else if (f->kind == Template::ArgV)
        use.v = true;
    for (const auto& a : f->args) {
        ArgUse sub = arg_use(a);
        use.u = use.u || sub.u;
        use.v = use.v || sub.v;
    }
    return use;
}

namespace {

    // Whether an admissible inner function always lands in (0, 1/2): its
    // outermost template must be Phi.
    bool phi_valued(const GateFn& f) { return f->kind == Template::Phi; }

    std::size_t arity(Template t)
    {
        switch (t) {
        case Template::ArgU:
        case Template::ArgV:
        case Template::Const:
            return 0;
        case Template::Threshold:
        case Template::Phi:
        case Template::PhiInv:
        case Template::FloorCarryInput:
        case Template::RoundPhase:
            return 1;
        default:
            return 2;
        }
    }

    std::size_t param_count(Template t)
    {
        switch (t) {
        case Template::Const:
            return 1;
        case Template::Threshold:
        case Template::RoundPhase:
            return 2;
        case Template::Combine:
        case Template::BumpAccumulate:
        case Template::FloorCarryInput:
            return 3;
        case Template::FloorCarryFirst:
        case Template::FloorCarrySecond:
        case Template::FloorCarryBoth:
            return 1;
        default:
            return 0;
        }
    }

}  // namespace

bool admissible(const GateFn& f)
{
    if (! f || f->args.size() != arity(f->kind) || f->params.size() != param_count(f->kind))
        return false;
    for (const auto& a : f->args)
        if (! admissible(a))
            return false;
    const RatVector& p = f->params;
    switch (f->kind) {
    case Template::Combine:
        return p[0] >= 0 && p[1] >= 0;
    case Template::BumpAccumulate:
        return p[0] >= 0 && p[2] >= p[0] * p[1];
    case Template::Threshold:
        return p[1] == 0 || p[1] == 1;
    case Template::FloorCarryInput:
        return p[0] >= 1;
    case Template::FloorCarryFirst:
    case Template::FloorCarrySecond:
    case Template::FloorCarryBoth:
        return p[0] >= 1 && f->inner && admissible(f->inner) && phi_valued(f->inner);
    case Template::RoundPhase:
        return p[0] >= 1 && p[1] >= 0 && p[1] <= p[0] / 2;
    default:
        return ! f->inner;
    }
}

void collect_templates(const GateFn& f, std::vector<Template>& out)
{
    out.push_back(f->kind);
    for (const auto& a : f->args)
        collect_templates(a, out);
    if (f->inner)
        collect_templates(f->inner, out);
}

bool check_monotone(const GateFn& f, const std::vector<Rational>& grid)
{
    std::vector<Rational> g = grid;
    std::sort(g.begin(), g.end());
    const std::size_t n = g.size();
    std::vector<std::vector<ExtRational>> table(n, std::vector<ExtRational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            table[i][j] = evaluate(f, ExtRational(g[i]), ExtRational(g[j]));
    // Sorted grid: adjacent comparisons in each coordinate cover every ordered pair.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i + 1 < n && table[i][j] > table[i + 1][j])
                return false;
            if (j + 1 < n && table[i][j] > table[i][j + 1])
                return false;
        }
    return true;
}

namespace {

    Rational sample(std::mt19937_64& rng, const std::vector<Rational>& landmarks)
    {
        std::uniform_int_distribution<int> kind(0, 4);
        std::uniform_int_distribution<long> small(-40, 40);
        std::uniform_int_distribution<long> den(1, 64);
        switch (kind(rng)) {
        case 0:
            return Rational(small(rng));
        case 1: {
            Rational r(small(rng), den(rng));
            r.canonicalize();
            return r;
        }
        case 2: {
            // just below or above a multiple of a power of two
            std::uniform_int_distribution<int> e(0, 5);
            Rational base = Rational(small(rng)) * Rational(1L << e(rng));
            Rational eps(1, den(rng) * 1000);
            eps.canonicalize();
            return small(rng) % 2 == 0 ? Rational(base - eps) : Rational(base + eps);
        }
        case 3: {
            Rational r(small(rng) + 40, 160);
            r.canonicalize();
            return r;  // inside [0, 1/2]
        }
        default:
            if (landmarks.empty())
                return Rational(small(rng) * 1000);
            std::uniform_int_distribution<std::size_t> pick(0, landmarks.size() - 1);
            Rational eps(small(rng), 1000);
            eps.canonicalize();
            return landmarks[pick(rng)] + eps;
        }
    }

}  // namespace

bool check_monotone_random(const GateFn& f, std::mt19937_64& rng, int pairs, const std::vector<Rational>& landmarks)
{
    for (int t = 0; t < pairs; ++t) {
        Rational u1 = sample(rng, landmarks), u2 = sample(rng, landmarks);
        Rational v1 = sample(rng, landmarks), v2 = sample(rng, landmarks);
        if (u1 > u2)
            std::swap(u1, u2);
        if (v1 > v2)
            std::swap(v1, v2);
        if (evaluate(f, u1, v1) > evaluate(f, u2, v2))
            return false;
    }
    return true;
}

std::string describe(const GateFn& f)
{
    std::ostringstream out;
    out << template_name(f->kind);
    if (! f->params.empty() || ! f->args.empty() || f->inner) {
        out << '(';
        bool first = true;
        for (const auto& p : f->params) {
            out << (first ? "" : ", ") << to_string(p);
            first = false;
        }
        if (f->inner) {
            out << (first ? "" : ", ") << '{' << describe(f->inner) << '}';
            first = false;
        }
        for (const auto& a : f->args) {
            out << (first ? "" : ", ") << describe(a);
            first = false;
        }
        out << ')';
    }
    return out.str();
}

}  // namespace bbinterp
