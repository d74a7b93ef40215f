#include "bbinterp/circuit_transforms.hpp"
#include "bbinterp/errors.hpp"

#include <algorithm>

namespace bbinterp {

int bits_for(const Integer& l)
{
    if (l < 0)
        throw Error("negative range width");
    int q = 0;
    Integer reach = 1;
    while (reach < l + 1) {
        reach *= 2;
        ++q;
    }
    return q;
}

Circuit build_leaf_circuit(const LeafSpec& spec, const std::vector<std::string>& inputs)
{
    CircuitBuilder b;
    for (const auto& name : inputs)
        b.input(name);
    std::vector<std::pair<int, GateFn>> parts;  // input gate, contribution as a function of U
    for (const auto& t : spec.terms) {
        if (t.s < 0)
            throw Error("negative leaf weight for '" + t.var + "'");
        if (t.bumped) {
            Rational need = std::max(Rational(spec.k + 1), Rational(t.s * t.level + t.s));
            if (t.k_bump < need)
                throw Error("bump constant for '" + t.var + "' is too small");
            parts.emplace_back(b.input(t.var), fn::bump(t.s, t.level, t.k_bump, fn::constant(0), fn::arg_u()));
        }
        else if (t.s != 0)
            parts.emplace_back(b.input(t.var), fn::combine(t.s, 0, 0, fn::arg_u(), fn::arg_u()));
    }
    if (parts.empty())
        return b.finish(b.constant(spec.k < 0 ? 1 : 0));
    if (parts.size() == 1) {
        auto [g, f] = parts[0];
        return b.finish(b.apply(fn::threshold(spec.k, true, f), g, g));
    }
    // Swap the U argument of a contribution for V.
    auto on_v = [](const GateFn& f) { return fn::substitute(f, fn::arg_v(), fn::arg_v()); };
    GateFn first = fn::combine(1, 1, 0, parts[0].second, on_v(parts[1].second));
    if (parts.size() == 2)
        return b.finish(b.apply(fn::threshold(spec.k, true, first), parts[0].first, parts[1].first));
    int acc = b.apply(first, parts[0].first, parts[1].first);
    for (std::size_t i = 2; i < parts.size(); ++i) {
        GateFn step = fn::combine(1, 1, 0, fn::arg_u(), on_v(parts[i].second));
        if (i + 1 == parts.size())
            step = fn::threshold(spec.k, true, step);
        acc = b.apply(step, acc, parts[i].first);
    }
    return b.finish(acc);
}

namespace {

    Rational pow2(int e) { return Rational(Integer(1) << static_cast<unsigned>(e)); }

    bool is_apply(const Circuit& c, int id) { return c.gates[static_cast<std::size_t>(id)].kind == Gate::Kind::Apply; }

    // Maps every input of c other than `skip` into the builder; returns the
    // first of them as an anchor for constant gates (-1 if none).
    int map_inputs(CircuitBuilder& b, const Circuit& c, int skip, std::vector<int>& map)
    {
        int anchor = -1;
        for (std::size_t id = 0; id < c.gates.size(); ++id) {
            const auto& g = c.gates[id];
            if (g.kind != Gate::Kind::Input || static_cast<int>(id) == skip)
                continue;
            map[id] = b.input(g.var);
            if (anchor < 0)
                anchor = map[id];
        }
        return anchor;
    }

    int find_input_or_throw(const Circuit& c, const std::string& var)
    {
        int id = c.find_input(var);
        if (id < 0)
            throw Error("circuit has no input named '" + var + "'");
        return id;
    }

    // Appends the binary-search construction for c into b and returns the output gate.
    int append_binary_search(CircuitBuilder& b, const Circuit& c, int q, const Rational& top, const std::string& var,
        std::vector<int>* phases, std::size_t* aux, int fallback_anchor = -1)
    {
        if (q < 0)
            throw Error("binary search needs q >= 0");
        c.validate();
        const int v = c.find_input(var);
        std::vector<int> in_map(c.gates.size(), -1);
        int anchor = map_inputs(b, c, v, in_map);
        if (anchor < 0)
            anchor = fallback_anchor;
        auto constant = [&](const Rational& value) {
            if (anchor < 0)
                throw Error("binary search over a circuit without further inputs");
            return b.apply(fn::constant(value), anchor, anchor);
        };
        if (c.output == v)
            throw Error("the searched input cannot be the circuit output");

        std::vector<bool> in_s(c.gates.size(), false);
        for (std::size_t id = 0; id < c.gates.size(); ++id) {
            const auto& g = c.gates[id];
            if (g.kind == Gate::Kind::Apply)
                in_s[id] = g.pred1 == v || g.pred2 == v || in_s[static_cast<std::size_t>(g.pred1)] ||
                    in_s[static_cast<std::size_t>(g.pred2)];
        }
        if (q == 0)
            return constant(0);
        if (v < 0 || ! in_s[static_cast<std::size_t>(c.output)])
            return constant(pow2(q) - 1);  // c ignores the searched input, so c = 1 everywhere

        const int p = q - 1;
        auto slot = [](int j) { return j == 0 ? fn::arg_u() : fn::arg_v(); };

        // Phase 0: c itself with the searched input fixed to top - 2^p, output scaled by 2^p.
        std::vector<int> map0 = in_map;
        if (anchor < 0)
            throw Error("binary search over a circuit without further inputs");
        for (std::size_t id = 0; id < c.gates.size(); ++id) {
            const auto& g = c.gates[id];
            if (g.kind != Gate::Kind::Apply)
                continue;
            GateFn e[2];
            int preds[2];
            for (int j = 0; j < 2; ++j) {
                int pr = j == 0 ? g.pred1 : g.pred2;
                e[j] = pr == v ? fn::constant(top - pow2(p)) : slot(j);
                preds[j] = pr == v ? anchor : map0[static_cast<std::size_t>(pr)];
            }
            GateFn f = fn::substitute(g.fn, e[0], e[1]);
            if (static_cast<int>(id) == c.output)
                f = fn::combine(pow2(p), 0, 0, f, f);
            map0[id] = b.apply(f, preds[0], preds[1]);
        }
        int h = map0[static_cast<std::size_t>(c.output)];
        if (phases)
            phases->push_back(h);
        if (p == 0)
            return h;

        // Gates outside S, with phi applied after and phi^{-1} before every gate-to-gate edge.
        std::vector<int> shared = in_map;
        for (std::size_t id = 0; id < c.gates.size(); ++id) {
            const auto& g = c.gates[id];
            if (g.kind != Gate::Kind::Apply || in_s[id])
                continue;
            GateFn e[2];
            for (int j = 0; j < 2; ++j)
                e[j] = is_apply(c, j == 0 ? g.pred1 : g.pred2) ? fn::phi_inv(slot(j)) : slot(j);
            shared[id] = b.apply(fn::phi(fn::substitute(g.fn, e[0], e[1])), shared[static_cast<std::size_t>(g.pred1)],
                shared[static_cast<std::size_t>(g.pred2)]);
        }

        for (int i = 1; i <= p; ++i) {
            const Rational m = pow2(p - i + 1), off = pow2(p - i);
            std::vector<int> map_i = shared;
            for (std::size_t id = 0; id < c.gates.size(); ++id) {
                const auto& g = c.gates[id];
                if (g.kind != Gate::Kind::Apply || ! in_s[id])
                    continue;
                bool carry[2];
                GateFn inner_arg[2], outer_arg[2];
                int preds[2];
                for (int j = 0; j < 2; ++j) {
                    int pr = j == 0 ? g.pred1 : g.pred2;
                    carry[j] = pr == v || in_s[static_cast<std::size_t>(pr)];
                    inner_arg[j] = pr == v || is_apply(c, pr) ? fn::phi_inv(slot(j)) : slot(j);
                    // The auxiliary gate for the searched input is folded into its consumers.
                    outer_arg[j] = pr == v ? fn::floor_carry_input(m, top, off, slot(j)) : slot(j);
                    preds[j] = pr == v ? h : map_i[static_cast<std::size_t>(pr)];
                }
                GateFn inner = fn::phi(fn::substitute(g.fn, inner_arg[0], inner_arg[1]));
                GateFn wrapped = carry[0] && carry[1] ? fn::floor_carry_both(m, inner)
                    : carry[0]                        ? fn::floor_carry_first(m, inner)
                                                      : fn::floor_carry_second(m, inner);
                GateFn f = fn::substitute(wrapped, outer_arg[0], outer_arg[1]);
                if (static_cast<int>(id) == c.output)
                    f = fn::round_phase(m, off, f);
                map_i[id] = b.apply(f, preds[0], preds[1]);
            }
            h = map_i[static_cast<std::size_t>(c.output)];
            if (phases)
                phases->push_back(h);
            if (aux)
                ++*aux;
        }
        return h;
    }

}  // namespace

BinarySearchResult binary_search_transform(const Circuit& c, int q, const Rational& top, std::string var)
{
    if (q <= 0)
        throw Error("binary search needs q >= 1");
    if (var.empty()) {
        auto names = c.input_names();
        if (names.empty())
            throw Error("circuit has no inputs");
        var = names.back();
    }
    find_input_or_throw(c, var);
    CircuitBuilder b;
    std::vector<int> phases;
    std::size_t aux = 0;
    int out = append_binary_search(b, c, q, top, var, &phases, &aux);
    BinarySearchResult r;
    std::vector<int> renumber;
    r.circuit = b.finish(out, &renumber);
    for (int h : phases)
        r.phase_outputs.push_back(renumber[static_cast<std::size_t>(h)]);
    r.raw_size = circuit_size(r.circuit) + aux;
    return r;
}

Circuit combine_split(const Circuit& c1, const std::string& var1, const Circuit& c2, const std::string& var2,
    const Integer& kappa, const Integer& lambda_min, const Integer& lambda_max, const std::vector<std::string>& anchors)
{
    if (lambda_max < lambda_min)
        throw Error("empty window in combine_split");
    c1.validate();
    c2.validate();
    CircuitBuilder b;
    std::vector<int> map1(c1.gates.size(), -1), map2(c2.gates.size(), -1);
    int anchor = map_inputs(b, c1, c1.find_input(var1), map1);
    int anchor2 = map_inputs(b, c2, c2.find_input(var2), map2);
    if (anchor < 0)
        anchor = anchor2;
    for (const auto& name : anchors)
        if (name != var1 && name != var2 && anchor < 0)
            anchor = b.input(name);
    if (anchor < 0)
        throw Error("combine_split needs an input besides the split pair");
    const Integer width = lambda_max - lambda_min;
    if (width == 0)
        return b.finish(b.apply(fn::constant(1), anchor, anchor));

    // Searching from lambda_min + 2^q - 1 >= lambda_max keeps every probe in the window's
    // upward closure, where c1 = 1 anyway.
    const int q = bits_for(width);
    const Integer top = lambda_min + (Integer(1) << static_cast<unsigned>(q)) - 1;
    int bgate = append_binary_search(b, c1, q, Rational(top), var1, nullptr, nullptr, anchor);

    const int v2 = c2.find_input(var2);
    const Rational shift = Rational(kappa - top);
    auto slot = [](int j) { return j == 0 ? fn::arg_u() : fn::arg_v(); };
    if (c2.output == v2)
        return b.finish(b.apply(fn::combine(1, 0, shift, fn::arg_u(), fn::arg_u()), bgate, bgate));
    for (std::size_t id = 0; id < c2.gates.size(); ++id) {
        const auto& g = c2.gates[id];
        if (g.kind != Gate::Kind::Apply)
            continue;
        GateFn e[2];
        int preds[2];
        for (int j = 0; j < 2; ++j) {
            int pr = j == 0 ? g.pred1 : g.pred2;
            e[j] = pr == v2 ? fn::combine(1, 0, shift, slot(j), slot(j)) : slot(j);
            preds[j] = pr == v2 ? bgate : map2[static_cast<std::size_t>(pr)];
        }
        map2[id] = b.apply(fn::substitute(g.fn, e[0], e[1]), preds[0], preds[1]);
    }
    return b.finish(map2[static_cast<std::size_t>(c2.output)]);
}

}  // namespace bbinterp
