#include "bbinterp/circuit.hpp"
#include "bbinterp/errors.hpp"

#include <set>

namespace bbinterp {

void Circuit::validate() const
{
    std::set<std::string> names;
    for (std::size_t id = 0; id < gates.size(); ++id) {
        const auto& g = gates[id];
        const std::string where = "gate " + std::to_string(id);
        if (g.kind == Gate::Kind::Input) {
            if (g.var.empty() || ! names.insert(g.var).second)
                throw InvariantViolation(where + ": missing or duplicate input name");
            continue;
        }
        if (g.pred1 < 0 || g.pred2 < 0 || static_cast<std::size_t>(g.pred1) >= id || static_cast<std::size_t>(g.pred2) >= id)
            throw InvariantViolation(where + ": predecessors must precede the gate");
        if (! admissible(g.fn))
            throw InvariantViolation(where + ": gate function is not admissible");
    }
    if (output < 0 || static_cast<std::size_t>(output) >= gates.size())
        throw InvariantViolation("circuit output is not a gate");
}

std::vector<std::string> Circuit::input_names() const
{
    std::vector<std::string> out;
    for (const auto& g : gates)
        if (g.kind == Gate::Kind::Input)
            out.push_back(g.var);
    return out;
}

int Circuit::find_input(const std::string& name) const
{
    for (std::size_t id = 0; id < gates.size(); ++id)
        if (gates[id].kind == Gate::Kind::Input && gates[id].var == name)
            return static_cast<int>(id);
    return -1;
}

std::vector<ExtRational> eval_all(const Circuit& c, const Assignment& inputs)
{
    std::vector<ExtRational> value(c.gates.size());
    for (std::size_t id = 0; id < c.gates.size(); ++id) {
        const auto& g = c.gates[id];
        if (g.kind == Gate::Kind::Input) {
            auto it = inputs.find(g.var);
            if (it == inputs.end())
                throw UnboundVariable(g.var);
            value[id] = ExtRational(it->second);
        }
        else
            value[id] = evaluate(g.fn, value[static_cast<std::size_t>(g.pred1)], value[static_cast<std::size_t>(g.pred2)]);
    }
    return value;
}

ExtRational eval_circuit_ext(const Circuit& c, const Assignment& inputs)
{
    if (c.output < 0 || static_cast<std::size_t>(c.output) >= c.gates.size())
        throw InvariantViolation("circuit output is not a gate");
    return eval_all(c, inputs)[static_cast<std::size_t>(c.output)];
}

Rational eval_circuit(const Circuit& c, const Assignment& inputs)
{
    auto v = eval_circuit_ext(c, inputs);
    if (! v.finite())
        throw InvariantViolation("circuit output is infinite");
    return v.value;
}

std::size_t circuit_size(const Circuit& c) { return c.gates.size(); }

CircuitStats stats(const Circuit& c)
{
    CircuitStats s;
    s.gates = c.gates.size();
    for (const auto& g : c.gates)
        s.inputs += g.kind == Gate::Kind::Input;
    return s;
}

int CircuitBuilder::input(const std::string& name)
{
    if (auto it = inputs_.find(name); it != inputs_.end())
        return it->second;
    int id = num_gates();
    gates_.push_back(Gate{Gate::Kind::Input, name, nullptr, -1, -1});
    inputs_.emplace(name, id);
    return id;
}

int CircuitBuilder::apply(GateFn fn, int pred1, int pred2)
{
    if (pred1 < 0 || pred1 >= num_gates() || pred2 < 0 || pred2 >= num_gates())
        throw InvariantViolation("gate predecessor does not exist");
    gates_.push_back(Gate{Gate::Kind::Apply, {}, std::move(fn), pred1, pred2});
    return num_gates() - 1;
}

int CircuitBuilder::constant(const Rational& c)
{
    if (inputs_.empty())
        throw Error("a constant gate needs an input to attach to");
    int anchor = inputs_.begin()->second;
    return apply(fn::constant(c), anchor, anchor);
}

Circuit CircuitBuilder::finish(int output, std::vector<int>* renumber_out) const
{
    if (output < 0 || output >= num_gates())
        throw InvariantViolation("circuit output is not a gate");
    std::vector<bool> keep(gates_.size(), false);
    keep[static_cast<std::size_t>(output)] = true;
    for (int id = output; id >= 0; --id) {
        const auto& g = gates_[static_cast<std::size_t>(id)];
        if (! keep[static_cast<std::size_t>(id)] || g.kind == Gate::Kind::Input)
            continue;
        keep[static_cast<std::size_t>(g.pred1)] = true;
        keep[static_cast<std::size_t>(g.pred2)] = true;
    }
    Circuit c;
    std::vector<int> renumber(gates_.size(), -1);
    for (std::size_t id = 0; id < gates_.size(); ++id) {
        if (! keep[id])
            continue;
        Gate g = gates_[id];
        if (g.kind == Gate::Kind::Apply) {
            g.pred1 = renumber[static_cast<std::size_t>(g.pred1)];
            g.pred2 = renumber[static_cast<std::size_t>(g.pred2)];
        }
        renumber[id] = static_cast<int>(c.gates.size());
        c.gates.push_back(std::move(g));
    }
    c.output = renumber[static_cast<std::size_t>(output)];
    if (renumber_out)
        *renumber_out = std::move(renumber);
    return c;
}

}  // namespace bbinterp
