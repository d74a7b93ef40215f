#pragma once

#include "bbinterp/gate_fn.hpp"

#include <map>
#include <string>
#include <vector>

namespace bbinterp {

/// Fan-in 0 gates are named inputs; fan-in 2 gates apply a gate function to
/// their two predecessors (U = pred1, V = pred2).
struct Gate {
    enum class Kind { Input, Apply };
    Kind kind = Kind::Input;
    std::string var;
    GateFn fn;
    int pred1 = -1, pred2 = -1;
};

/// Gates are stored in topological order: predecessors have smaller ids.
struct Circuit {
    std::vector<Gate> gates;
    int output = -1;

    /// Throws InvariantViolation on broken structure or inadmissible gate functions.
    void validate() const;
    std::vector<std::string> input_names() const;
    int find_input(const std::string& name) const;
};

using Assignment = std::map<std::string, Rational>;

/// Throws UnboundVariable when a reachable input has no value.
ExtRational eval_circuit_ext(const Circuit& c, const Assignment& inputs);
/// As above; throws InvariantViolation if the output is infinite.
Rational eval_circuit(const Circuit& c, const Assignment& inputs);
/// Values of every gate.
std::vector<ExtRational> eval_all(const Circuit& c, const Assignment& inputs);

std::size_t circuit_size(const Circuit& c);

class CircuitBuilder {
public:
    /// Returns the existing gate when the name was added before.
    int input(const std::string& name);
    int apply(GateFn fn, int pred1, int pred2);
    /// A gate computing c. Needs some input gate to hang off; throws Error without one.
    int constant(const Rational& c);
    int num_gates() const { return static_cast<int>(gates_.size()); }
    const Gate& gate(int id) const { return gates_.at(static_cast<std::size_t>(id)); }

    /// Keeps the gates the output depends on, renumbered in order. `renumber`
    /// receives the new id of every builder gate (-1 when dropped).
    Circuit finish(int output, std::vector<int>* renumber = nullptr) const;

private:
    std::vector<Gate> gates_;
    std::map<std::string, int> inputs_;
};

struct CircuitStats {
    std::size_t gates = 0, inputs = 0;
};
CircuitStats stats(const Circuit& c);

}  // namespace bbinterp
