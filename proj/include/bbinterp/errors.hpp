#pragma once

#include "bbinterp/rational.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace bbinterp {

/// Base for every structured failure raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class CapExceeded : public Error {
public:
    using Error::Error;
};

class UnknownNode : public Error {
public:
    explicit UnknownNode(int id) : Error("unknown node id " + std::to_string(id)), node(id) {}
    int node;
};

/// A leaf whose node problem is LP-feasible; carries the witness point.
class FeasibleLeaf : public Error {
public:
    FeasibleLeaf(int leaf_id, RatVector witness_point);
    int leaf;
    RatVector witness;
};

/// Branch-and-bound met an integral LP optimum, so the system has an integer point.
class IntegralPointFound : public Error {
public:
    explicit IntegralPointFound(RatVector p);
    RatVector point;
};

class DepthCapExceeded : public Error {
public:
    explicit DepthCapExceeded(int cap) : Error("depth cap " + std::to_string(cap) + " exceeded"), depth_cap(cap) {}
    int depth_cap;
};

class SearchBudgetExceeded : public Error {
public:
    SearchBudgetExceeded(long budget, long lower_bound, std::optional<long> upper_bound);
    long budget;
    long proven_lower_bound;
    std::optional<long> best_so_far;
};

/// Raised when a construction observes a state its correctness argument rules out.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class UnboundVariable : public Error {
public:
    explicit UnboundVariable(const std::string& name) : Error("unbound circuit input '" + name + "'"), variable(name) {}
    std::string variable;
};

}  // namespace bbinterp
