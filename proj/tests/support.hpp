#pragma once

#include "bbinterp/circuit.hpp"
#include "bbinterp/conformal.hpp"
#include "bbinterp/lin_system.hpp"

#include <random>

namespace testsupport {

using namespace bbinterp;

/// Fourier-Motzkin elimination; true iff the system has no real solution.
bool fm_empty(const LinSystem& sys);

LinSystem random_system(std::mt19937_64& rng, std::size_t n, std::size_t m, long lo, long hi);

/// Adds 0 <= x_j <= 1 rows.
LinSystem with_unit_bounds(LinSystem sys);

/// The 2-dimensional cross-polytope in [0,1]^2 (rows scaled by 2).
LinSystem cross_polytope_2d();

long uniform(std::mt19937_64& rng, long lo, long hi);

GateFn random_fn(std::mt19937_64& rng);

// A random monotone circuit over x1..x<k> and y whose output is a threshold gate.
Circuit random_circuit(std::mt19937_64& rng, int k, int gates);

Assignment random_point(std::mt19937_64& rng, int k);

// Largest lambda in {0..2^q-1} with c(x, top - lambda) = 1, by enumeration; -1 if none.
long brute_search(const Circuit& c, Assignment x, const std::string& var, int q, const Rational& top);

// Checks a decomposition without the library's own conformance checker.
bool independent_conforming(const CertifiedTree& original, const ProductSystem& prod, const Decomposition& d);

}  // namespace testsupport
