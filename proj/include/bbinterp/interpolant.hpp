#pragma once

#include "bbinterp/circuit.hpp"
#include "bbinterp/cnf.hpp"
#include "bbinterp/instances.hpp"

#include <string>
#include <vector>

namespace bbinterp {

/// Input names used by compiled interpolants: z1..zn for the coupling
/// variables, gm<id> / gp<id> for the shifts at the two children of node id.
std::string z_input(std::size_t j);
std::string shift_input(int node, BranchSide side);

/// A monotone circuit over z1..z<n3> that outputs 1 iff the tree instantiated
/// at z decomposes into a tree for P(z), so 1 on Z2 and 0 on Z1. The tree must
/// be certified against inst.full_system(); throws Error otherwise.
Circuit compile_interpolant(const InterpolationInstance& inst, const CertifiedTree& tree);

int eval_interpolant(const Circuit& c, const std::vector<int>& z);

/// log2 of the size guarantee for a tree with `tree_size` leaves over n variables in total.
double size_bound_log2(std::size_t n, std::size_t tree_size);

/// Interpolant for the selector split of a refuted CNF: 1 means
/// {C_i^0 : i in A} is unsatisfiable, 0 means {C_i^1 : i not in A} is.
Circuit certificate_from_tree(const SplitCNF& split, const BBTree& refutation);

/// The circuit's claim for the subset A (0/1 indicator), checked by enumeration.
bool check_certificate(const Circuit& c, const SplitCNF& split, const std::vector<int>& a);

}  // namespace bbinterp
