#pragma once

#include "bbinterp/circuit.hpp"

#include <string>
#include <vector>

namespace bbinterp {

/// One summand s * tau of a leaf inequality. A bumped input contributes K
/// instead once tau >= level.
struct LeafTerm {
    std::string var;
    Rational s;
    bool bumped = false;
    Rational level, k_bump;
};

struct LeafSpec {
    Rational k;
    std::vector<LeafTerm> terms;
};

/// 1 iff the contributions sum to more than k. `inputs` are declared first, so a
/// constant circuit still has an input to hang off. Throws Error on negative s
/// or a bump constant below max(k + 1, s L + s).
Circuit build_leaf_circuit(const LeafSpec& spec, const std::vector<std::string>& inputs);

struct BinarySearchResult {
    Circuit circuit;
    std::vector<int> phase_outputs;  // gate ids of h_0 .. h_{q-1}; empty for degenerate inputs
    std::size_t raw_size = 0;        // counting the auxiliary gates that pre-composition removes
};

/// Given c with c(x, top) = 1 for all x, computes
/// b(x) = max{lambda in {0..2^q-1} : c(x, top - lambda) = 1} over the remaining
/// inputs. `var` names the searched input (default: the last input gate).
BinarySearchResult binary_search_transform(const Circuit& c, int q, const Rational& top, std::string var = {});

/// Decides whether some integer t in [lambda_min, lambda_max] has c1(x, t) = 1 and
/// c2(x, kappa - t) = 1, for c1 non-decreasing in t with c1(x, lambda_max) = 1 and
/// c2(x, kappa - lambda_min) = 1. The inputs shared by name are merged; `anchors`
/// are declared up front for constant gates when c1 and c2 have no other inputs.
Circuit combine_split(const Circuit& c1, const std::string& var1, const Circuit& c2, const std::string& var2,
    const Integer& kappa, const Integer& lambda_min, const Integer& lambda_max,
    const std::vector<std::string>& anchors = {});

/// ceil(log2(l + 1)) for l >= 0.
int bits_for(const Integer& l);

}  // namespace bbinterp
