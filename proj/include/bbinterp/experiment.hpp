#pragma once

#include "bbinterp/bb_tree.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bbinterp {

enum class Family { CliqueColouring, RandomCnf };

struct ExperimentSpec {
    Family family = Family::CliqueColouring;
    std::vector<int> grid;          // r for clique-colouring, n for random CNFs
    int k = 3;                      // clique size, or clause width for CNFs
    int m = 0;                      // CNF clause draws; 0 picks floor((ln 2 + 0.1) 2^k n)
    std::vector<std::uint64_t> seeds{1};
    BranchingStrategy strategy = BranchingStrategy::VariableBranching;
    int witnesses = 50;             // per side for clique-colouring
    int sampled_subsets = 100;      // CNF certificate checks when m > 10
    long cap_enum = 1L << 22;
    int cap_depth = -1;
    bool stable = false;            // write ms = 0 so reruns compare byte for byte

    /// Throws Error on an empty grid or non-positive caps.
    void validate() const;
};

struct ReportRow {
    std::string instance_id;
    std::size_t n = 0, n3 = 0, tree_size = 0, circuit_size = 0;
    double bound_log2 = 0;
    bool separated = false;
    long ms = 0;
    std::string error;  // empty unless the pipeline failed on this point
};

struct Report {
    std::vector<ReportRow> rows;
};

Report run_experiment(const ExperimentSpec& spec);

/// Header instance_id,n,n3,tree_size,circuit_size,thm3_bound,separated,ms.
std::string report_csv(const Report& r);
std::string report_svg(const Report& r);

}  // namespace bbinterp
