#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "ftbn/bayes_net.hpp"
#include "ftbn/fault_tree.hpp"

namespace ftbn {

/// One leaf of the tree: input `position` of gate `gate` refers to `root`.
struct LeafOccurrence {
    std::string gate;
    std::size_t position = 0;
    std::string root;
};

struct CompilationReport {
    std::size_t root_count = 0;
    std::size_t node_count = 0;
    std::vector<LeafOccurrence> dedup_map;
};

struct CompiledNetwork {
    BayesianNetwork bn;
    CompilationReport report;
};

/// Maps a fault tree onto a binary Bayesian network: one root per distinct
/// primary event with P(faulty) from `priors`, one deterministic node per gate
/// output, arcs mirroring the tree. Nodes come out topologically sorted with
/// ties broken by id. Throws ValidationError for an invalid tree or a missing
/// or out-of-range prior.
CompiledNetwork compile(const FaultTree& ft, const std::map<std::string, double>& priors);

/// Replaces the root priors of a compiled network, leaving structure untouched.
BayesianNetwork with_root_priors(const BayesianNetwork& bn, const std::map<std::string, double>& priors);

/// Reference semantics: value of the top event when exactly the primaries
/// mapped to true have failed. Throws std::invalid_argument if a primary is missing.
bool boolean_eval(const FaultTree& ft, const std::map<std::string, bool>& assignment);

}  // namespace ftbn
