#pragma once

// Test-only reference computations, independent of the code paths they check.

#include <cstddef>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ftbn/bayes_net.hpp"
#include "ftbn/fault_tree.hpp"
#include "ftbn/inference.hpp"

namespace ftbn::testing {

/// Random valid monotone tree over `primaries` events named p0..p{n-1},
/// mixing AND/OR/k-of-n gates with occasionally shared leaves.
FaultTree random_tree(std::mt19937_64& rng, std::size_t primaries);

/// Random binary network over `vars` variables with up to `max_parents`
/// parents each and random full-table CPTs.
BayesianNetwork random_network(std::mt19937_64& rng, std::size_t vars, std::size_t max_parents);

/// Minimal models of the top event by exhaustive evaluation of all 2^n assignments.
std::set<std::set<std::string>> brute_force_minimal_cut_sets(const FaultTree& ft);

/// Sum of joint entries consistent with `assignment` (state names resolved on `bn`).
double joint_mass(const JointDistribution& joint, const BayesianNetwork& bn, const Evidence& assignment);

/// Number of true inputs a k-of-n gate needs, evaluated by counting.
bool count_gate(GateKind kind, int k, const std::vector<bool>& inputs);

}  // namespace ftbn::testing
