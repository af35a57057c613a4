#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "ftbn/bayes_net.hpp"
#include "ftbn/fault_tree.hpp"
#include "ftbn/inference.hpp"

namespace ftbn {

struct CutSet {
    std::vector<std::string> members;  // sorted, unique

    std::size_t order() const noexcept { return members.size(); }
    bool operator==(const CutSet&) const = default;
    auto operator<=>(const CutSet&) const = default;
};

struct ScoredCutSet {
    CutSet cutset;
    double unreliability = 0.0;            // product of member priors
    double posterior_unreliability = 0.0;  // unreliability / P(TE)
    double diagnosis_posterior = 0.0;      // P(members faulty, rest working | TE)
};

/// Minimal cut sets by bottom-up composition with subset minimization after
/// every gate. Sorted by order, then lexicographically by members.
/// Throws ValidationError on an invalid tree.
std::vector<CutSet> minimal_cut_sets(const FaultTree& ft);

/// Throws UnknownNameError when a member has no prior.
double unreliability(const CutSet& cs, const std::map<std::string, double>& priors);

/// Scores every minimal cut set against the compiled network of `ft`.
/// Sorted by unreliability descending, ties by members. Throws Error when the
/// network has non-deterministic gates: cut sets are undefined there and
/// complete diagnoses (top_k_diagnoses) take their place.
std::vector<ScoredCutSet> score_cut_sets(const FaultTree& ft, const BayesianNetwork& bn,
                                         const std::map<std::string, double>& priors);
std::vector<ScoredCutSet> score_cut_sets(const FaultTree& ft, const InferenceEngine& engine,
                                         const std::map<std::string, double>& priors);

}  // namespace ftbn
