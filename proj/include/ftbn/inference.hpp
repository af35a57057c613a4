#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ftbn/bayes_net.hpp"
#include "ftbn/factor.hpp"

namespace ftbn {

/// Observed states keyed by variable id.
using Evidence = std::map<std::string, std::string>;

/// Parses "VAR=STATE,VAR=STATE". Throws ParseError on malformed pairs.
Evidence parse_evidence(std::string_view text);

struct Distribution {
    std::vector<std::string> states;
    std::vector<double> probs;

    /// Probability of the named state; throws UnknownNameError when absent.
    double at(std::string_view state) const;
};

struct StateAssignment {
    std::string variable;
    std::string state;
    std::size_t index = 0;
};

/// Complete assignment to the diagnosis variables with its posterior.
struct RankedDiagnosis {
    std::vector<StateAssignment> assignment;  // ordered by variable id
    double joint = 0.0;                       // P(assignment, evidence)
    double posterior = 0.0;                   // P(assignment | evidence)

    /// Assignments whose state is not the nominal state 0.
    std::vector<StateAssignment> abnormal() const;
};

/// Nonzero-probability complete assignments, in depth-first enumeration order.
struct JointDistribution {
    std::vector<std::string> variables;  // topological order
    std::vector<std::uint8_t> states;    // entries x variables, row-major
    std::vector<double> probs;           // P(x | evidence)
    double evidence_probability = 0.0;   // sum of P(x, evidence)

    std::size_t entries() const noexcept { return probs.size(); }
    std::uint8_t state(std::size_t entry, std::size_t var) const { return states[entry * variables.size() + var]; }
};

inline constexpr std::size_t kDefaultEnumerationLimit = std::size_t{1} << 22;

/// Exact inference over one network. Construction validates the network and
/// expands every CPT once; queries are const and safe to run concurrently.
class InferenceEngine {
public:
    explicit InferenceEngine(const BayesianNetwork& bn, Execution exec = Execution::Parallel);

    /// Network in the engine's (topological) node order.
    const BayesianNetwork& network() const noexcept { return bn_; }
    const std::vector<std::string>& roots() const noexcept { return roots_; }
    bool deterministic_non_roots() const noexcept { return deterministic_; }

    /// Posterior distribution of `var` given `evidence` by variable elimination.
    Distribution marginal(std::string_view var, const Evidence& evidence = {}) const;

    /// Joint probability P(assignment) of a partial assignment.
    double probability(const Evidence& assignment) const;

    /// P(target | evidence); 0 when target contradicts evidence.
    double query_probability(const Evidence& target, const Evidence& evidence = {}) const;

    /// The k most probable complete assignments to `over` (default: all roots)
    /// given evidence, descending posterior, ties by lexicographic state order.
    std::vector<RankedDiagnosis> top_k_diagnoses(const Evidence& evidence, std::size_t k,
                                                 std::vector<std::string> over = {}) const;

    /// Brute-force joint by direct products of CPT entries. Throws
    /// StateSpaceError when the number of enumeration paths may exceed `limit`.
    JointDistribution enumerate_joint(const Evidence& evidence = {},
                                      std::size_t limit = kDefaultEnumerationLimit) const;

    /// Forward evaluation of a network whose non-roots are deterministic.
    /// `roots` must assign every root; returns the state of every variable.
    std::map<std::string, std::size_t> propagate(const std::map<std::string, std::size_t>& roots) const;

    /// Elimination order chosen for the given query (min-fill, ties by id).
    std::vector<std::string> elimination_order(const std::vector<std::string>& keep, const Evidence& evidence) const;

private:
    struct Resolved {
        std::vector<std::pair<std::size_t, std::size_t>> observed;  // (var, state), sorted by var
    };

    Resolved resolve(const Evidence& evidence) const;
    std::size_t require_var(std::string_view id) const;
    Factor eliminate(const std::vector<std::size_t>& keep, const Resolved& evidence) const;
    std::vector<std::size_t> order_for(const std::vector<std::size_t>& eliminate,
                                       const std::vector<Factor>& factors) const;
    std::size_t row_of(std::size_t var, const std::vector<std::size_t>& states) const;

    std::vector<RankedDiagnosis> top_k_roots_deterministic(const Resolved& evidence, std::size_t k) const;
    std::vector<RankedDiagnosis> top_k_by_enumeration(const Resolved& evidence, std::size_t k,
                                                      const std::vector<std::size_t>& over) const;

    struct Chunk {
        std::vector<std::uint8_t> states;  // paths x variables
        std::vector<double> mass;          // P(path, evidence)
    };
    std::size_t enumeration_bound(const std::vector<std::ptrdiff_t>& observed) const;
    Chunk enumerate_paths(const std::vector<std::ptrdiff_t>& observed, std::size_t limit) const;
    void enumerate_from(std::size_t depth, std::vector<std::size_t>& states, double mass,
                        const std::vector<std::ptrdiff_t>& observed, Chunk& out) const;

    BayesianNetwork bn_;
    Execution exec_;
    std::vector<std::vector<std::size_t>> parents_;  // parent indices per node
    std::vector<std::size_t> cards_;
    std::vector<TableCpt> tables_;
    std::vector<Factor> factors_;  // scope: parents..., node
    std::vector<std::string> roots_;
    bool deterministic_ = true;
};

Distribution marginal(const BayesianNetwork& bn, std::string_view var, const Evidence& evidence = {});
double query_probability(const BayesianNetwork& bn, const Evidence& target, const Evidence& evidence = {});
std::vector<RankedDiagnosis> top_k_diagnoses(const BayesianNetwork& bn, const Evidence& evidence, std::size_t k);
JointDistribution enumerate_joint(const BayesianNetwork& bn, const Evidence& evidence = {});

}  // namespace ftbn
