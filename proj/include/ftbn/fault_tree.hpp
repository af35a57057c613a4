#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ftbn/error.hpp"
#include "ftbn/reliability.hpp"

namespace ftbn {

struct PrimaryEvent {
    std::string id;
    std::string component_class;
    FailureModel failure;

    bool operator==(const PrimaryEvent&) const = default;
};

enum class GateKind { And, Or, KofN };

std::string_view to_string(GateKind kind);

/// A logical gate producing event `output` from `inputs`.
/// `k` and `n` are meaningful only for KofN, where `n` is the declared arity
/// and must equal the input count.
struct Gate {
    GateKind kind = GateKind::Or;
    int k = 0;
    int n = 0;
    std::vector<std::string> inputs;
    std::string output;

    bool operator==(const Gate&) const = default;
};

/// Static fault tree: primary events, gates, and the top event id.
/// Shared leaves are expressed by repeating a primary id in several gates.
struct FaultTree {
    std::vector<PrimaryEvent> primaries;
    std::vector<Gate> gates;
    std::string top;

    const PrimaryEvent* find_primary(std::string_view id) const;
    const Gate* find_gate(std::string_view output) const;
    bool operator==(const FaultTree&) const = default;
};

struct SourcePos {
    std::size_t line = 0;
    std::size_t column = 0;
};

/// Result of the syntactic pass: the tree as written, without structural checks,
/// plus the position of every definition for error reporting.
struct ParsedFaultTree {
    FaultTree tree;
    std::map<std::string, SourcePos> positions;
    SourcePos top_position;
};

/// Parses FT DSL text. Throws ParseError on syntax errors only.
ParsedFaultTree parse_fault_tree_syntax(std::string_view text);

/// Parses and validates. Throws ParseError on syntax errors and ValidationError on
/// structural violations (duplicate definition, undefined reference, cycle, arity);
/// each diagnostic message is prefixed with the offending statement's line:column.
FaultTree parse_fault_tree(std::string_view text);

/// Canonical DSL text: primaries, then gates, then top, in stored order.
std::string serialize_fault_tree(const FaultTree& ft);

/// Structural diagnostics; empty iff every FaultTree invariant holds.
std::vector<Diagnostic> validate(const FaultTree& ft);

/// Gate outputs ordered so that every gate follows the gates feeding it.
/// Requires an acyclic tree.
std::vector<const Gate*> gates_bottom_up(const FaultTree& ft);

/// Boolean value of the gate function for the given input values.
bool gate_function(GateKind kind, int k, const std::vector<bool>& inputs);

/// The redundant PLC controller with 2:3 voting (18 primaries, 18 gates),
/// with exponential failure rates per component class.
FaultTree plc_case_study();

/// Failure probabilities of the PLC component classes at 4e5 h to five decimals,
/// keyed by component class.
const std::map<std::string, double>& plc_rounded_probabilities();

/// The PLC tree with every primary given its five-decimal probability.
FaultTree plc_case_study_rounded_priors();

}  // namespace ftbn
