#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ftbn/error.hpp"
#include "ftbn/fault_tree.hpp"

namespace ftbn {

/// Discrete variable. Binary convention: state 0 = working/false, 1 = faulty/true.
struct Variable {
    std::string id;
    std::vector<std::string> states;

    std::size_t cardinality() const noexcept { return states.size(); }
    std::optional<std::size_t> state_index(std::string_view name) const;
    bool operator==(const Variable&) const = default;
};

/// Full conditional table. Rows enumerate parent configurations as a mixed-radix
/// number over the parents in declared order, last parent varying fastest; each
/// row holds one probability per child state. Flat index = row * |child| + state.
struct TableCpt {
    std::vector<double> probs;
    bool operator==(const TableCpt&) const = default;
};

/// Deterministic AND / OR / k-of-n over binary parents.
struct BoolGateCpt {
    GateKind kind = GateKind::Or;
    int k = 0;
    bool operator==(const BoolGateCpt&) const = default;
};

/// P(true | x) = 1 - (1 - leak) * prod_{i: x_i faulty} (1 - c_i).
struct NoisyOrCpt {
    std::vector<double> c;
    double leak = 0.0;
    bool operator==(const NoisyOrCpt&) const = default;
};

/// P(true | x) = prod_{i: x_i working} c_i.
struct NoisyAndCpt {
    std::vector<double> c;
    bool operator==(const NoisyAndCpt&) const = default;
};

/// Binary child over multi-state parents. c[i][s - 1] is the activation
/// probability of parent i in state s >= 1; state 0 contributes nothing.
/// P(true | x) = 1 - (1 - leak) * prod_i (1 - c_i(x_i)).
struct NoisyMaxCpt {
    std::vector<std::vector<double>> c;
    double leak = 0.0;
    bool operator==(const NoisyMaxCpt&) const = default;
};

using CptSpec = std::variant<TableCpt, BoolGateCpt, NoisyOrCpt, NoisyAndCpt, NoisyMaxCpt>;

std::string_view cpt_type_name(const CptSpec& cpt);

struct Node {
    Variable variable;
    std::vector<std::string> parents;
    CptSpec cpt;

    const std::string& id() const noexcept { return variable.id; }
    bool operator==(const Node&) const = default;
};

struct BayesianNetwork {
    std::vector<Node> nodes;

    const Node* find(std::string_view id) const;
    std::optional<std::size_t> index_of(std::string_view id) const;
    bool operator==(const BayesianNetwork&) const = default;
};

inline const std::vector<std::string>& binary_states() {
    static const std::vector<std::string> states{"working", "faulty"};
    return states;
}

/// Expands any CPT kind to a full table given the parents' cardinalities.
/// Throws ValidationError on arity or state-count mismatch.
TableCpt expand_cpt(const Node& node, std::span<const std::size_t> parent_cards);
TableCpt expand_cpt(const BayesianNetwork& bn, const Node& node);

/// True when every row of the table is a point mass.
bool is_deterministic(const TableCpt& table, std::size_t child_cards);

std::vector<Diagnostic> validate_bn(const BayesianNetwork& bn);

/// Node indices in topological order, ties broken by variable id.
/// Throws ValidationError when the graph has a cycle or dangling parent.
std::vector<std::size_t> topological_order(const BayesianNetwork& bn);

/// Same network with nodes reordered topologically (ties by id).
BayesianNetwork sorted_topologically(const BayesianNetwork& bn);

/// Replaces the parents and CPT of `child`, keeping its variable.
/// Throws UnknownNameError for unknown ids and ValidationError when the
/// result is cyclic or the CPT does not fit.
BayesianNetwork set_dependency(const BayesianNetwork& bn, std::string_view child,
                               std::vector<std::string> new_parents, CptSpec cpt);

/// Replaces whole nodes (variable states included) in one step, validating only
/// the final network. Needed when changing a variable's states also changes the
/// CPTs of its children.
BayesianNetwork replace_nodes(const BayesianNetwork& bn, std::vector<Node> replacements);

/// BN interchange document. Output is byte-stable for equal networks.
std::string to_json(const BayesianNetwork& bn);

/// Parses a BN interchange document. Throws ParseError on malformed JSON or
/// schema violations; does not run validate_bn.
BayesianNetwork bn_from_json(std::string_view text);

}  // namespace ftbn
