#include "ftbn/plc_variants.hpp"

namespace ftbn {

namespace {

double root_faulty_prior(const BayesianNetwork& bn, const char* id) {
    const Node* node = bn.find(id);
    if (!node || !node->parents.empty()) throw UnknownNameError(std::string("expected root '") + id + "'");
    const auto* t = std::get_if<TableCpt>(&node->cpt);
    if (!t || t->probs.size() != 2) throw ValidationError({{"states", id, "expected a binary root prior"}});
    return t->probs[1];
}

}  // namespace

BayesianNetwork plc_noisy_variant(const BayesianNetwork& plc, double leak) {
    BayesianNetwork bn = set_dependency(plc, "TE", {"PSS", "Voter", "CH"}, NoisyOrCpt{{0.7, 1.0, 1.0}, leak});
    return set_dependency(bn, "PSS", {"PS1", "PS2"}, NoisyAndCpt{{0.01, 0.01}});
}

BayesianNetwork plc_sequential_dependency_variant(const BayesianNetwork& plc, double over_voltage_share) {
    const std::vector<std::string> supply_states{"working", "over-voltage", "dead"};
    std::vector<Node> edits;
    for (const char* ps : {"PS1", "PS2"}) {
        const double p = root_faulty_prior(plc, ps);
        edits.push_back({Variable{ps, supply_states},
                         {},
                         TableCpt{{1.0 - p, p * over_voltage_share, p * (1.0 - over_voltage_share)}}});
    }

    // PSS over two 3-state supplies: faulty iff neither supply is working.
    TableCpt pss;
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b) {
            const bool down = a != 0 && b != 0;
            pss.probs.push_back(down ? 0.0 : 1.0);
            pss.probs.push_back(down ? 1.0 : 0.0);
        }
    edits.push_back({Variable{"PSS", binary_states()}, {"PS1", "PS2"}, pss});

    for (const char* cpu : {"CPU_A", "CPU_B", "CPU_C"}) {
        const double intrinsic = root_faulty_prior(plc, cpu);
        edits.push_back({Variable{cpu, binary_states()},
                         {"PS1", "PS2"},
                         NoisyMaxCpt{{{0.66667, 1.0}, {0.66667, 1.0}}, intrinsic}});
    }
    return sorted_topologically(replace_nodes(plc, std::move(edits)));
}

}  // namespace ftbn
