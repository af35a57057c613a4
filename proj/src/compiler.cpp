#include "ftbn/compiler.hpp"

#include <stdexcept>
#include <unordered_map>

namespace ftbn {

namespace {

TableCpt root_table(double p_faulty) { return TableCpt{{1.0 - p_faulty, p_faulty}}; }

}  // namespace

CompiledNetwork compile(const FaultTree& ft, const std::map<std::string, double>& priors) {
    if (auto diagnostics = validate(ft); !diagnostics.empty()) throw ValidationError(std::move(diagnostics));

    std::vector<Diagnostic> missing;
    BayesianNetwork bn;
    for (const auto& p : ft.primaries) {
        auto it = priors.find(p.id);
        if (it == priors.end()) {
            missing.push_back({"missing-prior", p.id, "no prior probability for primary event"});
            continue;
        }
        if (!(it->second >= 0.0 && it->second <= 1.0)) {
            missing.push_back({"parameter-range", p.id, "prior probability outside [0, 1]"});
            continue;
        }
        bn.nodes.push_back({Variable{p.id, binary_states()}, {}, root_table(it->second)});
    }
    if (!missing.empty()) throw ValidationError(std::move(missing));

    CompiledNetwork out;
    for (const auto& g : ft.gates) {
        bn.nodes.push_back({Variable{g.output, binary_states()}, g.inputs, BoolGateCpt{g.kind, g.k}});
        for (std::size_t i = 0; i < g.inputs.size(); ++i)
            if (ft.find_primary(g.inputs[i])) out.report.dedup_map.push_back({g.output, i, g.inputs[i]});
    }
    out.bn = sorted_topologically(bn);
    out.report.root_count = ft.primaries.size();
    out.report.node_count = out.bn.nodes.size();
    return out;
}

BayesianNetwork with_root_priors(const BayesianNetwork& bn, const std::map<std::string, double>& priors) {
    BayesianNetwork out = bn;
    for (auto& node : out.nodes) {
        if (!node.parents.empty()) continue;
        auto it = priors.find(node.id());
        if (it == priors.end()) throw ValidationError({{"missing-prior", node.id(), "no prior probability for root"}});
        node.cpt = root_table(it->second);
    }
    return out;
}

bool boolean_eval(const FaultTree& ft, const std::map<std::string, bool>& assignment) {
    std::unordered_map<std::string, bool> value;
    for (const auto& p : ft.primaries) {
        auto it = assignment.find(p.id);
        if (it == assignment.end())
            throw std::invalid_argument("assignment does not cover primary event '" + p.id + "'");
        value[p.id] = it->second;
    }
    for (const Gate* g : gates_bottom_up(ft)) {
        std::vector<bool> in;
        in.reserve(g->inputs.size());
        for (const auto& id : g->inputs) in.push_back(value.at(id));
        value[g->output] = gate_function(g->kind, g->k, in);
    }
    return value.at(ft.top);
}

}  // namespace ftbn
