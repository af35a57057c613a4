#include "ftbn/inference.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace ftbn {

Evidence parse_evidence(std::string_view text) {
    Evidence out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view item = text.substr(start, end - start);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (!item.empty()) {
            const std::size_t eq = item.find('=');
            if (eq == std::string_view::npos || eq == 0 || eq + 1 == item.size())
                throw ParseError("evidence item '" + std::string(item) + "' is not VAR=STATE", 0, 0);
            const std::string var(item.substr(0, eq));
            const std::string state(item.substr(eq + 1));
            auto [it, inserted] = out.emplace(var, state);
            if (!inserted && it->second != state)
                throw ParseError("conflicting evidence for '" + var + "'", 0, 0);
        }
        start = end + 1;
    }
    return out;
}

double Distribution::at(std::string_view state) const {
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i] == state) return probs[i];
    throw UnknownNameError("unknown state '" + std::string(state) + "'");
}

std::vector<StateAssignment> RankedDiagnosis::abnormal() const {
    std::vector<StateAssignment> out;
    for (const auto& a : assignment)
        if (a.index != 0) out.push_back(a);
    return out;
}

InferenceEngine::InferenceEngine(const BayesianNetwork& bn, Execution exec) : exec_(exec) {
    if (auto diagnostics = validate_bn(bn); !diagnostics.empty()) throw ValidationError(std::move(diagnostics));
    bn_ = sorted_topologically(bn);
    const std::size_t n = bn_.nodes.size();
    cards_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        cards_[i] = bn_.nodes[i].variable.cardinality();
        if (cards_[i] > std::numeric_limits<std::uint8_t>::max())
            throw ValidationError({{"states", bn_.nodes[i].id(), "more than 255 states"}});
    }
    parents_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Node& node = bn_.nodes[i];
        std::vector<std::size_t> scope, cards;
        for (const auto& p : node.parents) {
            const std::size_t pi = *bn_.index_of(p);
            parents_[i].push_back(pi);
            scope.push_back(pi);
            cards.push_back(cards_[pi]);
        }
        tables_.push_back(expand_cpt(bn_, node));
        scope.push_back(i);
        cards.push_back(cards_[i]);
        factors_.emplace_back(scope, cards, tables_.back().probs);
        if (node.parents.empty())
            roots_.push_back(node.id());
        else if (!is_deterministic(tables_.back(), cards_[i]))
            deterministic_ = false;
    }
    std::sort(roots_.begin(), roots_.end());
}

std::size_t InferenceEngine::require_var(std::string_view id) const {
    auto idx = bn_.index_of(id);
    if (!idx) throw UnknownNameError("unknown variable '" + std::string(id) + "'");
    return *idx;
}

InferenceEngine::Resolved InferenceEngine::resolve(const Evidence& evidence) const {
    Resolved r;
    for (const auto& [var, state] : evidence) {
        const std::size_t v = require_var(var);
        auto s = bn_.nodes[v].variable.state_index(state);
        if (!s) throw UnknownNameError("variable '" + var + "' has no state '" + state + "'");
        r.observed.emplace_back(v, *s);
    }
    std::sort(r.observed.begin(), r.observed.end());
    return r;
}

std::size_t InferenceEngine::row_of(std::size_t var, const std::vector<std::size_t>& states) const {
    std::size_t row = 0;
    for (std::size_t p : parents_[var]) row = row * cards_[p] + states[p];
    return row;
}

std::vector<std::size_t> InferenceEngine::order_for(const std::vector<std::size_t>& eliminate,
                                                    const std::vector<Factor>& factors) const {
    std::vector<std::set<std::size_t>> adj(bn_.nodes.size());
    for (const auto& f : factors)
        for (std::size_t a : f.scope())
            for (std::size_t b : f.scope())
                if (a != b) adj[a].insert(b);

    std::set<std::size_t> remaining(eliminate.begin(), eliminate.end());
    std::vector<std::size_t> order;
    while (!remaining.empty()) {
        std::size_t best = 0;
        std::size_t best_fill = std::numeric_limits<std::size_t>::max();
        for (std::size_t v : remaining) {
            std::size_t fill = 0;
            for (auto a = adj[v].begin(); a != adj[v].end(); ++a)
                for (auto b = std::next(a); b != adj[v].end(); ++b)
                    if (!adj[*a].count(*b)) ++fill;
            if (fill < best_fill || (fill == best_fill && bn_.nodes[v].id() < bn_.nodes[best].id())) {
                best = v;
                best_fill = fill;
            }
        }
        for (std::size_t a : adj[best])
            for (std::size_t b : adj[best])
                if (a != b) adj[a].insert(b);
        for (std::size_t a : adj[best]) adj[a].erase(best);
        adj[best].clear();
        remaining.erase(best);
        order.push_back(best);
    }
    return order;
}

Factor InferenceEngine::eliminate(const std::vector<std::size_t>& keep, const Resolved& evidence) const {
    // Only ancestors of query and evidence variables matter; the rest sum to one.
    std::vector<bool> relevant(bn_.nodes.size(), false);
    std::vector<std::size_t> stack(keep);
    for (const auto& [v, s] : evidence.observed) stack.push_back(v);
    while (!stack.empty()) {
        const std::size_t v = stack.back();
        stack.pop_back();
        if (relevant[v]) continue;
        relevant[v] = true;
        for (std::size_t p : parents_[v]) stack.push_back(p);
    }

    std::vector<Factor> factors;
    for (std::size_t i = 0; i < bn_.nodes.size(); ++i) {
        if (!relevant[i]) continue;
        Factor f = factors_[i];
        for (const auto& [v, s] : evidence.observed) f = restrict(f, v, s);
        factors.push_back(std::move(f));
    }

    std::vector<std::size_t> to_eliminate;
    for (std::size_t i = 0; i < bn_.nodes.size(); ++i) {
        const bool observed = std::any_of(evidence.observed.begin(), evidence.observed.end(),
                                          [&](const auto& o) { return o.first == i; });
        if (relevant[i] && !observed && std::find(keep.begin(), keep.end(), i) == keep.end())
            to_eliminate.push_back(i);
    }

    for (std::size_t var : order_for(to_eliminate, factors)) {
        std::vector<Factor> rest;
        Factor joint;
        bool any = false;
        for (auto& f : factors) {
            if (f.contains(var)) {
                joint = any ? product(joint, f, exec_) : std::move(f);
                any = true;
            } else {
                rest.push_back(std::move(f));
            }
        }
        if (any) rest.push_back(sum_out(joint, var, exec_));
        factors = std::move(rest);
    }

    Factor result;
    for (const auto& f : factors) result = product(result, f, exec_);
    return result;
}

std::vector<std::string> InferenceEngine::elimination_order(const std::vector<std::string>& keep,
                                                            const Evidence& evidence) const {
    const Resolved r = resolve(evidence);
    std::vector<std::size_t> keep_idx;
    for (const auto& k : keep) keep_idx.push_back(require_var(k));
    std::vector<Factor> factors;
    std::vector<std::size_t> elim;
    for (std::size_t i = 0; i < bn_.nodes.size(); ++i) {
        Factor f = factors_[i];
        for (const auto& [v, s] : r.observed) f = restrict(f, v, s);
        factors.push_back(std::move(f));
        const bool observed = std::any_of(r.observed.begin(), r.observed.end(),
                                          [&](const auto& o) { return o.first == i; });
        if (!observed && std::find(keep_idx.begin(), keep_idx.end(), i) == keep_idx.end()) elim.push_back(i);
    }
    std::vector<std::string> names;
    for (std::size_t v : order_for(elim, factors)) names.push_back(bn_.nodes[v].id());
    return names;
}

Distribution InferenceEngine::marginal(std::string_view var, const Evidence& evidence) const {
    const std::size_t v = require_var(var);
    const Resolved r = resolve(evidence);
    Distribution d;
    d.states = bn_.nodes[v].variable.states;

    for (const auto& [ov, os] : r.observed)
        if (ov == v) {
            if (!(eliminate({}, r).values()[0] > 0.0))
                throw ImpossibleEvidenceError("evidence has probability zero");
            d.probs.assign(cards_[v], 0.0);
            d.probs[os] = 1.0;
            return d;
        }

    const Factor f = eliminate({v}, r);
    const double z = f.sum();
    if (!(z > 0.0)) throw ImpossibleEvidenceError("evidence has probability zero");
    for (double p : f.values()) d.probs.push_back(p / z);
    return d;
}

double InferenceEngine::probability(const Evidence& assignment) const {
    return eliminate({}, resolve(assignment)).values()[0];
}

double InferenceEngine::query_probability(const Evidence& target, const Evidence& evidence) const {
    const double pe = probability(evidence);
    if (!(pe > 0.0)) throw ImpossibleEvidenceError("evidence has probability zero");
    Evidence combined = evidence;
    for (const auto& [var, state] : target) {
        auto [it, inserted] = combined.emplace(var, state);
        if (!inserted && it->second != state) {
            resolve(target);
            return 0.0;
        }
    }
    if (combined.size() == evidence.size()) {
        resolve(target);
        return 1.0;
    }
    return probability(combined) / pe;
}

Distribution marginal(const BayesianNetwork& bn, std::string_view var, const Evidence& evidence) {
    return InferenceEngine(bn).marginal(var, evidence);
}

double query_probability(const BayesianNetwork& bn, const Evidence& target, const Evidence& evidence) {
    return InferenceEngine(bn).query_probability(target, evidence);
}

std::vector<RankedDiagnosis> top_k_diagnoses(const BayesianNetwork& bn, const Evidence& evidence, std::size_t k) {
    return InferenceEngine(bn).top_k_diagnoses(evidence, k);
}

JointDistribution enumerate_joint(const BayesianNetwork& bn, const Evidence& evidence) {
    return InferenceEngine(bn).enumerate_joint(evidence);
}

}  // namespace ftbn
