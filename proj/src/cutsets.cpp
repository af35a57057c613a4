#include "ftbn/cutsets.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>

namespace ftbn {

namespace {

using Set = std::vector<std::uint32_t>;  // sorted primary indices
using Family = std::vector<Set>;

bool by_order_then_lex(const Set& a, const Set& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

// Drops duplicates and every set that strictly contains another.
Family minimize(Family f) {
    std::sort(f.begin(), f.end(), by_order_then_lex);
    f.erase(std::unique(f.begin(), f.end()), f.end());
    Family kept;
    for (auto& s : f) {
        const bool dominated = std::any_of(kept.begin(), kept.end(), [&](const Set& k) {
            return std::includes(s.begin(), s.end(), k.begin(), k.end());
        });
        if (!dominated) kept.push_back(std::move(s));
    }
    return kept;
}

Family conjunction(const Family& a, const Family& b) {
    Family out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a)
        for (const auto& y : b) {
            Set u;
            std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(u));
            out.push_back(std::move(u));
        }
    return minimize(std::move(out));
}

Family all_of(const std::vector<const Family*>& children) {
    Family acc{Set{}};
    for (const Family* c : children) acc = conjunction(acc, *c);
    return acc;
}

Family any_of(const std::vector<const Family*>& children) {
    Family out;
    for (const Family* c : children) out.insert(out.end(), c->begin(), c->end());
    return minimize(std::move(out));
}

Family at_least(int k, const std::vector<const Family*>& children) {
    const std::size_t n = children.size();
    Family out;
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + k, true);
    do {
        std::vector<const Family*> chosen;
        for (std::size_t i = 0; i < n; ++i)
            if (pick[i]) chosen.push_back(children[i]);
        Family f = all_of(chosen);
        out.insert(out.end(), f.begin(), f.end());
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return minimize(std::move(out));
}

}  // namespace

std::vector<CutSet> minimal_cut_sets(const FaultTree& ft) {
    if (auto diagnostics = validate(ft); !diagnostics.empty()) throw ValidationError(std::move(diagnostics));

    std::vector<std::string> names;
    for (const auto& p : ft.primaries) names.push_back(p.id);
    std::sort(names.begin(), names.end());

    std::unordered_map<std::string, Family> family;
    for (std::uint32_t i = 0; i < names.size(); ++i) family[names[i]] = Family{Set{i}};
    for (const Gate* g : gates_bottom_up(ft)) {
        std::vector<const Family*> children;
        for (const auto& in : g->inputs) children.push_back(&family.at(in));
        switch (g->kind) {
            case GateKind::And: family[g->output] = all_of(children); break;
            case GateKind::Or: family[g->output] = any_of(children); break;
            case GateKind::KofN: family[g->output] = at_least(g->k, children); break;
        }
    }

    std::vector<CutSet> out;
    for (const auto& s : family.at(ft.top)) {
        CutSet cs;
        for (auto i : s) cs.members.push_back(names[i]);
        out.push_back(std::move(cs));
    }
    return out;
}

double unreliability(const CutSet& cs, const std::map<std::string, double>& priors) {
    double p = 1.0;
    for (const auto& m : cs.members) {
        auto it = priors.find(m);
        if (it == priors.end()) throw UnknownNameError("no prior for primary event '" + m + "'");
        p *= it->second;
    }
    return p;
}

std::vector<ScoredCutSet> score_cut_sets(const FaultTree& ft, const InferenceEngine& engine,
                                         const std::map<std::string, double>& priors) {
    if (!engine.deterministic_non_roots())
        throw Error("minimal cut sets are undefined for networks with probabilistic gates; "
                    "rank complete diagnoses instead");
    const Node* top = engine.network().find(ft.top);
    if (!top) throw UnknownNameError("network has no node for top event '" + ft.top + "'");
    const std::string& faulty = top->variable.states.at(1);
    const Evidence te_failed{{ft.top, faulty}};
    const double p_top = engine.marginal(ft.top).at(faulty);
    if (!(p_top > 0.0)) throw ImpossibleEvidenceError("top event has probability zero");

    std::vector<ScoredCutSet> out;
    for (auto& cs : minimal_cut_sets(ft)) {
        ScoredCutSet s;
        s.unreliability = unreliability(cs, priors);
        s.posterior_unreliability = s.unreliability / p_top;
        Evidence diagnosis;
        for (const auto& p : ft.primaries) {
            const Node* node = engine.network().find(p.id);
            if (!node) throw UnknownNameError("network has no node for primary event '" + p.id + "'");
            const bool member = std::binary_search(cs.members.begin(), cs.members.end(), p.id);
            diagnosis[p.id] = node->variable.states.at(member ? 1 : 0);
        }
        s.diagnosis_posterior = engine.query_probability(diagnosis, te_failed);
        s.cutset = std::move(cs);
        out.push_back(std::move(s));
    }
    std::stable_sort(out.begin(), out.end(), [](const ScoredCutSet& a, const ScoredCutSet& b) {
        if (a.unreliability != b.unreliability) return a.unreliability > b.unreliability;
        return a.cutset.members < b.cutset.members;
    });
    return out;
}

std::vector<ScoredCutSet> score_cut_sets(const FaultTree& ft, const BayesianNetwork& bn,
                                         const std::map<std::string, double>& priors) {
    return score_cut_sets(ft, InferenceEngine(bn), priors);
}

}  // namespace ftbn
