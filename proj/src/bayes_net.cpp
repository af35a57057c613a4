#include "ftbn/bayes_net.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <set>
#include <unordered_map>

namespace ftbn {

std::optional<std::size_t> Variable::state_index(std::string_view name) const {
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i] == name) return i;
    return std::nullopt;
}

std::string_view cpt_type_name(const CptSpec& cpt) {
    struct Namer {
        std::string_view operator()(const TableCpt&) const { return "table"; }
        std::string_view operator()(const BoolGateCpt& g) const { return to_string(g.kind); }
        std::string_view operator()(const NoisyOrCpt&) const { return "noisy_or"; }
        std::string_view operator()(const NoisyAndCpt&) const { return "noisy_and"; }
        std::string_view operator()(const NoisyMaxCpt&) const { return "noisy_max"; }
    };
    return std::visit(Namer{}, cpt);
}

const Node* BayesianNetwork::find(std::string_view id) const {
    auto idx = index_of(id);
    return idx ? &nodes[*idx] : nullptr;
}

std::optional<std::size_t> BayesianNetwork::index_of(std::string_view id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].id() == id) return i;
    return std::nullopt;
}

namespace {

[[noreturn]] void arity_error(const Node& node, const std::string& msg) {
    throw ValidationError({{"arity", node.id(), msg}});
}

void require_binary_child(const Node& node) {
    if (node.variable.cardinality() != 2)
        arity_error(node, std::string(cpt_type_name(node.cpt)) + " CPT needs a binary child");
}

void require_binary_parents(const Node& node, std::span<const std::size_t> cards) {
    for (std::size_t i = 0; i < cards.size(); ++i)
        if (cards[i] != 2)
            arity_error(node, std::string(cpt_type_name(node.cpt)) + " CPT needs binary parents ('" +
                                  node.parents[i] + "' has " + std::to_string(cards[i]) + " states)");
}

void require_param_count(const Node& node, std::size_t got, std::size_t parents) {
    if (got != parents)
        arity_error(node, "expected " + std::to_string(parents) + " parameters, got " + std::to_string(got));
}

std::size_t row_count(std::span<const std::size_t> cards) {
    std::size_t rows = 1;
    for (auto c : cards) rows *= c;
    return rows;
}

// Calls fn(row, states) for each parent configuration in table order.
template <class Fn>
void for_each_row(std::span<const std::size_t> cards, Fn&& fn) {
    std::vector<std::size_t> states(cards.size(), 0);
    const std::size_t rows = row_count(cards);
    for (std::size_t row = 0; row < rows; ++row) {
        fn(row, states);
        for (std::size_t i = cards.size(); i-- > 0;) {
            if (++states[i] < cards[i]) break;
            states[i] = 0;
        }
    }
}

TableCpt binary_table(std::span<const std::size_t> cards,
                      const std::function<double(const std::vector<std::size_t>&)>& p_true) {
    TableCpt t;
    t.probs.resize(2 * row_count(cards));
    for_each_row(cards, [&](std::size_t row, const std::vector<std::size_t>& states) {
        const double p = p_true(states);
        t.probs[2 * row] = 1.0 - p;
        t.probs[2 * row + 1] = p;
    });
    return t;
}

}  // namespace

TableCpt expand_cpt(const Node& node, std::span<const std::size_t> parent_cards) {
    if (parent_cards.size() != node.parents.size())
        arity_error(node, "parent cardinality list does not match parent count");
    const std::size_t n = parent_cards.size();

    if (const auto* t = std::get_if<TableCpt>(&node.cpt)) {
        const std::size_t want = row_count(parent_cards) * node.variable.cardinality();
        if (t->probs.size() != want)
            arity_error(node, "table has " + std::to_string(t->probs.size()) + " entries, expected " +
                                  std::to_string(want));
        return *t;
    }
    require_binary_child(node);

    if (const auto* g = std::get_if<BoolGateCpt>(&node.cpt)) {
        require_binary_parents(node, parent_cards);
        if (g->kind == GateKind::KofN && (g->k < 1 || g->k > static_cast<int>(n)))
            arity_error(node, "k-of-n gate needs 1 <= k <= n");
        return binary_table(parent_cards, [&](const std::vector<std::size_t>& s) {
            std::vector<bool> in(s.size());
            for (std::size_t i = 0; i < s.size(); ++i) in[i] = s[i] == 1;
            return gate_function(g->kind, g->k, in) ? 1.0 : 0.0;
        });
    }
    if (const auto* o = std::get_if<NoisyOrCpt>(&node.cpt)) {
        require_binary_parents(node, parent_cards);
        require_param_count(node, o->c.size(), n);
        return binary_table(parent_cards, [&](const std::vector<std::size_t>& s) {
            double off = 1.0 - o->leak;
            for (std::size_t i = 0; i < n; ++i)
                if (s[i] == 1) off *= 1.0 - o->c[i];
            return 1.0 - off;
        });
    }
    if (const auto* a = std::get_if<NoisyAndCpt>(&node.cpt)) {
        require_binary_parents(node, parent_cards);
        require_param_count(node, a->c.size(), n);
        return binary_table(parent_cards, [&](const std::vector<std::size_t>& s) {
            double on = 1.0;
            for (std::size_t i = 0; i < n; ++i)
                if (s[i] == 0) on *= a->c[i];
            return on;
        });
    }
    const auto& m = std::get<NoisyMaxCpt>(node.cpt);
    require_param_count(node, m.c.size(), n);
    for (std::size_t i = 0; i < n; ++i)
        if (m.c[i].size() + 1 != parent_cards[i])
            arity_error(node, "noisy-max parameters for '" + node.parents[i] + "' need " +
                                  std::to_string(parent_cards[i] - 1) + " entries");
    return binary_table(parent_cards, [&](const std::vector<std::size_t>& s) {
        double off = 1.0 - m.leak;
        for (std::size_t i = 0; i < n; ++i)
            if (s[i] > 0) off *= 1.0 - m.c[i][s[i] - 1];
        return 1.0 - off;
    });
}

TableCpt expand_cpt(const BayesianNetwork& bn, const Node& node) {
    std::vector<std::size_t> cards;
    for (const auto& p : node.parents) {
        const Node* parent = bn.find(p);
        if (!parent) throw UnknownNameError("unknown parent '" + p + "' of '" + node.id() + "'");
        cards.push_back(parent->variable.cardinality());
    }
    return expand_cpt(node, cards);
}

bool is_deterministic(const TableCpt& table, std::size_t child_cards) {
    for (std::size_t row = 0; row * child_cards < table.probs.size(); ++row) {
        int ones = 0;
        for (std::size_t s = 0; s < child_cards; ++s) {
            const double p = table.probs[row * child_cards + s];
            if (p == 1.0)
                ++ones;
            else if (p != 0.0)
                return false;
        }
        if (ones != 1) return false;
    }
    return true;
}

namespace {

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

void check_parameters(const Node& node, std::vector<Diagnostic>& out) {
    auto bad = [&](const std::string& msg) { out.push_back({"parameter-range", node.id(), msg}); };
    if (const auto* o = std::get_if<NoisyOrCpt>(&node.cpt)) {
        if (!in_unit(o->leak)) bad("leak outside [0, 1]");
        for (double c : o->c)
            if (!in_unit(c)) bad("noisy-or parameter outside [0, 1]");
    } else if (const auto* a = std::get_if<NoisyAndCpt>(&node.cpt)) {
        for (double c : a->c)
            if (!in_unit(c)) bad("noisy-and parameter outside [0, 1]");
    } else if (const auto* m = std::get_if<NoisyMaxCpt>(&node.cpt)) {
        if (!in_unit(m->leak)) bad("leak outside [0, 1]");
        for (const auto& row : m->c)
            for (double c : row)
                if (!in_unit(c)) bad("noisy-max parameter outside [0, 1]");
    }
}

}  // namespace

std::vector<Diagnostic> validate_bn(const BayesianNetwork& bn) {
    std::vector<Diagnostic> out;
    std::unordered_map<std::string, const Node*> by_id;
    for (const auto& node : bn.nodes) {
        if (!by_id.emplace(node.id(), &node).second)
            out.push_back({"duplicate-definition", node.id(), "variable defined more than once"});
        if (node.variable.cardinality() < 2)
            out.push_back({"states", node.id(), "variable needs at least two states"});
        std::set<std::string> names(node.variable.states.begin(), node.variable.states.end());
        if (names.size() != node.variable.states.size())
            out.push_back({"states", node.id(), "state names are not unique"});
    }

    bool resolved = true;
    for (const auto& node : bn.nodes) {
        std::set<std::string> seen;
        for (const auto& p : node.parents) {
            if (!by_id.count(p)) {
                out.push_back({"unresolved-parent", node.id(), "parent '" + p + "' is not defined"});
                resolved = false;
            }
            if (!seen.insert(p).second)
                out.push_back({"duplicate-parent", node.id(), "parent '" + p + "' listed more than once"});
        }
    }

    if (resolved) {
        enum class Mark { Fresh, Active, Done };
        std::unordered_map<std::string, Mark> mark;
        std::function<void(const Node&)> visit = [&](const Node& n) {
            mark[n.id()] = Mark::Active;
            for (const auto& p : n.parents) {
                const Mark m = mark[p];
                if (m == Mark::Active)
                    out.push_back({"cycle", p, "variable is its own ancestor via '" + n.id() + "'"});
                else if (m == Mark::Fresh)
                    visit(*by_id.at(p));
            }
            mark[n.id()] = Mark::Done;
        };
        for (const auto& node : bn.nodes)
            if (mark[node.id()] == Mark::Fresh) visit(node);

        for (const auto& node : bn.nodes) {
            check_parameters(node, out);
            try {
                const TableCpt t = expand_cpt(bn, node);
                const std::size_t card = node.variable.cardinality();
                if (card == 0) continue;
                for (std::size_t row = 0; row * card < t.probs.size(); ++row) {
                    double sum = 0.0;
                    bool negative = false;
                    for (std::size_t s = 0; s < card; ++s) {
                        const double p = t.probs[row * card + s];
                        negative |= !(p >= 0.0);
                        sum += p;
                    }
                    if (negative || std::abs(sum - 1.0) > 1e-12) {
                        out.push_back({"normalization", node.id(),
                                       "CPT row " + std::to_string(row) + " sums to " + std::to_string(sum) +
                                           (negative ? " with a negative entry" : "")});
                        break;
                    }
                }
            } catch (const ValidationError& e) {
                out.insert(out.end(), e.diagnostics().begin(), e.diagnostics().end());
            }
        }
    }
    return out;
}

std::vector<std::size_t> topological_order(const BayesianNetwork& bn) {
    const std::size_t n = bn.nodes.size();
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index.emplace(bn.nodes[i].id(), i);

    std::vector<std::size_t> pending(n, 0);
    std::vector<std::vector<std::size_t>> children(n);
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& p : bn.nodes[i].parents) {
            auto it = index.find(p);
            if (it == index.end())
                throw ValidationError({{"unresolved-parent", bn.nodes[i].id(), "parent '" + p + "' is not defined"}});
            children[it->second].push_back(i);
            ++pending[i];
        }

    auto by_id = [&](std::size_t a, std::size_t b) { return bn.nodes[a].id() > bn.nodes[b].id(); };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(by_id)> ready(by_id);
    for (std::size_t i = 0; i < n; ++i)
        if (pending[i] == 0) ready.push(i);

    std::vector<std::size_t> order;
    order.reserve(n);
    while (!ready.empty()) {
        const std::size_t i = ready.top();
        ready.pop();
        order.push_back(i);
        for (std::size_t c : children[i])
            if (--pending[c] == 0) ready.push(c);
    }
    if (order.size() != n) {
        for (std::size_t i = 0; i < n; ++i)
            if (pending[i] > 0)
                throw ValidationError({{"cycle", bn.nodes[i].id(), "variable lies on a directed cycle"}});
    }
    return order;
}

BayesianNetwork sorted_topologically(const BayesianNetwork& bn) {
    BayesianNetwork out;
    for (std::size_t i : topological_order(bn)) out.nodes.push_back(bn.nodes[i]);
    return out;
}

BayesianNetwork replace_nodes(const BayesianNetwork& bn, std::vector<Node> replacements) {
    BayesianNetwork out = bn;
    for (auto& r : replacements) {
        auto idx = out.index_of(r.id());
        if (!idx) throw UnknownNameError("unknown variable '" + r.id() + "'");
        out.nodes[*idx] = std::move(r);
    }
    for (const auto& node : out.nodes)
        for (const auto& p : node.parents)
            if (!out.find(p)) throw UnknownNameError("unknown parent '" + p + "' of '" + node.id() + "'");
    if (auto diagnostics = validate_bn(out); !diagnostics.empty()) throw ValidationError(std::move(diagnostics));
    return out;
}

BayesianNetwork set_dependency(const BayesianNetwork& bn, std::string_view child,
                               std::vector<std::string> new_parents, CptSpec cpt) {
    const Node* node = bn.find(child);
    if (!node) throw UnknownNameError("unknown variable '" + std::string(child) + "'");
    return replace_nodes(bn, {Node{node->variable, std::move(new_parents), std::move(cpt)}});
}

}  // namespace ftbn
