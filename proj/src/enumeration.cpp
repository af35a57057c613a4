// Enumeration kernels: the brute-force joint (test oracle), deterministic
// forward propagation and top-k complete diagnoses. Each has a serial path and
// an OpenMP path that splits the search tree into a fixed list of prefixes, so
// results do not depend on the thread count.

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

#include "ftbn/inference.hpp"

namespace ftbn {

namespace {

// Prefix tasks generated before the parallel loop.
constexpr std::size_t kMinTasks = 64;

std::size_t saturating_mul(std::size_t a, std::size_t b) {
    if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) return std::numeric_limits<std::size_t>::max();
    return a * b;
}

struct Candidate {
    std::vector<std::uint8_t> states;  // diagnosis variables, ordered by id
    double mass = 0.0;
};

// Strict ranking: larger mass first, then lexicographically smaller states.
bool ranks_before(const Candidate& a, const Candidate& b) {
    if (a.mass != b.mass) return a.mass > b.mass;
    return a.states < b.states;
}

struct WorstOnTop {
    bool operator()(const Candidate& a, const Candidate& b) const { return ranks_before(a, b); }
};

using TopHeap = std::priority_queue<Candidate, std::vector<Candidate>, WorstOnTop>;

void offer(TopHeap& heap, std::size_t k, Candidate c) {
    if (heap.size() < k) {
        heap.push(std::move(c));
    } else if (ranks_before(c, heap.top())) {
        heap.pop();
        heap.push(std::move(c));
    }
}

std::vector<Candidate> best_k(std::vector<Candidate> all, std::size_t k) {
    std::sort(all.begin(), all.end(), ranks_before);
    if (all.size() > k) all.resize(k);
    return all;
}

}  // namespace

std::size_t InferenceEngine::enumeration_bound(const std::vector<std::ptrdiff_t>& observed) const {
    std::size_t bound = 1;
    for (std::size_t i = 0; i < bn_.nodes.size(); ++i) {
        if (observed[i] >= 0) continue;
        std::size_t branches = cards_[i];
        if (parents_[i].empty()) {
            branches = static_cast<std::size_t>(
                std::count_if(tables_[i].probs.begin(), tables_[i].probs.end(), [](double p) { return p > 0.0; }));
        } else if (is_deterministic(tables_[i], cards_[i])) {
            branches = 1;
        }
        bound = saturating_mul(bound, std::max<std::size_t>(branches, 1));
    }
    return bound;
}

void InferenceEngine::enumerate_from(std::size_t depth, std::vector<std::size_t>& states, double mass,
                                     const std::vector<std::ptrdiff_t>& observed, Chunk& out) const {
    const std::size_t n = bn_.nodes.size();
    if (depth == n) {
        for (std::size_t s : states) out.states.push_back(static_cast<std::uint8_t>(s));
        out.mass.push_back(mass);
        return;
    }
    const std::size_t card = cards_[depth];
    const std::size_t base = row_of(depth, states) * card;
    for (std::size_t s = 0; s < card; ++s) {
        if (observed[depth] >= 0 && static_cast<std::size_t>(observed[depth]) != s) continue;
        const double p = tables_[depth].probs[base + s];
        if (p == 0.0) continue;
        states[depth] = s;
        enumerate_from(depth + 1, states, mass * p, observed, out);
    }
    states[depth] = 0;
}

InferenceEngine::Chunk InferenceEngine::enumerate_paths(const std::vector<std::ptrdiff_t>& observed,
                                                        std::size_t limit) const {
    if (enumeration_bound(observed) > limit)
        throw StateSpaceError("enumeration would exceed " + std::to_string(limit) + " assignments");
    const std::size_t n = bn_.nodes.size();

    if (exec_ == Execution::Serial) {
        Chunk out;
        std::vector<std::size_t> states(n, 0);
        enumerate_from(0, states, 1.0, observed, out);
        return out;
    }

    struct Task {
        std::vector<std::size_t> states;
        double mass;
    };
    std::vector<Task> tasks{{std::vector<std::size_t>(n, 0), 1.0}};
    std::size_t depth = 0;
    while (depth < n && tasks.size() < kMinTasks) {
        std::vector<Task> next;
        const std::size_t card = cards_[depth];
        for (auto& t : tasks) {
            const std::size_t base = row_of(depth, t.states) * card;
            for (std::size_t s = 0; s < card; ++s) {
                if (observed[depth] >= 0 && static_cast<std::size_t>(observed[depth]) != s) continue;
                const double p = tables_[depth].probs[base + s];
                if (p == 0.0) continue;
                Task child = t;
                child.states[depth] = s;
                child.mass = t.mass * p;
                next.push_back(std::move(child));
            }
        }
        tasks = std::move(next);
        ++depth;
    }

    std::vector<Chunk> chunks(tasks.size());
    const auto count = static_cast<std::ptrdiff_t>(tasks.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        auto states = tasks[static_cast<std::size_t>(i)].states;
        enumerate_from(depth, states, tasks[static_cast<std::size_t>(i)].mass, observed,
                       chunks[static_cast<std::size_t>(i)]);
    }

    Chunk out;
    for (auto& c : chunks) {
        out.states.insert(out.states.end(), c.states.begin(), c.states.end());
        out.mass.insert(out.mass.end(), c.mass.begin(), c.mass.end());
    }
    return out;
}

JointDistribution InferenceEngine::enumerate_joint(const Evidence& evidence, std::size_t limit) const {
    const Resolved r = resolve(evidence);
    std::vector<std::ptrdiff_t> observed(bn_.nodes.size(), -1);
    for (const auto& [v, s] : r.observed) observed[v] = static_cast<std::ptrdiff_t>(s);

    Chunk paths = enumerate_paths(observed, limit);
    JointDistribution out;
    for (const auto& node : bn_.nodes) out.variables.push_back(node.id());
    double total = 0.0;
    for (double m : paths.mass) total += m;
    if (!(total > 0.0)) throw ImpossibleEvidenceError("evidence has probability zero");
    out.evidence_probability = total;
    out.states = std::move(paths.states);
    out.probs.reserve(paths.mass.size());
    for (double m : paths.mass) out.probs.push_back(m / total);
    return out;
}

std::map<std::string, std::size_t> InferenceEngine::propagate(const std::map<std::string, std::size_t>& roots) const {
    if (!deterministic_) throw std::logic_error("propagation needs deterministic non-root nodes");
    for (const auto& [id, s] : roots) {
        const std::size_t v = require_var(id);
        if (!parents_[v].empty()) throw std::invalid_argument("'" + id + "' is not a root");
        if (s >= cards_[v]) throw std::out_of_range("state index out of range for '" + id + "'");
    }
    const std::size_t n = bn_.nodes.size();
    std::vector<std::size_t> states(n, 0);
    std::map<std::string, std::size_t> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (parents_[i].empty()) {
            auto it = roots.find(bn_.nodes[i].id());
            if (it == roots.end()) throw std::invalid_argument("root '" + bn_.nodes[i].id() + "' is unassigned");
            states[i] = it->second;
        } else {
            const std::size_t base = row_of(i, states) * cards_[i];
            std::size_t s = 0;
            while (tables_[i].probs[base + s] != 1.0) ++s;
            states[i] = s;
        }
        out.emplace(bn_.nodes[i].id(), states[i]);
    }
    return out;
}

std::vector<RankedDiagnosis> InferenceEngine::top_k_diagnoses(const Evidence& evidence, std::size_t k,
                                                              std::vector<std::string> over) const {
    if (k == 0) throw std::invalid_argument("k must be at least 1");
    const Resolved r = resolve(evidence);
    const double pe = eliminate({}, r).values()[0];
    if (!(pe > 0.0)) throw ImpossibleEvidenceError("evidence has probability zero");

    if (over.empty()) over = roots_;
    std::sort(over.begin(), over.end());
    over.erase(std::unique(over.begin(), over.end()), over.end());
    std::vector<std::size_t> over_idx;
    for (const auto& id : over) over_idx.push_back(require_var(id));

    std::vector<RankedDiagnosis> out =
        deterministic_ && over == roots_ ? top_k_roots_deterministic(r, k) : top_k_by_enumeration(r, k, over_idx);
    for (auto& d : out) d.posterior = d.joint / pe;
    return out;
}

std::vector<RankedDiagnosis> InferenceEngine::top_k_roots_deterministic(const Resolved& evidence,
                                                                        std::size_t k) const {
    const std::size_t n = bn_.nodes.size();
    std::vector<std::ptrdiff_t> observed(n, -1);
    for (const auto& [v, s] : evidence.observed) observed[v] = static_cast<std::ptrdiff_t>(s);

    // Roots in id order; states tried in descending prior so good candidates come early.
    std::vector<std::size_t> roots;
    for (const auto& id : roots_) roots.push_back(*bn_.index_of(id));
    const std::size_t R = roots.size();
    std::vector<std::vector<std::size_t>> choices(R);
    for (std::size_t i = 0; i < R; ++i) {
        const std::size_t v = roots[i];
        const auto& prior = tables_[v].probs;
        for (std::size_t s = 0; s < cards_[v]; ++s)
            if (prior[s] > 0.0 && (observed[v] < 0 || static_cast<std::size_t>(observed[v]) == s))
                choices[i].push_back(s);
        std::stable_sort(choices[i].begin(), choices[i].end(),
                         [&](std::size_t a, std::size_t b) { return prior[a] > prior[b]; });
    }
    std::vector<double> best_suffix(R + 1, 1.0);
    for (std::size_t i = R; i-- > 0;)
        best_suffix[i] = best_suffix[i + 1] * (choices[i].empty() ? 0.0 : tables_[roots[i]].probs[choices[i][0]]);

    std::vector<std::size_t> non_roots;
    for (std::size_t i = 0; i < n; ++i)
        if (!parents_[i].empty()) non_roots.push_back(i);

    auto leaf = [&](std::vector<std::size_t>& states, std::vector<double>& factors, TopHeap& heap) {
        for (std::size_t v : non_roots) {
            const std::size_t base = row_of(v, states) * cards_[v];
            std::size_t s = 0;
            while (tables_[v].probs[base + s] != 1.0) ++s;
            if (observed[v] >= 0 && static_cast<std::size_t>(observed[v]) != s) return;
            states[v] = s;
        }
        // Multiply in ascending order so assignments using the same multiset of
        // priors (symmetric components) get bitwise-equal masses and tie exactly.
        Candidate c;
        c.states.reserve(R);
        factors.clear();
        for (std::size_t v : roots) {
            c.states.push_back(static_cast<std::uint8_t>(states[v]));
            factors.push_back(tables_[v].probs[states[v]]);
        }
        std::sort(factors.begin(), factors.end());
        c.mass = 1.0;
        for (double f : factors) c.mass *= f;
        offer(heap, k, std::move(c));
    };

    // Prune only when the optimistic bound is clearly below the current k-th
    // best; the slack absorbs rounding differences in the product order.
    auto search = [&](auto&& self, std::size_t i, std::vector<std::size_t>& states, double mass,
                      std::vector<double>& factors, TopHeap& heap) -> void {
        if (heap.size() == k && mass * best_suffix[i] < heap.top().mass * (1.0 - 1e-12)) return;
        if (i == R) {
            leaf(states, factors, heap);
            return;
        }
        const std::size_t v = roots[i];
        for (std::size_t s : choices[i]) {
            states[v] = s;
            self(self, i + 1, states, mass * tables_[v].probs[s], factors, heap);
        }
    };

    struct Task {
        std::vector<std::size_t> states;
        double mass;
    };
    std::vector<Task> tasks{{std::vector<std::size_t>(n, 0), 1.0}};
    std::size_t depth = 0;
    if (exec_ == Execution::Parallel) {
        while (depth < R && tasks.size() < kMinTasks) {
            std::vector<Task> next;
            const std::size_t v = roots[depth];
            for (const auto& t : tasks)
                for (std::size_t s : choices[depth]) {
                    Task child = t;
                    child.states[v] = s;
                    child.mass = t.mass * tables_[v].probs[s];
                    next.push_back(std::move(child));
                }
            tasks = std::move(next);
            ++depth;
        }
    }

    std::vector<std::vector<Candidate>> found(tasks.size());
    const auto count = static_cast<std::ptrdiff_t>(tasks.size());
#pragma omp parallel for schedule(dynamic) if (exec_ == Execution::Parallel)
    for (std::ptrdiff_t t = 0; t < count; ++t) {
        TopHeap heap;
        auto states = tasks[static_cast<std::size_t>(t)].states;
        std::vector<double> factors;
        search(search, depth, states, tasks[static_cast<std::size_t>(t)].mass, factors, heap);
        auto& dst = found[static_cast<std::size_t>(t)];
        while (!heap.empty()) {
            dst.push_back(heap.top());
            heap.pop();
        }
    }

    std::vector<Candidate> all;
    for (auto& f : found) all.insert(all.end(), std::make_move_iterator(f.begin()), std::make_move_iterator(f.end()));

    std::vector<RankedDiagnosis> out;
    for (const auto& c : best_k(std::move(all), k)) {
        RankedDiagnosis d;
        for (std::size_t i = 0; i < R; ++i) {
            const std::size_t v = roots[i];
            d.assignment.push_back({bn_.nodes[v].id(), bn_.nodes[v].variable.states[c.states[i]], c.states[i]});
        }
        d.joint = c.mass;
        out.push_back(std::move(d));
    }
    return out;
}

std::vector<RankedDiagnosis> InferenceEngine::top_k_by_enumeration(const Resolved& evidence, std::size_t k,
                                                                   const std::vector<std::size_t>& over) const {
    const std::size_t n = bn_.nodes.size();
    std::vector<std::ptrdiff_t> observed(n, -1);
    for (const auto& [v, s] : evidence.observed) observed[v] = static_cast<std::ptrdiff_t>(s);

    const Chunk paths = enumerate_paths(observed, kDefaultEnumerationLimit);
    std::map<std::vector<std::uint8_t>, double> mass;
    std::vector<std::uint8_t> key(over.size());
    for (std::size_t p = 0; p < paths.mass.size(); ++p) {
        for (std::size_t i = 0; i < over.size(); ++i) key[i] = paths.states[p * n + over[i]];
        mass[key] += paths.mass[p];
    }
    std::vector<Candidate> all;
    for (auto& [states, m] : mass) all.push_back({states, m});

    std::vector<RankedDiagnosis> out;
    for (const auto& c : best_k(std::move(all), k)) {
        RankedDiagnosis d;
        for (std::size_t i = 0; i < over.size(); ++i) {
            const std::size_t v = over[i];
            d.assignment.push_back({bn_.nodes[v].id(), bn_.nodes[v].variable.states[c.states[i]], c.states[i]});
        }
        d.joint = c.mass;
        out.push_back(std::move(d));
    }
    return out;
}

}  // namespace ftbn
