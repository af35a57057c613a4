#include "ftbn/fault_tree.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <set>
#include <unordered_map>

namespace ftbn {

std::string to_string(const Diagnostic& d) {
    return d.code + " [" + d.subject + "]: " + d.message;
}

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : Error(line == 0 ? what
                      : std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

std::string join_diagnostics(const std::vector<Diagnostic>& ds) {
    std::string s;
    for (const auto& d : ds) {
        if (!s.empty()) s += "; ";
        s += to_string(d);
    }
    return s;
}

}  // namespace

ValidationError::ValidationError(std::vector<Diagnostic> diagnostics)
    : Error(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

std::string_view to_string(GateKind kind) {
    switch (kind) {
        case GateKind::And: return "and";
        case GateKind::Or: return "or";
        case GateKind::KofN: return "kofn";
    }
    return "?";
}

const PrimaryEvent* FaultTree::find_primary(std::string_view id) const {
    auto it = std::find_if(primaries.begin(), primaries.end(),
                           [&](const PrimaryEvent& p) { return p.id == id; });
    return it == primaries.end() ? nullptr : &*it;
}

const Gate* FaultTree::find_gate(std::string_view output) const {
    auto it = std::find_if(gates.begin(), gates.end(),
                           [&](const Gate& g) { return g.output == output; });
    return it == gates.end() ? nullptr : &*it;
}

bool gate_function(GateKind kind, int k, const std::vector<bool>& inputs) {
    const auto up = static_cast<int>(std::count(inputs.begin(), inputs.end(), true));
    switch (kind) {
        case GateKind::And: return up == static_cast<int>(inputs.size());
        case GateKind::Or: return up > 0;
        case GateKind::KofN: return up >= k;
    }
    return false;
}

std::vector<Diagnostic> validate(const FaultTree& ft) {
    std::vector<Diagnostic> out;
    auto report = [&](std::string code, const std::string& subject, std::string msg) {
        out.push_back({std::move(code), subject, std::move(msg)});
    };

    std::unordered_map<std::string, int> primary_count;
    for (const auto& p : ft.primaries) {
        if (++primary_count[p.id] == 2)
            report("duplicate-definition", p.id, "primary event defined more than once");
        try {
            check_failure_model(p.failure);
        } catch (const std::invalid_argument& e) {
            report("failure-model", p.id, e.what());
        }
    }

    std::unordered_map<std::string, const Gate*> by_output;
    for (const auto& g : ft.gates) {
        if (primary_count.count(g.output))
            report("duplicate-definition", g.output, "event is both a primary event and a gate output");
        else if (!by_output.emplace(g.output, &g).second)
            report("duplicate-definition", g.output, "event is the output of more than one gate");

        const auto n_inputs = static_cast<int>(g.inputs.size());
        if (g.kind == GateKind::KofN) {
            if (g.n != n_inputs)
                report("arity", g.output,
                       std::to_string(g.k) + "-of-" + std::to_string(g.n) + " gate has " +
                           std::to_string(n_inputs) + " inputs");
            if (g.k < 1 || g.k > g.n)
                report("arity", g.output, "k must satisfy 1 <= k <= n");
        }
        if (n_inputs < 2) report("arity", g.output, "gate needs at least two inputs");

        std::set<std::string> seen;
        for (const auto& in : g.inputs)
            if (!seen.insert(in).second)
                report("duplicate-input", g.output, "input '" + in + "' listed more than once");
    }

    auto defined = [&](const std::string& id) {
        return primary_count.count(id) > 0 || by_output.count(id) > 0;
    };
    std::set<std::string> referenced;
    for (const auto& g : ft.gates)
        for (const auto& in : g.inputs) {
            referenced.insert(in);
            if (!defined(in))
                report("undefined-reference", g.output, "input '" + in + "' is not defined");
        }

    if (ft.top.empty())
        report("missing-top", "", "no top event declared");
    else if (!defined(ft.top))
        report("undefined-reference", ft.top, "top event is not defined");

    // Cycle detection over the gate graph.
    enum class Mark { Fresh, Active, Done };
    std::unordered_map<std::string, Mark> mark;
    bool has_cycle = false;
    std::function<void(const Gate&)> visit = [&](const Gate& g) {
        mark[g.output] = Mark::Active;
        for (const auto& in : g.inputs) {
            auto it = by_output.find(in);
            if (it == by_output.end()) continue;
            const Mark m = mark[in];
            if (m == Mark::Active) {
                report("cycle", in, "event depends on itself through gate '" + g.output + "'");
                has_cycle = true;
            } else if (m == Mark::Fresh) {
                visit(*it->second);
            }
        }
        mark[g.output] = Mark::Done;
    };
    for (const auto& g : ft.gates)
        if (mark[g.output] == Mark::Fresh) visit(g);

    if (!has_cycle && defined(ft.top)) {
        std::set<std::string> reachable;
        std::vector<std::string> stack{ft.top};
        while (!stack.empty()) {
            auto id = stack.back();
            stack.pop_back();
            if (!reachable.insert(id).second) continue;
            if (auto it = by_output.find(id); it != by_output.end())
                for (const auto& in : it->second->inputs) stack.push_back(in);
        }
        for (const auto& g : ft.gates)
            if (!reachable.count(g.output))
                report("unreachable", g.output, "gate output does not lead to the top event");
        for (const auto& p : ft.primaries)
            if (!reachable.count(p.id))
                report("unused-primary", p.id, "primary event is not referenced by any gate on the tree");
    }
    return out;
}

std::vector<const Gate*> gates_bottom_up(const FaultTree& ft) {
    std::unordered_map<std::string, const Gate*> by_output;
    for (const auto& g : ft.gates) by_output.emplace(g.output, &g);

    std::vector<const Gate*> order;
    std::set<std::string> done;
    std::function<void(const Gate&)> visit = [&](const Gate& g) {
        if (!done.insert(g.output).second) return;
        for (const auto& in : g.inputs)
            if (auto it = by_output.find(in); it != by_output.end()) visit(*it->second);
        order.push_back(&g);
    };
    for (const auto& g : ft.gates) visit(g);
    return order;
}

namespace {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string default_class(const std::string& id) {
    return id.substr(0, id.find('_'));
}

}  // namespace

std::string serialize_fault_tree(const FaultTree& ft) {
    std::string s;
    for (const auto& p : ft.primaries) {
        s += "primary " + p.id;
        if (const auto* e = std::get_if<Exponential>(&p.failure))
            s += " rate=" + format_double(e->rate);
        else
            s += " prob=" + format_double(std::get<Fixed>(p.failure).p);
        if (p.component_class != default_class(p.id)) s += " class=" + p.component_class;
        s += ";\n";
    }
    for (const auto& g : ft.gates) {
        s += "event " + g.output + " = ";
        if (g.kind == GateKind::KofN)
            s += std::to_string(g.k) + " of " + std::to_string(g.n);
        else
            s += to_string(g.kind);
        s += "(";
        for (std::size_t i = 0; i < g.inputs.size(); ++i) {
            if (i) s += ", ";
            s += g.inputs[i];
        }
        s += ");\n";
    }
    s += "top " + ft.top + ";\n";
    return s;
}

namespace {

struct ClassSpec {
    const char* name;
    double rate;
    double rounded;
};

// Failure rates (f/h) and the probabilities printed for them at 4e5 h.
constexpr ClassSpec kPlcClasses[] = {
    {"IObus", 2.0e-9, 0.00080}, {"Tribus", 2.0e-9, 0.00080}, {"Voter", 6.6e-8, 0.02605},
    {"DO", 2.45e-7, 0.09335},   {"DI", 2.8e-7, 0.10595},     {"PS", 3.37e-7, 0.12611},
    {"CPU", 4.82e-7, 0.17535},
};

double plc_rate(const std::string& cls) {
    for (const auto& c : kPlcClasses)
        if (cls == c.name) return c.rate;
    return 0.0;
}

}  // namespace

FaultTree plc_case_study() {
    FaultTree ft;
    auto primary = [&](std::string id, std::string cls) {
        const double rate = plc_rate(cls);
        ft.primaries.push_back({std::move(id), std::move(cls), Exponential{rate}});
    };
    auto gate = [&](std::string out, GateKind kind, std::vector<std::string> in, int k = 0) {
        const int n = kind == GateKind::KofN ? static_cast<int>(in.size()) : 0;
        ft.gates.push_back({kind, k, n, std::move(in), std::move(out)});
    };

    const std::string channels = "ABC";
    primary("PS1", "PS");
    primary("PS2", "PS");
    primary("Voter", "Voter");
    for (char x : channels)
        for (const char* cls : {"CPU", "DI", "DO", "IObus", "Tribus"})
            primary(std::string(cls) + "_" + x, cls);

    gate("TE", GateKind::Or, {"PSS", "Voter", "CH"});
    gate("PSS", GateKind::And, {"PS1", "PS2"});
    gate("CH", GateKind::KofN, {"ChA", "ChB", "ChC"}, 2);
    for (char x : channels) {
        const std::string X(1, x);
        gate("Ch" + X, GateKind::Or, {"CPU_" + X, "DO_" + X, "IObus_" + X, "In_" + X});
        std::vector<std::string> inputs;
        for (char y : channels) inputs.push_back("Inp_" + X + "_" + std::string(1, y));
        gate("In_" + X, GateKind::KofN, inputs, 2);
        for (char y : channels) {
            const std::string Y(1, y);
            if (y == x)
                gate("Inp_" + X + "_" + Y, GateKind::Or, {"DI_" + X, "IObus_" + X});
            else
                gate("Inp_" + X + "_" + Y, GateKind::Or, {"DI_" + Y, "IObus_" + Y, "Tribus_" + X});
        }
    }
    ft.top = "TE";
    return ft;
}

const std::map<std::string, double>& plc_rounded_probabilities() {
    static const std::map<std::string, double> table = [] {
        std::map<std::string, double> m;
        for (const auto& c : kPlcClasses) m.emplace(c.name, c.rounded);
        return m;
    }();
    return table;
}

FaultTree plc_case_study_rounded_priors() {
    FaultTree ft = plc_case_study();
    for (auto& p : ft.primaries) p.failure = Fixed{plc_rounded_probabilities().at(p.component_class)};
    return ft;
}

}  // namespace ftbn
