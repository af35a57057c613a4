#include "ftbn/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>

#include "ftbn/compiler.hpp"
#include "ftbn/cutsets.hpp"
#include "ftbn/inference.hpp"

namespace ftbn::cli {

namespace {

using ojson = nlohmann::ordered_json;

struct RunConfig {
    std::string command;
    std::string path;
    std::optional<double> mission_time;
    std::string evidence;
    std::vector<std::string> targets;
    std::size_t top_k = 10;
    std::string format = "table";
    std::string out_path;
};

class UsageError : public Error {
public:
    using Error::Error;
};

/// A loaded model: a fault tree compiled at the mission time, or a BN document.
struct Model {
    std::optional<FaultTree> tree;
    std::map<std::string, double> priors;
    BayesianNetwork bn;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("cannot read '" + path + "'");
    return ss.str();
}

bool looks_like_json(const std::string& text) {
    auto it = std::find_if(text.begin(), text.end(), [](char c) { return !std::isspace(static_cast<unsigned char>(c)); });
    return it != text.end() && *it == '{';
}

std::string fixed5(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5f", v);
    return buf;
}

std::string format_hours(double h) {
    std::ostringstream ss;
    ss << h;
    return ss.str();
}

/// Maps true/false/1/0 onto the states of binary variables that lack those names.
Evidence normalize_evidence(const BayesianNetwork& bn, const Evidence& ev) {
    Evidence out;
    for (const auto& [var, state] : ev) {
        const Node* node = bn.find(var);
        if (!node) throw UnknownNameError("unknown variable '" + var + "'");
        std::string s = state;
        if (!node->variable.state_index(s) && node->variable.cardinality() == 2) {
            if (s == "true" || s == "1") s = node->variable.states[1];
            if (s == "false" || s == "0") s = node->variable.states[0];
        }
        if (!node->variable.state_index(s)) throw UnknownNameError("variable '" + var + "' has no state '" + state + "'");
        out.emplace(var, s);
    }
    return out;
}

void require_valid(const std::vector<Diagnostic>& diagnostics) {
    if (!diagnostics.empty()) throw ValidationError(diagnostics);
}

Model load_model(const RunConfig& cfg, bool needs_compiled) {
    const std::string text = read_file(cfg.path);
    Model m;
    if (looks_like_json(text)) {
        m.bn = bn_from_json(text);
        require_valid(validate_bn(m.bn));
        m.bn = sorted_topologically(m.bn);
        return m;
    }
    FaultTree ft = parse_fault_tree_syntax(text).tree;
    require_valid(validate(ft));
    if (needs_compiled) {
        if (!cfg.mission_time) throw UsageError("--mission-time is required for fault-tree input");
        m.priors = probability_table(ft.primaries, MissionTime(*cfg.mission_time));
        m.bn = compile(ft, m.priors).bn;
    }
    m.tree = std::move(ft);
    return m;
}

double p_abnormal(const Distribution& d) {
    double s = 0.0;
    for (std::size_t i = 1; i < d.probs.size(); ++i) s += d.probs[i];
    return s;
}

std::vector<std::string> default_analyze_targets(const Model& m) {
    if (m.tree) return {m.tree->top};
    std::set<std::string> has_child;
    for (const auto& n : m.bn.nodes)
        for (const auto& p : n.parents) has_child.insert(p);
    std::vector<std::string> sinks;
    for (const auto& n : m.bn.nodes)
        if (!has_child.count(n.id())) sinks.push_back(n.id());
    std::sort(sinks.begin(), sinks.end());
    return sinks;
}

std::string class_of(const Model& m, const std::string& id) {
    if (!m.tree) return "";
    const PrimaryEvent* p = m.tree->find_primary(id);
    return p ? p->component_class : "";
}

std::string label(const Variable& v, std::size_t state) {
    return v.cardinality() == 2 ? v.id : v.id + "=" + v.states[state];
}

std::string diagnosis_label(const RankedDiagnosis& d) {
    std::string s = "{";
    bool first = true;
    for (const auto& a : d.abnormal()) {
        if (!first) s += ", ";
        first = false;
        s += a.state == "faulty" ? a.variable : a.variable + "=" + a.state;
    }
    return s + "}";
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
    return s;
}

void print_marginals(const RunConfig& cfg, const Model& m, const std::vector<std::string>& targets,
                     const std::vector<Distribution>& dists, const Evidence& ev, std::ostream& out) {
    if (cfg.format == "json") {
        ojson doc;
        if (cfg.mission_time) doc["mission_time"] = *cfg.mission_time;
        ojson jev = ojson::object();
        for (const auto& [k, v] : ev) jev[k] = v;
        doc["evidence"] = jev;
        ojson res = ojson::object();
        for (std::size_t i = 0; i < targets.size(); ++i) {
            ojson d = ojson::object();
            for (std::size_t s = 0; s < dists[i].states.size(); ++s) d[dists[i].states[s]] = dists[i].probs[s];
            res[targets[i]] = d;
        }
        doc["marginals"] = res;
        out << doc.dump(2) << "\n";
        return;
    }
    if (cfg.format == "csv") {
        out << "event,class,state,probability\n";
        for (std::size_t i = 0; i < targets.size(); ++i)
            for (std::size_t s = 0; s < dists[i].states.size(); ++s) {
                std::ostringstream v;
                v << std::setprecision(17) << dists[i].probs[s];
                out << targets[i] << "," << class_of(m, targets[i]) << "," << dists[i].states[s] << "," << v.str()
                    << "\n";
            }
        return;
    }
    if (cfg.mission_time) out << "mission time: " << format_hours(*cfg.mission_time) << " h\n";
    if (!ev.empty()) {
        std::vector<std::string> items;
        for (const auto& [k, v] : ev) items.push_back(k + "=" + v);
        out << "evidence: " << join(items, ", ") << "\n";
    }
    const bool classes = m.tree.has_value();
    out << std::left << std::setw(16) << "event";
    if (classes) out << std::setw(10) << "class";
    out << "probability\n";
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const Variable& var = m.bn.find(targets[i])->variable;
        for (std::size_t s = 1; s < var.cardinality(); ++s) {
            out << std::left << std::setw(16) << label(var, s);
            if (classes) out << std::setw(10) << class_of(m, targets[i]);
            out << fixed5(dists[i].probs[s]) << "\n";
        }
    }
}

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const std::string text = read_file(cfg.path);
    std::vector<Diagnostic> diagnostics;
    std::string summary;
    if (looks_like_json(text)) {
        const BayesianNetwork bn = bn_from_json(text);
        diagnostics = validate_bn(bn);
        summary = "valid Bayesian network: " + std::to_string(bn.nodes.size()) + " variables";
    } else {
        const ParsedFaultTree parsed = parse_fault_tree_syntax(text);
        diagnostics = validate(parsed.tree);
        for (auto& d : diagnostics) {
            auto it = parsed.positions.find(d.subject);
            const SourcePos pos = it != parsed.positions.end() ? it->second : parsed.top_position;
            d.message = std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + d.message;
        }
        summary = "valid fault tree: " + std::to_string(parsed.tree.primaries.size()) + " primary events, " +
                  std::to_string(parsed.tree.gates.size()) + " gates, top " + parsed.tree.top;
    }
    for (const auto& d : diagnostics) err << cfg.path << ": " << to_string(d) << "\n";
    if (!diagnostics.empty()) return kInvalidModel;
    out << summary << "\n";
    return kOk;
}

int cmd_compile(const RunConfig& cfg, std::ostream& out) {
    const Model m = load_model(cfg, true);
    out << to_json(m.bn);
    return kOk;
}

int cmd_analyze(const RunConfig& cfg, std::ostream& out) {
    const Model m = load_model(cfg, true);
    const InferenceEngine engine(m.bn);
    const std::vector<std::string> targets = cfg.targets.empty() ? default_analyze_targets(m) : cfg.targets;
    std::vector<Distribution> dists;
    for (const auto& t : targets) dists.push_back(engine.marginal(t));
    print_marginals(cfg, m, targets, dists, {}, out);
    return kOk;
}

int cmd_posterior(const RunConfig& cfg, std::ostream& out) {
    const Model m = load_model(cfg, true);
    const InferenceEngine engine(m.bn);
    const Evidence ev = normalize_evidence(m.bn, parse_evidence(cfg.evidence));
    std::vector<std::string> targets = cfg.targets.empty() ? engine.roots() : cfg.targets;
    std::vector<std::pair<std::string, Distribution>> rows;
    for (const auto& t : targets) rows.emplace_back(t, engine.marginal(t, ev));
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        const double pa = p_abnormal(a.second), pb = p_abnormal(b.second);
        if (pa != pb) return pa < pb;
        return a.first < b.first;
    });
    targets.clear();
    std::vector<Distribution> dists;
    for (auto& [t, d] : rows) {
        targets.push_back(t);
        dists.push_back(std::move(d));
    }
    print_marginals(cfg, m, targets, dists, ev, out);
    return kOk;
}

int cmd_cutsets(const RunConfig& cfg, std::ostream& out) {
    const Model m = load_model(cfg, true);
    if (!m.tree)
        throw ValidationError({{"not-a-fault-tree", cfg.path,
                                "cut sets need a fault tree; for networks with noisy or multi-state nodes "
                                "use 'ftbn diagnose' to rank complete diagnoses"}});
    const InferenceEngine engine(m.bn);
    const auto scored = score_cut_sets(*m.tree, engine, m.priors);

    if (cfg.format == "json") {
        ojson rows = ojson::array();
        for (const auto& s : scored) {
            ojson r;
            r["members"] = s.cutset.members;
            r["order"] = s.cutset.order();
            r["unreliability"] = s.unreliability;
            r["posterior_unreliability"] = s.posterior_unreliability;
            r["diagnosis_posterior"] = s.diagnosis_posterior;
            rows.push_back(std::move(r));
        }
        out << rows.dump(2) << "\n";
        return kOk;
    }
    if (cfg.format == "csv") {
        out << "members,order,unreliability,posterior_unreliability,diagnosis_posterior\n";
        for (const auto& s : scored) {
            std::ostringstream line;
            line << std::setprecision(17) << join(s.cutset.members, ";") << "," << s.cutset.order() << ","
                 << s.unreliability << "," << s.posterior_unreliability << "," << s.diagnosis_posterior;
            out << line.str() << "\n";
        }
        return kOk;
    }
    std::map<std::size_t, std::size_t> by_order;
    for (const auto& s : scored) ++by_order[s.cutset.order()];
    out << "mission time: " << format_hours(*cfg.mission_time) << " h\n";
    out << scored.size() << " minimal cut sets (";
    bool first = true;
    for (const auto& [order, count] : by_order) {
        out << (first ? "" : ", ") << "order " << order << ": " << count;
        first = false;
    }
    out << ")\n";
    out << std::left << std::setw(6) << "rank" << std::setw(28) << "MCS" << std::setw(10) << "Unrel." << std::setw(14)
        << "Post. Unrel." << "Post. Prob.\n";
    for (std::size_t i = 0; i < scored.size(); ++i) {
        const auto& s = scored[i];
        out << std::left << std::setw(6) << i + 1 << std::setw(28) << "{" + join(s.cutset.members, ", ") + "}"
            << std::setw(10) << fixed5(s.unreliability) << std::setw(14) << fixed5(s.posterior_unreliability)
            << fixed5(s.diagnosis_posterior) << "\n";
    }
    return kOk;
}

int cmd_diagnose(const RunConfig& cfg, std::ostream& out) {
    const Model m = load_model(cfg, true);
    const InferenceEngine engine(m.bn);
    const Evidence ev = normalize_evidence(m.bn, parse_evidence(cfg.evidence));
    const auto ranked = engine.top_k_diagnoses(ev, cfg.top_k);

    if (cfg.format == "json") {
        ojson rows = ojson::array();
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            ojson r;
            r["rank"] = i + 1;
            r["posterior"] = ranked[i].posterior;
            r["joint"] = ranked[i].joint;
            ojson abnormal = ojson::object();
            for (const auto& a : ranked[i].abnormal()) abnormal[a.variable] = a.state;
            r["abnormal"] = abnormal;
            rows.push_back(std::move(r));
        }
        out << rows.dump(2) << "\n";
        return kOk;
    }
    if (cfg.format == "csv") {
        out << "rank,posterior,abnormal\n";
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            std::vector<std::string> items;
            for (const auto& a : ranked[i].abnormal()) items.push_back(a.variable + "=" + a.state);
            std::ostringstream line;
            line << std::setprecision(17) << i + 1 << "," << ranked[i].posterior << "," << join(items, ";");
            out << line.str() << "\n";
        }
        return kOk;
    }
    if (cfg.mission_time && m.tree) out << "mission time: " << format_hours(*cfg.mission_time) << " h\n";
    if (!ev.empty()) {
        std::vector<std::string> items;
        for (const auto& [k, v] : ev) items.push_back(k + "=" + v);
        out << "evidence: " << join(items, ", ") << "\n";
    }
    out << std::left << std::setw(6) << "rank" << std::setw(12) << "posterior" << "abnormal components\n";
    for (std::size_t i = 0; i < ranked.size(); ++i)
        out << std::left << std::setw(6) << i + 1 << std::setw(12) << fixed5(ranked[i].posterior)
            << diagnosis_label(ranked[i]) << "\n";
    return kOk;
}

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.command == "validate") return cmd_validate(cfg, out, err);
    if (cfg.command == "compile") return cmd_compile(cfg, out);
    if (cfg.command == "analyze") return cmd_analyze(cfg, out);
    if (cfg.command == "posterior") return cmd_posterior(cfg, out);
    if (cfg.command == "cutsets") return cmd_cutsets(cfg, out);
    return cmd_diagnose(cfg, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Fault-tree analysis through Bayesian-network inference", "ftbn"};
    app.add_option("command", cfg.command, "validate | compile | analyze | posterior | cutsets | diagnose")
        ->required()
        ->check(CLI::IsMember({"validate", "compile", "analyze", "posterior", "cutsets", "diagnose"}));
    app.add_option("path", cfg.path, "Fault-tree DSL file or BN JSON document")->required();
    app.add_option("--mission-time", cfg.mission_time, "Mission time in hours");
    auto* evidence = app.add_option("--evidence", cfg.evidence, "Observations VAR=STATE,...");
    app.add_option("--target", cfg.targets, "Events to report")->delimiter(',');
    app.add_option("--top", cfg.top_k, "Number of diagnoses")->check(CLI::PositiveNumber);
    app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"table", "json", "csv"}));
    app.add_option("--out", cfg.out_path, "Write the report to this file");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "ftbn: " << e.what() << "\n";
        return kUsage;
    }
    if (evidence->count() > 0 && cfg.command != "posterior" && cfg.command != "diagnose") {
        err << "ftbn: --evidence applies only to posterior and diagnose\n";
        return kUsage;
    }

    try {
        if (cfg.mission_time && !(std::isfinite(*cfg.mission_time) && *cfg.mission_time >= 0.0))
            throw UsageError("--mission-time must be finite and nonnegative");
        std::ostringstream report;
        const int code = dispatch(cfg, report, err);
        if (code == kOk) {
            if (cfg.out_path.empty()) {
                out << report.str();
            } else {
                std::ofstream file(cfg.out_path, std::ios::binary);
                if (!(file << report.str())) throw IoError("cannot write '" + cfg.out_path + "'");
            }
        }
        return code;
    } catch (const ValidationError& e) {
        for (const auto& d : e.diagnostics()) err << cfg.path << ": " << to_string(d) << "\n";
        return kInvalidModel;
    } catch (const ParseError& e) {
        err << cfg.path << ": " << e.what() << "\n";
        return kIoOrParse;
    } catch (const IoError& e) {
        err << "ftbn: " << e.what() << "\n";
        return kIoOrParse;
    } catch (const ImpossibleEvidenceError& e) {
        err << "ftbn: " << e.what() << "\n";
        return kImpossibleEvidence;
    } catch (const UnknownNameError& e) {
        err << "ftbn: " << e.what() << "\n";
        return kUsage;
    } catch (const UsageError& e) {
        err << "ftbn: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        err << "ftbn: " << e.what() << "\n";
        return kInvalidModel;
    }
}

}  // namespace ftbn::cli
