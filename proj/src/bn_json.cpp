#include <json.hpp>

#include "ftbn/bayes_net.hpp"

namespace ftbn {

namespace {

using ojson = nlohmann::ordered_json;

ojson cpt_to_json(const Node& node) {
    ojson j;
    j["type"] = std::string(cpt_type_name(node.cpt));
    if (const auto* t = std::get_if<TableCpt>(&node.cpt)) {
        const std::size_t card = node.variable.cardinality();
        ojson rows = ojson::array();
        for (std::size_t r = 0; card > 0 && r * card < t->probs.size(); ++r)
            rows.push_back(std::vector<double>(t->probs.begin() + r * card, t->probs.begin() + (r + 1) * card));
        j["rows"] = rows;
    } else if (const auto* g = std::get_if<BoolGateCpt>(&node.cpt)) {
        if (g->kind == GateKind::KofN) j["k"] = g->k;
    } else if (const auto* o = std::get_if<NoisyOrCpt>(&node.cpt)) {
        j["c"] = o->c;
        j["leak"] = o->leak;
    } else if (const auto* a = std::get_if<NoisyAndCpt>(&node.cpt)) {
        j["c"] = a->c;
    } else {
        const auto& m = std::get<NoisyMaxCpt>(node.cpt);
        j["c"] = m.c;
        j["leak"] = m.leak;
    }
    return j;
}

[[noreturn]] void schema_error(const std::string& msg) { throw ParseError("BN JSON: " + msg, 0, 0); }

template <class T>
T field(const nlohmann::json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) schema_error(where + ": missing \"" + key + "\"");
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        schema_error(where + ": field \"" + key + "\" has the wrong type");
    }
}

CptSpec cpt_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_object()) schema_error(where + ": \"cpt\" must be an object");
    const auto type = field<std::string>(j, "type", where);
    if (type == "table") {
        TableCpt t;
        for (const auto& row : field<std::vector<std::vector<double>>>(j, "rows", where))
            t.probs.insert(t.probs.end(), row.begin(), row.end());
        return t;
    }
    if (type == "and") return BoolGateCpt{GateKind::And, 0};
    if (type == "or") return BoolGateCpt{GateKind::Or, 0};
    if (type == "kofn") return BoolGateCpt{GateKind::KofN, field<int>(j, "k", where)};
    if (type == "noisy_or")
        return NoisyOrCpt{field<std::vector<double>>(j, "c", where), j.contains("leak") ? field<double>(j, "leak", where) : 0.0};
    if (type == "noisy_and") return NoisyAndCpt{field<std::vector<double>>(j, "c", where)};
    if (type == "noisy_max")
        return NoisyMaxCpt{field<std::vector<std::vector<double>>>(j, "c", where),
                           j.contains("leak") ? field<double>(j, "leak", where) : 0.0};
    schema_error(where + ": unknown CPT type \"" + type + "\"");
}

}  // namespace

std::string to_json(const BayesianNetwork& bn) {
    ojson nodes = ojson::array();
    for (const auto& node : bn.nodes) {
        ojson j;
        j["id"] = node.id();
        j["states"] = node.variable.states;
        j["parents"] = node.parents;
        j["cpt"] = cpt_to_json(node);
        nodes.push_back(std::move(j));
    }
    ojson doc;
    doc["nodes"] = std::move(nodes);
    return doc.dump(2) + "\n";
}

BayesianNetwork bn_from_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(std::string("malformed JSON: ") + e.what(), line, col);
    }
    if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array())
        schema_error("document must be an object with a \"nodes\" array");

    BayesianNetwork bn;
    std::size_t i = 0;
    for (const auto& j : doc["nodes"]) {
        const std::string where = "node " + std::to_string(i++);
        if (!j.is_object()) schema_error(where + " must be an object");
        Node node;
        node.variable.id = field<std::string>(j, "id", where);
        node.variable.states = field<std::vector<std::string>>(j, "states", where);
        node.parents = j.contains("parents") ? field<std::vector<std::string>>(j, "parents", where)
                                             : std::vector<std::string>{};
        if (!j.contains("cpt")) schema_error(where + ": missing \"cpt\"");
        node.cpt = cpt_from_json(j["cpt"], where + " ('" + node.id() + "')");
        bn.nodes.push_back(std::move(node));
    }
    return bn;
}

}  // namespace ftbn
