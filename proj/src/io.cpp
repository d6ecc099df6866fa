#include "ising/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "ising/error.hpp"
#include "json.hpp"

namespace ising {

using nlohmann::json;

namespace {

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidInput, std::string("malformed JSON: ") + e.what());
    }
}

template <typename T>
T field(const json& obj, const char* key) {
    if (!obj.is_object() || !obj.contains(key)) throw Error(ErrorCode::InvalidInput, std::string("missing field '") + key + "'");
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw Error(ErrorCode::InvalidInput, std::string("field '") + key + "' has the wrong type");
    }
}

template <typename T>
T as(const json& value, const char* what) {
    try {
        return value.get<T>();
    } catch (const json::exception&) {
        throw Error(ErrorCode::InvalidInput, std::string(what) + " has the wrong type");
    }
}

int vertex_count_of(const json& doc) {
    const int n = field<int>(doc, "n");
    if (n < 0) throw Error(ErrorCode::InvalidInput, "negative vertex count");
    return n;
}

void check_vertex(int v, int n) {
    if (v < 0 || v >= n) throw Error(ErrorCode::InvalidInput, "vertex " + std::to_string(v) + " out of range");
}

int add_checked_edge(Graph& g, int u, int v) {
    check_vertex(u, g.vertex_count());
    check_vertex(v, g.vertex_count());
    if (u == v) throw Error(ErrorCode::InvalidInput, "self-loop at vertex " + std::to_string(u));
    if (g.has_edge(u, v))
        throw Error(ErrorCode::InvalidInput, "duplicate edge {" + std::to_string(u) + ", " + std::to_string(v) + "}");
    return g.add_edge(u, v);
}

}  // namespace

Graph parse_graph(const std::string& text) {
    const json doc = parse_json(text);
    Graph g(vertex_count_of(doc));
    for (const auto& e : field<json>(doc, "edges")) {
        if (e.is_array() && e.size() >= 2) add_checked_edge(g, as<int>(e[0], "edge endpoint"), as<int>(e[1], "edge endpoint"));
        else if (e.is_object()) add_checked_edge(g, field<int>(e, "u"), field<int>(e, "v"));
        else throw Error(ErrorCode::InvalidInput, "edge entries must be [u, v] or {\"u\", \"v\"}");
    }
    return g;
}

std::string graph_to_json(const Graph& g) {
    json doc;
    doc["n"] = g.vertex_count();
    doc["edges"] = json::array();
    for (const auto& e : g.edges()) doc["edges"].push_back({e.u, e.v});
    return doc.dump();
}

IsingModel parse_model(const std::string& text) {
    const json doc = parse_json(text);
    Graph g(vertex_count_of(doc));
    std::vector<double> j;
    for (const auto& e : field<json>(doc, "edges")) {
        if (e.is_array() && (e.size() == 2 || e.size() == 3)) {
            add_checked_edge(g, as<int>(e[0], "edge endpoint"), as<int>(e[1], "edge endpoint"));
            j.push_back(e.size() == 3 ? as<double>(e[2], "interaction") : 0.0);
        } else if (e.is_object()) {
            add_checked_edge(g, field<int>(e, "u"), field<int>(e, "v"));
            j.push_back(e.contains("j") ? field<double>(e, "j") : 0.0);
        } else {
            throw Error(ErrorCode::InvalidInput, "edge entries must be [u, v], [u, v, j] or {\"u\", \"v\", \"j\"}");
        }
    }
    std::optional<std::vector<double>> fields;
    if (doc.contains("fields") && !doc["fields"].is_null()) {
        fields = field<std::vector<double>>(doc, "fields");
        if (static_cast<int>(fields->size()) != g.vertex_count())
            throw Error(ErrorCode::InvalidInput, "field vector length does not match n");
    }
    IsingModel m(std::move(g), std::move(j), std::move(fields));
    m.check();
    return m;
}

std::string model_to_json(const IsingModel& m) {
    json doc;
    doc["n"] = m.vertex_count();
    doc["edges"] = json::array();
    for (int e = 0; e < m.graph.edge_count(); ++e)
        doc["edges"].push_back({{"u", m.graph.edge(e).u}, {"v", m.graph.edge(e).v}, {"j", m.interactions[e]}});
    doc["fields"] = m.fields ? json(*m.fields) : json(nullptr);
    return doc.dump();
}

DecompositionTree parse_decomposition(const std::string& text) {
    const json doc = parse_json(text);
    DecompositionTree tree;
    tree.c = field<int>(doc, "c");
    tree.root = field<int>(doc, "root");
    const auto nodes = field<json>(doc, "nodes");
    if (!nodes.is_array()) throw Error(ErrorCode::InvalidInput, "'nodes' must be an array");
    tree.nodes.resize(nodes.size());
    std::vector<char> seen(nodes.size(), 0);
    for (const auto& n : nodes) {
        const int id = field<int>(n, "id");
        if (id < 0 || id >= static_cast<int>(nodes.size()) || seen[id])
            throw Error(ErrorCode::InvalidInput, "node ids must be 0 .. count-1 without repeats");
        seen[id] = 1;
        DecompositionNode& node = tree.nodes[id];
        node.id = id;
        if (n.contains("parent") && !n["parent"].is_null()) node.parent = field<int>(n, "parent");
        node.vertices = field<std::vector<int>>(n, "vertices");
        std::sort(node.vertices.begin(), node.vertices.end());
        for (const auto& e : field<json>(n, "edges")) {
            if (!e.is_array() || e.size() != 2) throw Error(ErrorCode::InvalidInput, "node edges must be [u, v]");
            int u = as<int>(e[0], "edge endpoint"), v = as<int>(e[1], "edge endpoint");
            if (u > v) std::swap(u, v);
            node.edges.emplace_back(u, v);
        }
    }
    return tree;
}

std::string decomposition_to_json(const DecompositionTree& tree) {
    json doc;
    doc["c"] = tree.c;
    doc["root"] = tree.root;
    doc["nodes"] = json::array();
    for (const auto& n : tree.nodes) {
        json node;
        node["id"] = n.id;
        node["parent"] = n.parent ? json(*n.parent) : json(nullptr);
        node["vertices"] = n.vertices;
        node["edges"] = json::array();
        for (const auto& [u, v] : n.edges) node["edges"].push_back({u, v});
        doc["nodes"].push_back(std::move(node));
    }
    return doc.dump();
}

Condition parse_condition(const std::string& text) {
    Condition s;
    std::stringstream in(text);
    std::string item;
    auto number = [&](std::string_view part) {
        if (!part.empty() && part.front() == '+') part.remove_prefix(1);
        int value = 0;
        const auto [end, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
        if (ec != std::errc() || end != part.data() + part.size() || part.empty())
            throw Error(ErrorCode::InvalidInput, "malformed condition entry '" + item + "'");
        return value;
    };
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw Error(ErrorCode::InvalidInput, "condition entries look like 'v:+1'");
        const std::string_view view(item);
        const int spin = number(view.substr(colon + 1));
        if (spin != 1 && spin != -1) throw Error(ErrorCode::InvalidInput, "condition spins must be +1 or -1");
        s.assignments.push_back({number(view.substr(0, colon)), spin});
    }
    return s;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidInput, "cannot read '" + path + "'");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw Error(ErrorCode::InvalidInput, "cannot write '" + path + "'");
}

}  // namespace ising
