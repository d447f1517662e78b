#ifndef LEXCONN_IO_HPP
#define LEXCONN_IO_HPP

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "graph.hpp"

namespace lexconn::io {

// Edge-list text: "n m" header, then one "u v" line per edge, LF endings.

inline std::string to_edge_list(const Graph& g)
{
    std::string out = std::to_string(g.order()) + " " + std::to_string(g.size()) + "\n";
    for (const auto& e : g.edges())
        out += std::to_string(e.u) + " " + std::to_string(e.v) + "\n";
    return out;
}

inline Graph from_edge_list(const std::string& text)
{
    std::istringstream in(text);
    long long n = 0;
    long long m = 0;
    if (!(in >> n >> m))
        throw GraphError("edge list: missing \"n m\" header");
    if (n < 1 || m < 0)
        throw GraphError("edge list: bad header \"" + std::to_string(n) + " " + std::to_string(m) + "\"");
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (long long i = 0; i < m; ++i) {
        long long u = 0;
        long long v = 0;
        if (!(in >> u >> v))
            throw GraphError("edge list: expected " + std::to_string(m) + " edges, found " + std::to_string(i));
        edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
    }
    std::string rest;
    if (in >> rest)
        throw GraphError("edge list: trailing data \"" + rest + "\"");
    return Graph(static_cast<int>(n), std::move(edges));
}

// JSON: {"n":<int>,"edges":[[u,v],...]}, written compact with "n" first.

inline std::string to_json(const Graph& g)
{
    nlohmann::ordered_json doc;
    doc["n"] = g.order();
    auto edges = nlohmann::ordered_json::array();
    for (const auto& e : g.edges())
        edges.push_back({e.u, e.v});
    doc["edges"] = std::move(edges);
    return doc.dump() + "\n";
}

inline Graph from_json(const std::string& text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& err) {
        throw GraphError(std::string("json graph: ") + err.what());
    }
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("edges"))
        throw GraphError("json graph: expected object with \"n\" and \"edges\"");
    if (!doc["n"].is_number_integer() || !doc["edges"].is_array())
        throw GraphError("json graph: \"n\" must be an integer and \"edges\" an array");
    std::vector<Edge> edges;
    for (const auto& pair : doc["edges"]) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() || !pair[1].is_number_integer())
            throw GraphError("json graph: bad edge " + pair.dump());
        edges.push_back({pair[0].get<Vertex>(), pair[1].get<Vertex>()});
    }
    return Graph(doc["n"].get<int>(), std::move(edges));
}

inline bool looks_like_json(const std::string& text)
{
    const auto pos = text.find_first_not_of(" \t\r\n");
    return pos != std::string::npos && text[pos] == '{';
}

inline Graph parse_graph(const std::string& text) { return looks_like_json(text) ? from_json(text) : from_edge_list(text); }

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw GraphError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::string& path, const std::string& contents)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw GraphError("cannot write " + path);
    out << contents;
}

inline bool has_json_extension(const std::string& path)
{
    return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

inline Graph load_graph(const std::string& path) { return parse_graph(read_file(path)); }

/// Format follows the extension: ".json" writes JSON, anything else the edge list.
inline void save_graph(const std::string& path, const Graph& g)
{
    write_file(path, has_json_extension(path) ? to_json(g) : to_edge_list(g));
}

} // namespace lexconn::io

#endif // LEXCONN_IO_HPP
