#ifndef LEXCONN_GRAPH_HPP
#define LEXCONN_GRAPH_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace lexconn {

using Vertex = int;
using EdgeId = int;

/// Bitset over the edge ids of one host graph.
using EdgeSet = boost::dynamic_bitset<std::uint64_t>;

/// An undirected edge as stored. Orientation is the one it was created
/// with; use normalized() when comparing.
struct Edge {
    Vertex u {};
    Vertex v {};

    [[nodiscard]] Edge normalized() const noexcept { return u < v ? Edge {u, v} : Edge {v, u}; }
    [[nodiscard]] bool touches(Vertex w) const noexcept { return u == w || v == w; }
    [[nodiscard]] Vertex other(Vertex w) const noexcept { return u == w ? v : u; }

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(Vertex a, Vertex b) noexcept { return Edge {a, b}.normalized(); }

class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Incidence {
    Vertex to {};
    EdgeId edge {};
};

/// Simple undirected graph on vertices 0..n-1. Immutable once built.
class Graph {
public:
    Graph() : Graph(1, {}) {}

    Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges))
    {
        if (n_ < 1)
            throw GraphError("graph needs at least one vertex, got n=" + std::to_string(n_));
        index_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), -1);
        adj_.resize(static_cast<std::size_t>(n_));
        for (EdgeId id = 0; id < static_cast<EdgeId>(edges_.size()); ++id) {
            const auto [u, v] = edges_[static_cast<std::size_t>(id)];
            const auto pair = "(" + std::to_string(u) + "," + std::to_string(v) + ")";
            if (u < 0 || v < 0 || u >= n_ || v >= n_)
                throw GraphError("edge " + pair + " out of range for n=" + std::to_string(n_));
            if (u == v)
                throw GraphError("self-loop " + pair);
            auto& slot = index_[slot_of(u, v)];
            if (slot != -1)
                throw GraphError("duplicate edge " + pair);
            slot = id;
            index_[slot_of(v, u)] = id;
            adj_[static_cast<std::size_t>(u)].push_back({v, id});
            adj_[static_cast<std::size_t>(v)].push_back({u, id});
        }
        for (auto& list : adj_)
            std::sort(list.begin(), list.end(), [](const Incidence& a, const Incidence& b) { return a.to < b.to; });
    }

    [[nodiscard]] int order() const noexcept { return n_; }
    [[nodiscard]] int size() const noexcept { return static_cast<int>(edges_.size()); }
    [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }
    [[nodiscard]] Edge edge(EdgeId id) const { return edges_.at(static_cast<std::size_t>(id)); }

    /// Neighbors in increasing vertex order.
    [[nodiscard]] std::span<const Incidence> neighbors(Vertex v) const { return adj_.at(static_cast<std::size_t>(v)); }
    [[nodiscard]] int degree(Vertex v) const { return static_cast<int>(neighbors(v).size()); }

    [[nodiscard]] bool contains(Vertex v) const noexcept { return v >= 0 && v < n_; }

    [[nodiscard]] std::optional<EdgeId> find_edge(Vertex u, Vertex v) const
    {
        if (!contains(u) || !contains(v))
            return std::nullopt;
        const auto id = index_[slot_of(u, v)];
        if (id < 0)
            return std::nullopt;
        return id;
    }

    [[nodiscard]] bool has_edge(Vertex u, Vertex v) const { return find_edge(u, v).has_value(); }

    [[nodiscard]] EdgeId edge_id(Vertex u, Vertex v) const
    {
        auto id = find_edge(u, v);
        if (!id)
            throw GraphError("(" + std::to_string(u) + "," + std::to_string(v) + ") is not an edge");
        return *id;
    }

    [[nodiscard]] EdgeSet all_edges() const
    {
        EdgeSet set(static_cast<std::size_t>(size()));
        set.set();
        return set;
    }

    [[nodiscard]] EdgeSet empty_edge_set() const { return EdgeSet(static_cast<std::size_t>(size())); }

    /// Edge list with each pair as (min,max), sorted.
    [[nodiscard]] std::vector<Edge> sorted_edges() const
    {
        std::vector<Edge> out;
        out.reserve(edges_.size());
        for (const auto& e : edges_)
            out.push_back(e.normalized());
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Same vertex count and same edge set, ignoring order and orientation.
    [[nodiscard]] bool same_as(const Graph& other) const { return n_ == other.n_ && sorted_edges() == other.sorted_edges(); }

private:
    [[nodiscard]] std::size_t slot_of(Vertex u, Vertex v) const noexcept
    {
        return static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v);
    }

    int n_;
    std::vector<Edge> edges_;
    std::vector<EdgeId> index_;
    std::vector<std::vector<Incidence>> adj_;
};

inline Graph new_graph(int n, std::vector<Edge> edges) { return Graph(n, std::move(edges)); }

inline int min_degree(const Graph& g)
{
    int best = g.degree(0);
    for (Vertex v = 1; v < g.order(); ++v)
        best = std::min(best, g.degree(v));
    return best;
}

/// Component label per vertex, restricted to the edges in `allowed` (all edges when empty).
inline std::vector<int> components(const Graph& g, const EdgeSet* allowed = nullptr)
{
    std::vector<int> comp(static_cast<std::size_t>(g.order()), -1);
    int label = 0;
    std::vector<Vertex> stack;
    for (Vertex s = 0; s < g.order(); ++s) {
        if (comp[static_cast<std::size_t>(s)] != -1)
            continue;
        comp[static_cast<std::size_t>(s)] = label;
        stack.push_back(s);
        while (!stack.empty()) {
            const auto v = stack.back();
            stack.pop_back();
            for (const auto& inc : g.neighbors(v)) {
                if (allowed && !allowed->test(static_cast<std::size_t>(inc.edge)))
                    continue;
                auto& c = comp[static_cast<std::size_t>(inc.to)];
                if (c == -1) {
                    c = label;
                    stack.push_back(inc.to);
                }
            }
        }
        ++label;
    }
    return comp;
}

inline bool is_connected(const Graph& g)
{
    const auto comp = components(g);
    return std::all_of(comp.begin(), comp.end(), [](int c) { return c == 0; });
}

/// Hop distances from `source`; -1 marks unreachable vertices.
inline std::vector<int> bfs_distances(const Graph& g, Vertex source, const EdgeSet* allowed = nullptr)
{
    std::vector<int> dist(static_cast<std::size_t>(g.order()), -1);
    std::queue<Vertex> queue;
    dist[static_cast<std::size_t>(source)] = 0;
    queue.push(source);
    while (!queue.empty()) {
        const auto v = queue.front();
        queue.pop();
        for (const auto& inc : g.neighbors(v)) {
            if (allowed && !allowed->test(static_cast<std::size_t>(inc.edge)))
                continue;
            auto& d = dist[static_cast<std::size_t>(inc.to)];
            if (d < 0) {
                d = dist[static_cast<std::size_t>(v)] + 1;
                queue.push(inc.to);
            }
        }
    }
    return dist;
}

/// Subgraph induced on `vertices`, re-indexed in the given order.
inline Graph induced_subgraph(const Graph& g, std::span<const Vertex> vertices)
{
    std::vector<int> local(static_cast<std::size_t>(g.order()), -1);
    for (std::size_t i = 0; i < vertices.size(); ++i)
        local[static_cast<std::size_t>(vertices[i])] = static_cast<int>(i);
    std::vector<Edge> edges;
    for (const auto& e : g.edges()) {
        const auto a = local[static_cast<std::size_t>(e.u)];
        const auto b = local[static_cast<std::size_t>(e.v)];
        if (a >= 0 && b >= 0)
            edges.push_back({a, b});
    }
    return Graph(static_cast<int>(vertices.size()), std::move(edges));
}

/// Same vertex set, only the edges selected by `keep`.
inline Graph spanning_subgraph(const Graph& g, const EdgeSet& keep)
{
    std::vector<Edge> edges;
    for (auto i = keep.find_first(); i != EdgeSet::npos; i = keep.find_next(i))
        edges.push_back(g.edges()[i]);
    return Graph(g.order(), std::move(edges));
}

enum class Family { Path, Cycle, Complete, Empty };

inline std::optional<Family> parse_family(std::string_view name)
{
    if (name == "path")
        return Family::Path;
    if (name == "cycle")
        return Family::Cycle;
    if (name == "complete")
        return Family::Complete;
    if (name == "empty")
        return Family::Empty;
    return std::nullopt;
}

inline Graph family(Family kind, int n)
{
    if (n < 1)
        throw GraphError("family graph needs n >= 1, got " + std::to_string(n));
    std::vector<Edge> edges;
    switch (kind) {
    case Family::Path:
        for (Vertex v = 0; v + 1 < n; ++v)
            edges.push_back({v, v + 1});
        break;
    case Family::Cycle:
        if (n < 3)
            throw GraphError("cycle needs n >= 3, got " + std::to_string(n));
        for (Vertex v = 0; v + 1 < n; ++v)
            edges.push_back({v, v + 1});
        edges.push_back({0, n - 1});
        break;
    case Family::Complete:
        for (Vertex u = 0; u < n; ++u)
            for (Vertex v = u + 1; v < n; ++v)
                edges.push_back({u, v});
        break;
    case Family::Empty:
        break;
    }
    return Graph(n, std::move(edges));
}

inline Graph path_graph(int n) { return family(Family::Path, n); }
inline Graph cycle_graph(int n) { return family(Family::Cycle, n); }
inline Graph complete_graph(int n) { return family(Family::Complete, n); }
inline Graph empty_graph(int n) { return family(Family::Empty, n); }

} // namespace lexconn

#endif // LEXCONN_GRAPH_HPP
