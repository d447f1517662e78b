#ifndef LEXCONN_CONNECTIVITY_HPP
#define LEXCONN_CONNECTIVITY_HPP

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "graph.hpp"

namespace lexconn {

using Path = std::vector<Vertex>;

inline int path_length(const Path& p) { return p.empty() ? 0 : static_cast<int>(p.size()) - 1; }

/// Pairwise edge-disjoint source-sink paths, sorted by (length, vertex sequence).
struct PathSystem {
    Vertex source {};
    Vertex sink {};
    std::vector<Path> paths;

    [[nodiscard]] std::vector<int> lengths() const
    {
        std::vector<int> out;
        for (const auto& p : paths)
            out.push_back(path_length(p));
        return out;
    }
};

namespace detail {

    /// Unit-capacity max flow on an undirected graph. flow[e] is +1 when
    /// edge e carries flow from edge(e).u to edge(e).v, -1 for the reverse.
    class UnitFlow {
    public:
        UnitFlow(const Graph& g, const EdgeSet* allowed) : g_(g), allowed_(allowed), flow_(static_cast<std::size_t>(g.size()), 0) {}

        int run(Vertex s, Vertex t, int limit)
        {
            int value = 0;
            while (value < limit && augment(s, t))
                ++value;
            return value;
        }

        [[nodiscard]] int flow_from(EdgeId e, Vertex from) const
        {
            const auto f = flow_[static_cast<std::size_t>(e)];
            return g_.edge(e).u == from ? f : -f;
        }

        /// Vertices reachable from s in the residual network.
        [[nodiscard]] std::vector<char> source_side(Vertex s) const
        {
            std::vector<char> seen(static_cast<std::size_t>(g_.order()), 0);
            std::vector<Vertex> stack {s};
            seen[static_cast<std::size_t>(s)] = 1;
            while (!stack.empty()) {
                auto v = stack.back();
                stack.pop_back();
                for (const auto& inc : g_.neighbors(v)) {
                    if (!usable(inc.edge) || flow_from(inc.edge, v) >= 1 || seen[static_cast<std::size_t>(inc.to)])
                        continue;
                    seen[static_cast<std::size_t>(inc.to)] = 1;
                    stack.push_back(inc.to);
                }
            }
            return seen;
        }

    private:
        [[nodiscard]] bool usable(EdgeId e) const { return !allowed_ || allowed_->test(static_cast<std::size_t>(e)); }

        bool augment(Vertex s, Vertex t)
        {
            std::vector<EdgeId> via(static_cast<std::size_t>(g_.order()), -1);
            std::vector<char> seen(static_cast<std::size_t>(g_.order()), 0);
            std::queue<Vertex> queue;
            queue.push(s);
            seen[static_cast<std::size_t>(s)] = 1;
            while (!queue.empty() && !seen[static_cast<std::size_t>(t)]) {
                auto v = queue.front();
                queue.pop();
                for (const auto& inc : g_.neighbors(v)) {
                    if (!usable(inc.edge) || flow_from(inc.edge, v) >= 1 || seen[static_cast<std::size_t>(inc.to)])
                        continue;
                    seen[static_cast<std::size_t>(inc.to)] = 1;
                    via[static_cast<std::size_t>(inc.to)] = inc.edge;
                    queue.push(inc.to);
                }
            }
            if (!seen[static_cast<std::size_t>(t)])
                return false;
            for (Vertex v = t; v != s;) {
                const auto e = via[static_cast<std::size_t>(v)];
                const auto from = g_.edge(e).other(v);
                flow_[static_cast<std::size_t>(e)] += g_.edge(e).u == from ? 1 : -1;
                v = from;
            }
            return true;
        }

        const Graph& g_;
        const EdgeSet* allowed_;
        std::vector<int> flow_;
    };

    /// Drop repeated vertices from a walk by cutting out the loop between repeats.
    inline Path shortcut(const Path& walk)
    {
        Path out;
        for (auto v : walk) {
            auto it = std::find(out.begin(), out.end(), v);
            if (it != out.end())
                out.erase(std::next(it), out.end());
            else
                out.push_back(v);
        }
        return out;
    }

    inline void sort_paths(std::vector<Path>& paths)
    {
        std::sort(paths.begin(), paths.end(), [](const Path& a, const Path& b) {
            if (a.size() != b.size())
                return a.size() < b.size();
            return a < b;
        });
    }

} // namespace detail

/// Maximum number of pairwise edge-disjoint u-v paths, capped at `limit`.
/// `allowed` restricts the usable edges.
inline int local_edge_connectivity(const Graph& g, Vertex u, Vertex v, const EdgeSet* allowed = nullptr,
    int limit = std::numeric_limits<int>::max())
{
    if (!g.contains(u) || !g.contains(v))
        throw GraphError("vertex out of range");
    if (u == v)
        throw std::invalid_argument("local edge connectivity needs distinct vertices, got " + std::to_string(u) + " twice");
    detail::UnitFlow flow(g, allowed);
    return flow.run(u, v, limit);
}

inline int edge_connectivity(const Graph& g)
{
    if (g.order() < 2)
        throw std::invalid_argument("edge connectivity needs at least two vertices");
    // A minimum cut separates vertex 0 from some other vertex.
    int best = min_degree(g);
    for (Vertex v = 1; v < g.order() && best > 0; ++v)
        best = std::min(best, local_edge_connectivity(g, 0, v, nullptr, best));
    return best;
}

/// A minimum u-v edge cut as the source side of the residual graph.
inline std::vector<Vertex> min_cut_side(const Graph& g, Vertex u, Vertex v)
{
    detail::UnitFlow flow(g, nullptr);
    flow.run(u, v, std::numeric_limits<int>::max());
    const auto side = flow.source_side(u);
    std::vector<Vertex> out;
    for (Vertex w = 0; w < g.order(); ++w)
        if (side[static_cast<std::size_t>(w)])
            out.push_back(w);
    return out;
}

/// Exactly k edge-disjoint simple u-v paths, shortest first. When u and v
/// are adjacent the single-edge path is always among them.
inline PathSystem disjoint_paths(const Graph& g, Vertex u, Vertex v, int k)
{
    if (u == v)
        throw std::invalid_argument("disjoint paths need distinct endpoints");
    if (k < 0)
        throw std::invalid_argument("negative path count");
    detail::UnitFlow flow(g, nullptr);
    const int value = flow.run(u, v, std::numeric_limits<int>::max());
    if (k > value)
        throw std::invalid_argument("requested " + std::to_string(k) + " edge-disjoint paths between " + std::to_string(u) + " and "
            + std::to_string(v) + " but local edge connectivity is " + std::to_string(value));

    // Decompose: follow outgoing flow edges from u, consuming each edge once.
    std::vector<char> used(static_cast<std::size_t>(g.size()), 0);
    std::vector<Path> paths;
    for (int i = 0; i < value; ++i) {
        Path walk {u};
        Vertex at = u;
        while (at != v) {
            bool moved = false;
            for (const auto& inc : g.neighbors(at)) {
                if (used[static_cast<std::size_t>(inc.edge)] || flow.flow_from(inc.edge, at) != 1)
                    continue;
                used[static_cast<std::size_t>(inc.edge)] = 1;
                at = inc.to;
                walk.push_back(at);
                moved = true;
                break;
            }
            if (!moved)
                throw std::logic_error("flow decomposition got stuck");
        }
        paths.push_back(detail::shortcut(walk));
    }
    detail::sort_paths(paths);
    paths.resize(static_cast<std::size_t>(k));
    if (k > 0 && g.has_edge(u, v)) {
        const Path direct {u, v};
        if (std::find(paths.begin(), paths.end(), direct) == paths.end()) {
            // No chosen path uses edge uv, since any simple u-v path containing it is [u,v].
            paths.back() = direct;
            detail::sort_paths(paths);
        }
    }
    return {u, v, std::move(paths)};
}

} // namespace lexconn

#endif // LEXCONN_CONNECTIVITY_HPP
