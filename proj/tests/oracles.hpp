#ifndef LEXCONN_TESTS_ORACLES_HPP
#define LEXCONN_TESTS_ORACLES_HPP

// Brute-force reference implementations. Deliberately naive and kept
// independent of the library's flow and search code.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <set>
#include <stdexcept>
#include <vector>

#include <lexconn/graph.hpp>

namespace oracle {

using lexconn::Graph;
using lexconn::Vertex;
using Mask = std::uint64_t;

/// Minimum number of edges crossing a vertex bipartition that separates u from v.
inline int min_cut(const Graph& g, Vertex u, Vertex v)
{
    const int n = g.order();
    if (n > 20)
        throw std::invalid_argument("min_cut oracle is exponential; n too large");
    int best = std::numeric_limits<int>::max();
    for (std::uint32_t side = 0; side < (1u << n); ++side) {
        if (!(side >> u & 1u) || (side >> v & 1u))
            continue;
        int crossing = 0;
        for (const auto& e : g.edges())
            crossing += ((side >> e.u) & 1u) != ((side >> e.v) & 1u);
        best = std::min(best, crossing);
    }
    return best;
}

inline int global_min_cut(const Graph& g)
{
    int best = std::numeric_limits<int>::max();
    for (Vertex v = 1; v < g.order(); ++v)
        best = std::min(best, min_cut(g, 0, v));
    return best;
}

namespace detail {

    struct SimplePath {
        std::uint32_t verts;
        Mask edges;
    };

    inline void extend(const Graph& g, Vertex at, Vertex target, std::uint32_t forbidden, std::uint32_t verts, Mask edges,
        std::vector<SimplePath>& out)
    {
        if (at == target) {
            out.push_back({verts, edges});
            return;
        }
        for (const auto& inc : g.neighbors(at)) {
            const auto bit = 1u << inc.to;
            if ((verts & bit) || (forbidden & bit))
                continue;
            extend(g, inc.to, target, forbidden, verts | bit, edges | (Mask {1} << inc.edge), out);
        }
    }

    /// All simple from-to paths avoiding `forbidden` vertices.
    inline std::vector<SimplePath> paths(const Graph& g, Vertex from, Vertex to, std::uint32_t forbidden)
    {
        std::vector<SimplePath> out;
        extend(g, from, to, forbidden, 1u << from, 0, out);
        return out;
    }

} // namespace detail

/// Every minimal S-tree (all leaves terminals) for |S| in {2,3}, as edge masks.
inline std::vector<Mask> minimal_trees(const Graph& g, const std::vector<Vertex>& s)
{
    if (g.size() > 64 || g.order() > 31)
        throw std::invalid_argument("tree oracle limited to 64 edges and 31 vertices");
    std::set<Mask> out;
    if (s.size() == 2) {
        for (const auto& p : detail::paths(g, s[0], s[1], 0))
            out.insert(p.edges);
        return {out.begin(), out.end()};
    }
    if (s.size() != 3)
        throw std::invalid_argument("tree oracle supports two or three terminals");
    auto bit = [](Vertex v) { return 1u << v; };

    // Paths: one terminal in the middle.
    for (int m = 0; m < 3; ++m) {
        const auto mid = s[static_cast<std::size_t>(m)];
        const auto a = s[static_cast<std::size_t>((m + 1) % 3)];
        const auto b = s[static_cast<std::size_t>((m + 2) % 3)];
        const auto left = detail::paths(g, mid, a, bit(b));
        const auto right = detail::paths(g, mid, b, bit(a));
        for (const auto& p : left)
            for (const auto& q : right)
                if ((p.verts & q.verts) == bit(mid))
                    out.insert(p.edges | q.edges);
    }
    // Spiders: a non-terminal centre with three internally disjoint legs.
    const auto terms = bit(s[0]) | bit(s[1]) | bit(s[2]);
    for (Vertex c = 0; c < g.order(); ++c) {
        if (terms & bit(c))
            continue;
        std::vector<std::vector<detail::SimplePath>> legs;
        for (auto t : s)
            legs.push_back(detail::paths(g, c, t, terms & ~bit(t)));
        for (const auto& p : legs[0])
            for (const auto& q : legs[1]) {
                if ((p.verts & q.verts) != bit(c))
                    continue;
                for (const auto& r : legs[2])
                    if (((p.verts | q.verts) & r.verts) == bit(c))
                        out.insert(p.edges | q.edges | r.edges);
            }
    }
    return {out.begin(), out.end()};
}

namespace detail {

    /// Exact set packing. Branches on the next edge at the pivot terminal:
    /// either some chosen tree holds it, or no tree does. Every tree needs
    /// a free edge at each terminal, which bounds the search.
    class Packer {
    public:
        Packer(const Graph& g, const std::vector<Vertex>& s, std::vector<Mask> trees)
        {
            Vertex pivot = s.front();
            for (auto t : s)
                if (g.degree(t) < g.degree(pivot))
                    pivot = t;
            for (auto t : s) {
                Mask m = 0;
                for (const auto& inc : g.neighbors(t))
                    m |= Mask {1} << inc.edge;
                at_terminal_.push_back(m);
            }
            for (const auto& inc : g.neighbors(pivot)) {
                const Mask e = Mask {1} << inc.edge;
                pivot_edges_.push_back(e);
                std::vector<Mask> holding;
                for (auto t : trees)
                    if (t & e)
                        holding.push_back(t);
                std::sort(holding.begin(), holding.end(), [](Mask a, Mask b) {
                    const auto ca = __builtin_popcountll(a);
                    const auto cb = __builtin_popcountll(b);
                    return ca != cb ? ca < cb : a < b;
                });
                by_edge_.push_back(std::move(holding));
            }
            cap_ = static_cast<int>(pivot_edges_.size());
        }

        int solve()
        {
            best_ = 0;
            search(0, 0, 0, 0);
            return best_;
        }

    private:
        [[nodiscard]] int bound(std::size_t next_edge, Mask used, Mask dropped, int count) const
        {
            int room = 0;
            for (std::size_t i = next_edge; i < pivot_edges_.size(); ++i)
                room += !(pivot_edges_[i] & used);
            int best = room;
            for (auto m : at_terminal_)
                best = std::min(best, __builtin_popcountll(m & ~used & ~dropped));
            return count + best;
        }

        void search(std::size_t next_edge, Mask used, Mask dropped, int count)
        {
            best_ = std::max(best_, count);
            if (best_ == cap_ || next_edge == pivot_edges_.size())
                return;
            if (bound(next_edge, used, dropped, count) <= best_)
                return;
            const auto e = pivot_edges_[next_edge];
            if (used & e) {
                search(next_edge + 1, used, dropped, count);
                return;
            }
            for (const auto t : by_edge_[next_edge]) {
                if (t & used)
                    continue;
                search(next_edge + 1, used | t, dropped, count + 1);
                if (best_ == cap_)
                    return;
            }
            search(next_edge + 1, used, dropped | e, count);
        }

        std::vector<Mask> at_terminal_;
        std::vector<Mask> pivot_edges_;
        std::vector<std::vector<Mask>> by_edge_;
        int cap_ = 0;
        int best_ = 0;
    };

} // namespace detail

/// Maximum number of edge-disjoint S-trees, by enumerating minimal trees.
inline int packing_number(const Graph& g, const std::vector<Vertex>& s)
{
    return detail::Packer(g, s, minimal_trees(g, s)).solve();
}

inline int lambda3(const Graph& g)
{
    int best = std::numeric_limits<int>::max();
    for (Vertex a = 0; a < g.order(); ++a)
        for (Vertex b = a + 1; b < g.order(); ++b)
            for (Vertex c = b + 1; c < g.order(); ++c)
                best = std::min(best, packing_number(g, {a, b, c}));
    return best;
}

/// Edge count of the lexicographic product from factor sizes alone.
inline int product_size(int n1, int m1, int n2, int m2) { return n1 * m2 + m1 * n2 * n2; }

} // namespace oracle

#endif // LEXCONN_TESTS_ORACLES_HPP
