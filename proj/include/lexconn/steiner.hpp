#ifndef LEXCONN_STEINER_HPP
#define LEXCONN_STEINER_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "connectivity.hpp"
#include "graph.hpp"

namespace lexconn {

/// A Steiner tree for a terminal set: normalized, sorted edge list.
struct SteinerTree {
    std::vector<Vertex> terminals;
    std::vector<Edge> edges;

    [[nodiscard]] std::vector<Vertex> vertices() const
    {
        std::vector<Vertex> out;
        for (const auto& e : edges) {
            out.push_back(e.u);
            out.push_back(e.v);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        if (out.empty() && !terminals.empty())
            out.push_back(terminals.front());
        return out;
    }

    [[nodiscard]] int degree(Vertex v) const
    {
        return static_cast<int>(std::count_if(edges.begin(), edges.end(), [v](const Edge& e) { return e.touches(v); }));
    }

    [[nodiscard]] int size() const noexcept { return static_cast<int>(edges.size()); }
};

/// Pairwise edge-disjoint S-trees sharing one terminal set.
struct TreePacking {
    std::vector<Vertex> terminals;
    std::vector<SteinerTree> trees;

    [[nodiscard]] int size() const noexcept { return static_cast<int>(trees.size()); }
};

enum class TreeType { TypeI, TypeII };

inline const char* to_string(TreeType t) { return t == TreeType::TypeI ? "I" : "II"; }

class SearchBudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SearchOptions {
    /// Search nodes allowed per packing query before giving up.
    std::uint64_t node_budget = 20'000'000;
    /// Worker threads for the subset loop of lambda_k.
    int jobs = 1;
};

inline std::vector<Edge> normalized_sorted(std::vector<Edge> edges)
{
    for (auto& e : edges)
        e = e.normalized();
    std::sort(edges.begin(), edges.end());
    return edges;
}

inline SteinerTree make_tree(std::vector<Vertex> terminals, std::vector<Edge> edges)
{
    return {std::move(terminals), normalized_sorted(std::move(edges))};
}

inline std::vector<Edge> edges_of(const Graph& g, const EdgeSet& set)
{
    std::vector<Edge> out;
    for (auto i = set.find_first(); i != EdgeSet::npos; i = set.find_next(i))
        out.push_back(g.edges()[i].normalized());
    std::sort(out.begin(), out.end());
    return out;
}

inline EdgeSet edge_set_of(const Graph& g, std::span<const Edge> edges)
{
    auto set = g.empty_edge_set();
    for (const auto& e : edges)
        set.set(static_cast<std::size_t>(g.edge_id(e.u, e.v)));
    return set;
}

namespace detail {

    /// Checks the tree property on an abstract edge list: connected, acyclic,
    /// and covering every terminal.
    inline bool forms_tree_over(std::span<const Edge> edges, std::span<const Vertex> terminals)
    {
        std::vector<Vertex> verts;
        for (const auto& e : edges) {
            verts.push_back(e.u);
            verts.push_back(e.v);
        }
        std::sort(verts.begin(), verts.end());
        verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
        if (edges.empty())
            return terminals.size() <= 1;
        if (edges.size() + 1 != verts.size())
            return false;
        for (auto t : terminals)
            if (!std::binary_search(verts.begin(), verts.end(), t))
                return false;
        // Union-find for connectivity (edge count already rules out cycles once connected).
        std::map<Vertex, Vertex> parent;
        for (auto v : verts)
            parent[v] = v;
        std::function<Vertex(Vertex)> find = [&](Vertex v) {
            while (parent[v] != v)
                v = parent[v] = parent[parent[v]];
            return v;
        };
        std::size_t merges = 0;
        for (const auto& e : edges) {
            const auto a = find(e.u);
            const auto b = find(e.v);
            if (a == b)
                return false;
            parent[a] = b;
            ++merges;
        }
        return merges + 1 == verts.size();
    }

} // namespace detail

/// True iff `edges` (all in G) form a tree whose vertex set contains S.
inline bool is_steiner_tree(const Graph& g, std::span<const Edge> edges, std::span<const Vertex> terminals)
{
    for (const auto& e : edges)
        if (!g.has_edge(e.u, e.v))
            throw GraphError("(" + std::to_string(e.u) + "," + std::to_string(e.v) + ") is not an edge of the host graph");
    for (auto t : terminals)
        if (!g.contains(t))
            throw GraphError("terminal " + std::to_string(t) + " out of range");
    return detail::forms_tree_over(edges, terminals);
}

inline bool is_steiner_tree(const Graph& g, const SteinerTree& t) { return is_steiner_tree(g, t.edges, t.terminals); }

/// Every leaf is a terminal.
inline bool is_reduced(const SteinerTree& t)
{
    for (auto v : t.vertices())
        if (t.degree(v) == 1 && std::find(t.terminals.begin(), t.terminals.end(), v) == t.terminals.end())
            return false;
    return true;
}

/// Strips non-terminal leaves until every leaf is a terminal.
inline SteinerTree reduce_tree(SteinerTree t)
{
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto v : t.vertices()) {
            if (t.degree(v) != 1 || std::find(t.terminals.begin(), t.terminals.end(), v) != t.terminals.end())
                continue;
            std::erase_if(t.edges, [v](const Edge& e) { return e.touches(v); });
            changed = true;
        }
    }
    return t;
}

/// A reduced S-tree inside an arbitrary edge set: spanning tree of the
/// component holding S, pruned. Nullopt when S is split across components.
inline std::optional<SteinerTree> extract_steiner_tree(std::span<const Edge> edges, std::span<const Vertex> terminals)
{
    std::map<Vertex, std::vector<Edge>> adj;
    for (const auto& e : edges) {
        adj[e.u].push_back(e);
        adj[e.v].push_back(e);
    }
    if (terminals.empty())
        return SteinerTree {};
    std::set<Vertex> seen {terminals.front()};
    std::vector<Vertex> stack {terminals.front()};
    std::vector<Edge> tree;
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        auto& list = adj[v];
        std::sort(list.begin(), list.end());
        for (const auto& e : list) {
            auto w = e.other(v);
            if (seen.insert(w).second) {
                tree.push_back(e);
                stack.push_back(w);
            }
        }
    }
    for (auto t : terminals)
        if (!seen.count(t))
            return std::nullopt;
    return reduce_tree(make_tree({terminals.begin(), terminals.end()}, std::move(tree)));
}

/// Type I: a path with both ends in S. Type II: exactly three leaves (all
/// terminals) around one degree-3 vertex. Needs |S| = 3 and a reduced tree.
inline TreeType tree_type(const SteinerTree& t)
{
    if (t.terminals.size() != 3)
        throw std::invalid_argument("tree types are defined for three terminals");
    if (!detail::forms_tree_over(t.edges, t.terminals))
        throw std::invalid_argument("not a tree covering the terminals");
    if (!is_reduced(t))
        throw std::invalid_argument("tree has a leaf outside the terminal set");
    int leaves = 0;
    for (auto v : t.vertices()) {
        const auto d = t.degree(v);
        if (d == 1)
            ++leaves;
        if (d > 3)
            throw std::invalid_argument("reduced 3-terminal tree with a vertex of degree > 3");
    }
    return leaves == 2 ? TreeType::TypeI : TreeType::TypeII;
}

/// Number of trees with at least one edge inside G[S].
inline int count_touching_induced(const Graph& g, const TreePacking& p)
{
    (void)g;
    const auto& s = p.terminals;
    auto inside = [&](Vertex v) { return std::find(s.begin(), s.end(), v) != s.end(); };
    int count = 0;
    for (const auto& t : p.trees)
        if (std::any_of(t.edges.begin(), t.edges.end(), [&](const Edge& e) { return inside(e.u) && inside(e.v); }))
            ++count;
    return count;
}

/// First edge shared by two trees, if any.
inline std::optional<Edge> first_shared_edge(const TreePacking& p)
{
    std::set<Edge> seen;
    for (const auto& t : p.trees)
        for (const auto& e : t.edges)
            if (!seen.insert(e.normalized()).second)
                return e.normalized();
    return std::nullopt;
}

inline bool is_valid_packing(const Graph& g, const TreePacking& p)
{
    for (const auto& t : p.trees)
        if (t.terminals != p.terminals || !is_steiner_tree(g, t))
            return false;
    return !first_shared_edge(p).has_value();
}

namespace detail {

    struct EdgeSetHash {
        std::size_t operator()(const std::pair<int, EdgeSet>& key) const noexcept
        {
            std::size_t h = std::hash<int> {}(key.first);
            std::vector<EdgeSet::block_type> blocks;
            boost::to_block_range(key.second, std::back_inserter(blocks));
            for (auto b : blocks)
                h ^= std::hash<EdgeSet::block_type> {}(b) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            return h;
        }
    };

    /// Enumerates reduced S-trees inside `avail` with at most `cap` edges.
    /// Terminals are attached one at a time by the unique tree path to the
    /// part built so far, so each tree is produced exactly once.
    class TreeEnumerator {
    public:
        TreeEnumerator(const Graph& g, std::span<const Vertex> terminals, const EdgeSet& avail, int cap)
            : g_(g), terminals_(terminals), avail_(avail), cap_(cap), in_tree_(static_cast<std::size_t>(g.order()), 0),
              on_path_(static_cast<std::size_t>(g.order()), 0), is_terminal_(static_cast<std::size_t>(g.order()), 0),
              tree_(g.empty_edge_set())
        {
            for (auto t : terminals)
                is_terminal_[static_cast<std::size_t>(t)] = 1;
        }

        /// Trees containing `seed`, an edge incident to terminals[0].
        std::vector<EdgeSet> containing(EdgeId seed)
        {
            out_.clear();
            const auto e = g_.edge(seed);
            const auto root = terminals_.front();
            const auto other = e.other(root);
            tree_.set(static_cast<std::size_t>(seed));
            size_ = 1;
            mark(root, 1);
            mark(other, 1);
            loose_ = is_terminal_[static_cast<std::size_t>(other)] ? -1 : other;
            attach(1);
            mark(root, 0);
            mark(other, 0);
            tree_.reset(static_cast<std::size_t>(seed));
            size_ = 0;
            return std::move(out_);
        }

        /// All reduced trees.
        std::vector<EdgeSet> all()
        {
            out_.clear();
            const auto root = terminals_.front();
            mark(root, 1);
            loose_ = -1;
            size_ = 0;
            attach(1);
            mark(root, 0);
            return std::move(out_);
        }

        [[nodiscard]] bool capped() const noexcept { return capped_; }

    private:
        void mark(Vertex v, char value) { in_tree_[static_cast<std::size_t>(v)] = value; }

        void attach(std::size_t index)
        {
            while (index < terminals_.size() && in_tree_[static_cast<std::size_t>(terminals_[index])])
                ++index;
            if (index == terminals_.size()) {
                if (loose_ >= 0 && tree_degree(loose_) < 2)
                    return;
                out_.push_back(tree_);
                return;
            }
            const auto start = terminals_[index];
            path_.assign(1, start);
            on_path_[static_cast<std::size_t>(start)] = 1;
            extend(start, index);
            on_path_[static_cast<std::size_t>(start)] = 0;
        }

        [[nodiscard]] int tree_degree(Vertex v) const
        {
            int d = 0;
            for (const auto& inc : g_.neighbors(v))
                if (tree_.test(static_cast<std::size_t>(inc.edge)))
                    ++d;
            return d;
        }

        void extend(Vertex at, std::size_t index)
        {
            for (const auto& inc : g_.neighbors(at)) {
                const auto eid = static_cast<std::size_t>(inc.edge);
                if (!avail_.test(eid) || tree_.test(eid))
                    continue;
                const auto next = inc.to;
                if (in_tree_[static_cast<std::size_t>(next)]) {
                    if (size_ + 1 > cap_) {
                        capped_ = true;
                        continue;
                    }
                    tree_.set(eid);
                    ++size_;
                    auto saved = path_;
                    for (auto v : saved) {
                        mark(v, 1);
                        on_path_[static_cast<std::size_t>(v)] = 0;
                    }
                    attach(index + 1);
                    for (auto v : saved) {
                        mark(v, 0);
                        on_path_[static_cast<std::size_t>(v)] = 1;
                    }
                    path_ = std::move(saved);
                    tree_.reset(eid);
                    --size_;
                } else if (!on_path_[static_cast<std::size_t>(next)]) {
                    if (size_ + 2 > cap_) {
                        capped_ = true;
                        continue;
                    }
                    tree_.set(eid);
                    ++size_;
                    on_path_[static_cast<std::size_t>(next)] = 1;
                    path_.push_back(next);
                    extend(next, index);
                    path_.pop_back();
                    on_path_[static_cast<std::size_t>(next)] = 0;
                    tree_.reset(eid);
                    --size_;
                }
            }
        }

        const Graph& g_;
        std::span<const Vertex> terminals_;
        const EdgeSet& avail_;
        int cap_;
        bool capped_ = false;
        std::vector<char> in_tree_;
        std::vector<char> on_path_;
        std::vector<char> is_terminal_;
        EdgeSet tree_;
        int size_ = 0;
        Vertex loose_ = -1;
        Path path_;
        std::vector<EdgeSet> out_;
    };

    inline void sort_candidates(std::vector<EdgeSet>& trees)
    {
        std::sort(trees.begin(), trees.end(), [](const EdgeSet& a, const EdgeSet& b) {
            const auto ca = a.count();
            const auto cb = b.count();
            if (ca != cb)
                return ca < cb;
            return a < b;
        });
    }

    /// Fewest edges of any S-tree inside `avail` (three terminals: min over
    /// a meeting vertex of summed distances; otherwise a distance bound).
    inline int min_tree_size(const Graph& g, std::span<const Vertex> terminals, const EdgeSet& avail)
    {
        std::vector<std::vector<int>> dist;
        for (auto t : terminals)
            dist.push_back(bfs_distances(g, t, &avail));
        if (terminals.size() == 3) {
            int best = std::numeric_limits<int>::max();
            for (Vertex v = 0; v < g.order(); ++v) {
                int sum = 0;
                bool ok = true;
                for (const auto& d : dist) {
                    if (d[static_cast<std::size_t>(v)] < 0) {
                        ok = false;
                        break;
                    }
                    sum += d[static_cast<std::size_t>(v)];
                }
                if (ok)
                    best = std::min(best, sum);
            }
            return best;
        }
        int best = static_cast<int>(terminals.size()) - 1;
        for (std::size_t i = 1; i < terminals.size(); ++i) {
            const auto d = dist[0][static_cast<std::size_t>(terminals[i])];
            if (d < 0)
                return std::numeric_limits<int>::max();
            best = std::max(best, d);
        }
        return best;
    }

    /// Branch-and-bound search for k edge-disjoint reduced S-trees. Trees
    /// are ordered by their smallest edge at the root terminal: at each
    /// node the smallest free root edge either starts the next tree or is
    /// discarded for good.
    class PackingSearch {
    public:
        PackingSearch(const Graph& g, std::span<const Vertex> terminals, const EdgeSet& allowed, std::uint64_t budget)
            : g_(g), budget_(budget), allowed_(allowed)
        {
            terminals_.assign(terminals.begin(), terminals.end());
            // Root at the terminal with fewest usable edges.
            auto usable = [&](Vertex v) {
                int d = 0;
                for (const auto& inc : g_.neighbors(v))
                    if (allowed_.test(static_cast<std::size_t>(inc.edge)))
                        ++d;
                return d;
            };
            std::stable_sort(terminals_.begin(), terminals_.end(), [&](Vertex a, Vertex b) { return usable(a) < usable(b); });
        }

        std::optional<std::vector<EdgeSet>> find(int k)
        {
            k_ = k;
            if (k <= 0)
                return std::vector<EdgeSet> {};
            const int floor_cap = min_tree_size(g_, terminals_, allowed_);
            if (floor_cap == std::numeric_limits<int>::max())
                return std::nullopt;
            const int ceiling = std::max(g_.order() - 1, floor_cap);
            for (cap_ = floor_cap;; ++cap_) {
                capped_ = false;
                failed_.clear();
                chosen_.clear();
                if (recurse(0, allowed_))
                    return chosen_;
                if (!capped_ || cap_ >= ceiling)
                    return std::nullopt;
            }
        }

        [[nodiscard]] std::uint64_t nodes() const noexcept { return nodes_; }

    private:
        bool prune(const EdgeSet& avail, int need)
        {
            for (auto t : terminals_) {
                int d = 0;
                for (const auto& inc : g_.neighbors(t))
                    if (avail.test(static_cast<std::size_t>(inc.edge)))
                        ++d;
                if (d < need)
                    return true;
            }
            for (std::size_t i = 1; i < terminals_.size(); ++i)
                if (local_edge_connectivity(g_, terminals_[0], terminals_[i], &avail, need) < need)
                    return true;
            if (need >= 2) {
                const auto smallest = min_tree_size(g_, terminals_, avail);
                if (smallest == std::numeric_limits<int>::max()
                    || static_cast<std::uint64_t>(smallest) * static_cast<std::uint64_t>(need) > avail.count())
                    return true;
            }
            return false;
        }

        bool recurse(int depth, const EdgeSet& avail)
        {
            const int need = k_ - depth;
            if (need == 0)
                return true;
            if (++nodes_ > budget_)
                throw SearchBudgetExceeded("packing search exceeded " + std::to_string(budget_) + " nodes");
            std::pair<int, EdgeSet> key {need, avail};
            if (failed_.count(key))
                return false;
            if (prune(avail, need)) {
                remember(std::move(key));
                return false;
            }
            const auto root = terminals_.front();
            EdgeId seed = -1;
            for (const auto& inc : g_.neighbors(root)) {
                if (avail.test(static_cast<std::size_t>(inc.edge)) && (seed < 0 || inc.edge < seed))
                    seed = inc.edge;
            }
            if (seed < 0)
                return false;

            TreeEnumerator enumerator(g_, terminals_, avail, cap_);
            auto candidates = enumerator.containing(seed);
            capped_ = capped_ || enumerator.capped();
            sort_candidates(candidates);
            for (const auto& tree : candidates) {
                EdgeSet rest = avail - tree;
                chosen_.push_back(tree);
                if (recurse(depth + 1, rest))
                    return true;
                chosen_.pop_back();
            }
            EdgeSet without = avail;
            without.reset(static_cast<std::size_t>(seed));
            if (recurse(depth, without))
                return true;
            remember(std::move(key));
            return false;
        }

        void remember(std::pair<int, EdgeSet> key)
        {
            if (failed_.size() < max_memo)
                failed_.insert(std::move(key));
        }

        static constexpr std::size_t max_memo = 1'000'000;

        const Graph& g_;
        std::vector<Vertex> terminals_;
        std::uint64_t budget_;
        const EdgeSet& allowed_;
        std::uint64_t nodes_ = 0;
        int k_ = 0;
        int cap_ = 0;
        bool capped_ = false;
        std::vector<EdgeSet> chosen_;
        std::unordered_set<std::pair<int, EdgeSet>, EdgeSetHash> failed_;
    };

    inline void check_terminals(const Graph& g, std::span<const Vertex> terminals)
    {
        if (terminals.size() < 2)
            throw std::invalid_argument("terminal set needs at least two vertices");
        std::vector<Vertex> sorted(terminals.begin(), terminals.end());
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("terminal set has a repeated vertex");
        for (auto t : terminals)
            if (!g.contains(t))
                throw GraphError("terminal " + std::to_string(t) + " out of range");
    }

    inline TreePacking to_packing(const Graph& g, std::span<const Vertex> terminals, const std::vector<EdgeSet>& sets)
    {
        TreePacking p;
        p.terminals.assign(terminals.begin(), terminals.end());
        for (const auto& s : sets)
            p.trees.push_back({p.terminals, edges_of(g, s)});
        return p;
    }

} // namespace detail

/// Upper bound on the number of edge-disjoint S-trees using only `allowed`
/// edges: the smallest terminal-separating cut, and for three terminals
/// floor(crossing/2) over partitions placing one terminal per part (exhaustive
/// up to 12 vertices, singleton pairs beyond).
inline int packing_upper_bound(const Graph& g, std::span<const Vertex> terminals, const EdgeSet* allowed = nullptr)
{
    detail::check_terminals(g, terminals);
    const EdgeSet all = allowed ? *allowed : g.all_edges();
    int bound = std::numeric_limits<int>::max();
    for (auto t : terminals) {
        int d = 0;
        for (const auto& inc : g.neighbors(t))
            if (all.test(static_cast<std::size_t>(inc.edge)))
                ++d;
        bound = std::min(bound, d);
    }
    for (std::size_t i = 1; i < terminals.size() && bound > 0; ++i)
        bound = std::min(bound, local_edge_connectivity(g, terminals[0], terminals[i], &all, bound));
    if (terminals.size() != 3 || bound <= 1)
        return bound;

    auto crossing = [&](const std::vector<int>& part) {
        int cross = 0;
        for (auto i = all.find_first(); i != EdgeSet::npos; i = all.find_next(i)) {
            const auto& e = g.edges()[i];
            if (part[static_cast<std::size_t>(e.u)] != part[static_cast<std::size_t>(e.v)])
                ++cross;
        }
        return cross;
    };
    std::vector<int> part(static_cast<std::size_t>(g.order()), 2);
    std::vector<Vertex> free;
    for (Vertex v = 0; v < g.order(); ++v)
        if (std::find(terminals.begin(), terminals.end(), v) == terminals.end())
            free.push_back(v);
    if (g.order() <= 12) {
        part[static_cast<std::size_t>(terminals[0])] = 0;
        part[static_cast<std::size_t>(terminals[1])] = 1;
        part[static_cast<std::size_t>(terminals[2])] = 2;
        std::vector<int> digits(free.size(), 0);
        while (true) {
            for (std::size_t i = 0; i < free.size(); ++i)
                part[static_cast<std::size_t>(free[i])] = digits[i];
            bound = std::min(bound, crossing(part) / 2);
            std::size_t pos = 0;
            while (pos < digits.size() && digits[pos] == 2)
                digits[pos++] = 0;
            if (pos == digits.size())
                break;
            ++digits[pos];
        }
    } else {
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b) {
                std::fill(part.begin(), part.end(), 2);
                part[static_cast<std::size_t>(terminals[static_cast<std::size_t>(a)])] = 0;
                part[static_cast<std::size_t>(terminals[static_cast<std::size_t>(b)])] = 1;
                bound = std::min(bound, crossing(part) / 2);
            }
    }
    return bound;
}

/// k edge-disjoint S-trees inside `allowed`, or nullopt when none exist.
/// Throws SearchBudgetExceeded when the node budget runs out first.
inline std::optional<TreePacking> find_packing(const Graph& g, std::span<const Vertex> terminals, int k,
    const SearchOptions& opts = {}, const EdgeSet* allowed = nullptr)
{
    detail::check_terminals(g, terminals);
    if (k <= 0)
        return TreePacking {{terminals.begin(), terminals.end()}, {}};
    const EdgeSet all = allowed ? *allowed : g.all_edges();
    if (k > packing_upper_bound(g, terminals, &all))
        return std::nullopt;
    detail::PackingSearch search(g, terminals, all, opts.node_budget);
    auto sets = search.find(k);
    if (!sets)
        return std::nullopt;
    return detail::to_packing(g, terminals, *sets);
}

struct PackingResult {
    int value = 0;
    TreePacking witness;
};

/// Exact maximum number of edge-disjoint S-trees with a witness packing.
inline PackingResult steiner_packing_number(const Graph& g, std::span<const Vertex> terminals, const SearchOptions& opts = {},
    const EdgeSet* allowed = nullptr)
{
    detail::check_terminals(g, terminals);
    const EdgeSet all = allowed ? *allowed : g.all_edges();
    const int bound = packing_upper_bound(g, terminals, &all);
    PackingResult best {0, {{terminals.begin(), terminals.end()}, {}}};
    if (bound == 0)
        return best;
    if (auto top = find_packing(g, terminals, bound, opts, &all))
        return {bound, std::move(*top)};
    for (int k = 1; k < bound; ++k) {
        auto p = find_packing(g, terminals, k, opts, &all);
        if (!p)
            break;
        best = {k, std::move(*p)};
    }
    return best;
}

struct LambdaResult {
    int value = 0;
    /// A minimizing terminal set (lexicographically first).
    std::vector<Vertex> terminals;
    TreePacking witness;
};

namespace detail {

    inline std::vector<std::vector<Vertex>> k_subsets(int n, int k)
    {
        std::vector<std::vector<Vertex>> out;
        std::vector<Vertex> cur(static_cast<std::size_t>(k));
        std::iota(cur.begin(), cur.end(), 0);
        while (true) {
            out.push_back(cur);
            int i = k - 1;
            while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + i)
                --i;
            if (i < 0)
                break;
            ++cur[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < k; ++j)
                cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
        }
        return out;
    }

    inline int lambda_k_value(const Graph& g, const std::vector<std::vector<Vertex>>& subsets, const SearchOptions& opts)
    {
        std::vector<int> bounds(subsets.size());
        int best = std::numeric_limits<int>::max();
        for (std::size_t i = 0; i < subsets.size(); ++i) {
            bounds[i] = packing_upper_bound(g, subsets[i]);
            best = std::min(best, bounds[i]);
        }
        std::vector<std::size_t> order(subsets.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return bounds[a] < bounds[b]; });

        std::atomic<int> shared_best {best};
        std::atomic<std::size_t> next {0};
        std::exception_ptr failure;
        std::mutex failure_lock;
        auto worker = [&] {
            try {
                for (auto pos = next++; pos < order.size(); pos = next++) {
                    const auto& s = subsets[order[pos]];
                    int target = shared_best.load();
                    if (target == 0)
                        return;
                    if (find_packing(g, s, target, opts))
                        continue;
                    int value = 0;
                    for (int k = 1; k < target; ++k) {
                        if (!find_packing(g, s, k, opts))
                            break;
                        value = k;
                    }
                    int cur = shared_best.load();
                    while (value < cur && !shared_best.compare_exchange_weak(cur, value)) {
                    }
                }
            } catch (...) {
                std::lock_guard lock(failure_lock);
                if (!failure)
                    failure = std::current_exception();
                next = order.size();
            }
        };
        const int jobs = std::max(1, opts.jobs);
        if (jobs == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (int j = 0; j < jobs; ++j)
                pool.emplace_back(worker);
            for (auto& t : pool)
                t.join();
        }
        if (failure)
            std::rethrow_exception(failure);
        return shared_best.load();
    }

} // namespace detail

/// Generalized k-edge-connectivity: min over k-subsets S of the packing
/// number. Zero for disconnected graphs. Only k = 2, 3 are exercised by the
/// test suite; larger k is experimental.
inline int lambda_k(const Graph& g, int k, const SearchOptions& opts = {})
{
    if (k < 2 || k > g.order())
        throw std::invalid_argument("lambda_k needs 2 <= k <= n, got k=" + std::to_string(k) + " n=" + std::to_string(g.order()));
    if (!is_connected(g))
        return 0;
    return detail::lambda_k_value(g, detail::k_subsets(g.order(), k), opts);
}

inline LambdaResult lambda_k_witness(const Graph& g, int k, const SearchOptions& opts = {})
{
    const int value = lambda_k(g, k, opts);
    for (const auto& s : detail::k_subsets(g.order(), k)) {
        if (value > 0 && find_packing(g, s, value + 1, opts))
            continue;
        if (value == 0) {
            // Only disconnected graphs reach zero; pick S straddling two components.
            const auto comp = components(g);
            std::set<int> seen;
            for (auto v : s)
                seen.insert(comp[static_cast<std::size_t>(v)]);
            if (seen.size() < 2)
                continue;
        }
        auto packing = find_packing(g, s, value, opts);
        return {value, s, std::move(*packing)};
    }
    throw std::logic_error("no terminal set attains lambda_k");
}

/// Rewrites a packing for |S| = 3 so that at most two trees use an edge of
/// G[S]. Three offending trees are replaced by three edge-disjoint S-trees
/// re-searched inside their union (widened to unused edges if needed), one
/// of which avoids G[S].
inline TreePacking normalize_packing(const Graph& g, TreePacking p, const SearchOptions& opts = {})
{
    if (p.terminals.size() != 3)
        throw std::invalid_argument("packing normalization needs three terminals");
    if (!is_valid_packing(g, p))
        throw std::invalid_argument("normalize_packing: input is not a valid packing");
    const auto& s = p.terminals;
    auto inside = [&](const Edge& e) {
        return std::find(s.begin(), s.end(), e.u) != s.end() && std::find(s.begin(), s.end(), e.v) != s.end();
    };
    auto touches = [&](const SteinerTree& t) { return std::any_of(t.edges.begin(), t.edges.end(), inside); };

    std::vector<std::size_t> offending;
    for (std::size_t i = 0; i < p.trees.size(); ++i)
        if (touches(p.trees[i]))
            offending.push_back(i);
    if (offending.size() <= 2)
        return p;

    auto induced = g.empty_edge_set();
    for (EdgeId id = 0; id < g.size(); ++id)
        if (inside(g.edge(id)))
            induced.set(static_cast<std::size_t>(id));

    auto unions = g.empty_edge_set();
    for (std::size_t i = 0; i < 3; ++i)
        unions |= edge_set_of(g, p.trees[offending[i]].edges);
    auto free_edges = g.all_edges();
    for (const auto& t : p.trees)
        free_edges -= edge_set_of(g, t.edges);

    for (const EdgeSet& region : {unions, unions | free_edges}) {
        EdgeSet clean = region - induced;
        if (!clean.any())
            continue;
        detail::TreeEnumerator enumerator(g, s, clean, g.order() - 1);
        auto candidates = enumerator.all();
        detail::sort_candidates(candidates);
        for (const auto& first : candidates) {
            EdgeSet rest = region - first;
            auto pair = find_packing(g, s, 2, opts, &rest);
            if (!pair)
                continue;
            p.trees[offending[0]] = {s, edges_of(g, first)};
            p.trees[offending[1]] = pair->trees[0];
            p.trees[offending[2]] = pair->trees[1];
            return p;
        }
    }
    throw std::logic_error("normalize_packing: no replacement found for three trees meeting G[S]");
}

} // namespace lexconn

#endif // LEXCONN_STEINER_HPP
