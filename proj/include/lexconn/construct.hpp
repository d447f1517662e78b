#ifndef LEXCONN_CONSTRUCT_HPP
#define LEXCONN_CONSTRUCT_HPP

#include <array>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "connectivity.hpp"
#include "graph.hpp"
#include "product.hpp"
#include "steiner.hpp"

namespace lexconn {

/// Bad input to a construction (disconnected G, too few vertices, repeated terminals).
class ConstructionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A construction produced trees that fail verification. Never expected.
class ConstructionDefect : public std::logic_error {
public:
    ConstructionDefect(const std::string& what, std::optional<Edge> edge = std::nullopt) : std::logic_error(what), edge_(edge) {}
    [[nodiscard]] std::optional<Edge> edge() const noexcept { return edge_; }

private:
    std::optional<Edge> edge_;
};

enum class TerminalLayout { SameLayer, TwoInOneLayer, ThreeLayers };

enum class LayoutSubcase {
    None,
    /// Two share a layer and z's H-coordinate equals one of theirs.
    ZPrimeInXY,
    ZPrimeOutside,
    /// Three layers, H-coordinates all equal / exactly two equal / distinct.
    ProjectionsEqual,
    TwoProjectionsEqual,
    ProjectionsDistinct,
};

inline const char* to_string(TerminalLayout l)
{
    switch (l) {
    case TerminalLayout::SameLayer:
        return "same-layer";
    case TerminalLayout::TwoInOneLayer:
        return "two-in-one-layer";
    case TerminalLayout::ThreeLayers:
        return "three-layers";
    }
    return "?";
}

inline const char* to_string(LayoutSubcase s)
{
    switch (s) {
    case LayoutSubcase::None:
        return "none";
    case LayoutSubcase::ZPrimeInXY:
        return "z-projection-in-xy";
    case LayoutSubcase::ZPrimeOutside:
        return "z-projection-outside";
    case LayoutSubcase::ProjectionsEqual:
        return "projections-equal";
    case LayoutSubcase::TwoProjectionsEqual:
        return "two-projections-equal";
    case LayoutSubcase::ProjectionsDistinct:
        return "projections-distinct";
    }
    return "?";
}

/// Terminals in their construction roles x, y, z.
///  SameLayer: sorted by H-coordinate.
///  TwoInOneLayer: x, y share a layer, z does not; when z's coordinate
///    matches one of them, that one is x.
///  ThreeLayers: when exactly two coordinates agree those two are x, y.
struct LayerConfig {
    std::array<ProductVertex, 3> roles {};
    TerminalLayout layout = TerminalLayout::SameLayer;
    LayoutSubcase subcase = LayoutSubcase::None;
};

inline LayerConfig classify_terminals(const ProductGraph& p, std::array<Vertex, 3> s)
{
    if (s[0] == s[1] || s[0] == s[2] || s[1] == s[2])
        throw ConstructionError("terminals must be distinct");
    std::array<ProductVertex, 3> c {p.coords(s[0]), p.coords(s[1]), p.coords(s[2])};
    std::sort(c.begin(), c.end());
    LayerConfig cfg;
    if (c[0].g == c[2].g) {
        cfg.layout = TerminalLayout::SameLayer;
        std::sort(c.begin(), c.end(), [](auto a, auto b) { return a.h < b.h; });
        cfg.roles = c;
        return cfg;
    }
    if (c[0].g == c[1].g || c[1].g == c[2].g) {
        cfg.layout = TerminalLayout::TwoInOneLayer;
        ProductVertex x = c[0].g == c[1].g ? c[0] : c[1];
        ProductVertex y = c[0].g == c[1].g ? c[1] : c[2];
        ProductVertex z = c[0].g == c[1].g ? c[2] : c[0];
        if (z.h == y.h)
            std::swap(x, y);
        cfg.roles = {x, y, z};
        cfg.subcase = z.h == x.h ? LayoutSubcase::ZPrimeInXY : LayoutSubcase::ZPrimeOutside;
        return cfg;
    }
    cfg.layout = TerminalLayout::ThreeLayers;
    const bool e01 = c[0].h == c[1].h;
    const bool e02 = c[0].h == c[2].h;
    const bool e12 = c[1].h == c[2].h;
    if (e01 && e12) {
        cfg.subcase = LayoutSubcase::ProjectionsEqual;
        cfg.roles = c;
    } else if (e01 || e02 || e12) {
        cfg.subcase = LayoutSubcase::TwoProjectionsEqual;
        if (e01)
            cfg.roles = {c[0], c[1], c[2]};
        else if (e02)
            cfg.roles = {c[0], c[2], c[1]};
        else
            cfg.roles = {c[1], c[2], c[0]};
    } else {
        cfg.subcase = LayoutSubcase::ProjectionsDistinct;
        cfg.roles = c;
    }
    return cfg;
}

/// The n2 paths x - (u2, v) - y, one per H-vertex v. x and y lie in H(u1)
/// and u1u2 is a G-edge. Throws if a needed edge is in `forbidden`.
inline std::vector<Path> xy_fan(const ProductGraph& p, Vertex u1, Vertex u2, Vertex x, Vertex y, const std::set<Edge>& forbidden = {})
{
    if (!p.first().has_edge(u1, u2))
        throw ConstructionError("xy_fan: " + std::to_string(u1) + std::to_string(u2) + " is not a G-edge");
    if (p.coords(x).g != u1 || p.coords(y).g != u1 || x == y)
        throw ConstructionError("xy_fan: x and y must be distinct vertices of H(u1)");
    std::vector<Path> out;
    for (Vertex v = 0; v < p.n2(); ++v) {
        const auto mid = p.flat(u2, v);
        for (const auto& e : {make_edge(x, mid), make_edge(mid, y)})
            if (forbidden.count(e))
                throw ConstructionDefect("xy_fan: edge already consumed", e);
        out.push_back({x, mid, y});
    }
    return out;
}

/// n2 vertex-disjoint paths from H(route[from]) to H(route[to]) over
/// three-type edges along the G-path `route`: path i visits
/// (route[j], v_{i + ((j - from) mod 2)}), coordinates taken mod n2.
inline std::vector<Path> zigzag_linkage(const ProductGraph& p, std::span<const Vertex> route, std::size_t from, std::size_t to)
{
    if (from > to)
        throw std::invalid_argument("zigzag_linkage: from index after to index");
    if (to >= route.size())
        throw std::invalid_argument("zigzag_linkage: index past the end of the route");
    for (std::size_t j = from; j < to; ++j)
        if (!p.first().has_edge(route[j], route[j + 1]))
            throw ConstructionError("zigzag_linkage: route is not a G-path");
    const int n2 = p.n2();
    std::vector<Path> out;
    for (int i = 0; i < n2; ++i) {
        Path path;
        for (std::size_t j = from; j <= to; ++j)
            path.push_back(p.flat(route[j], (i + static_cast<int>((j - from) % 2)) % n2));
        out.push_back(std::move(path));
    }
    return out;
}

struct GroupReport {
    int stage = 0;
    std::string pattern;
    int trees = 0;
    /// Pattern rejected by the verifier; trees came from restricted search.
    bool fallback = false;
    std::string rejected;
};

struct ConstructionResult {
    TreePacking packing;
    /// Stage (1 or 2) of each tree in `packing`.
    std::vector<int> stages;
    LayerConfig config;
    int ell1 = 0;
    int ell2 = 0;
    std::vector<GroupReport> groups;
    std::vector<std::string> notes;

    [[nodiscard]] int fallback_groups() const
    {
        return static_cast<int>(std::count_if(groups.begin(), groups.end(), [](const GroupReport& g) { return g.fallback; }));
    }
};

struct TreeTypeUsage {
    int one = 0;
    int two = 0;
    int three = 0;
};

struct VerificationReport {
    bool valid = true;
    int size = 0;
    std::vector<std::string> problems;
    std::optional<Edge> shared_edge;
    std::vector<TreeTypeUsage> usage;
};

/// Checks every tree is an S-tree of the product, the trees are pairwise
/// edge-disjoint, and (when stages are given) that stage-1 trees use only
/// one-/two-type edges and stage-2 trees only one-/three-type edges.
inline VerificationReport verify_packing(const ProductGraph& p, const TreePacking& pack, std::span<const int> stages = {})
{
    VerificationReport r;
    r.size = pack.size();
    std::map<Edge, int> owner;
    for (int i = 0; i < pack.size(); ++i) {
        const auto& t = pack.trees[static_cast<std::size_t>(i)];
        TreeTypeUsage use;
        bool edges_ok = true;
        for (const auto& e : t.edges) {
            if (!p.graph().has_edge(e.u, e.v)) {
                r.problems.push_back("tree " + std::to_string(i) + ": (" + std::to_string(e.u) + "," + std::to_string(e.v)
                    + ") is not a product edge");
                edges_ok = false;
                continue;
            }
            switch (p.classify(e)) {
            case EdgeType::OneType:
                ++use.one;
                break;
            case EdgeType::TwoType:
                ++use.two;
                break;
            case EdgeType::ThreeType:
                ++use.three;
                break;
            }
            auto [it, fresh] = owner.emplace(e.normalized(), i);
            if (!fresh) {
                if (!r.shared_edge)
                    r.shared_edge = e.normalized();
                r.problems.push_back("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") shared by trees "
                    + std::to_string(it->second) + " and " + std::to_string(i));
            }
        }
        r.usage.push_back(use);
        if (t.terminals != pack.terminals)
            r.problems.push_back("tree " + std::to_string(i) + ": terminal set differs from the packing's");
        if (edges_ok && !is_steiner_tree(p.graph(), t.edges, pack.terminals))
            r.problems.push_back("tree " + std::to_string(i) + ": not a tree spanning the terminals");
        if (i < static_cast<int>(stages.size())) {
            const auto stage = stages[static_cast<std::size_t>(i)];
            if (stage == 1 && use.three > 0)
                r.problems.push_back("tree " + std::to_string(i) + ": stage-1 tree uses three-type edges");
            if (stage == 2 && use.two > 0)
                r.problems.push_back("tree " + std::to_string(i) + ": stage-2 tree uses two-type edges");
        }
    }
    r.valid = r.problems.empty();
    return r;
}

/// Builds lambda3(H) + lambda3(G)*|V(H)| edge-disjoint S-trees in G∘H for
/// any three terminals. Factor witnesses (path systems, factor packings)
/// come from exact search and are cached, so one constructor serves many
/// terminal sets. Not thread-safe; use one instance per thread.
class PackingConstructor {
public:
    explicit PackingConstructor(Graph g, Graph h, SearchOptions opts = {}) : product_(std::move(g), std::move(h)), opts_(opts)
    {
        const auto& gf = product_.first();
        const auto& hf = product_.second();
        if (hf.order() < 2)
            throw ConstructionError("H must be non-trivial (at least two vertices)");
        if (gf.order() < 3)
            throw ConstructionError("G needs at least three vertices for lambda3(G) to be defined");
        if (!is_connected(gf))
            throw ConstructionError("G must be connected");
        ell1_ = lambda_k(gf, 3, opts_);
        if (hf.order() < 3) {
            ell2_ = 0;
            notes_.push_back("|V(H)| < 3: lambda3(H) taken as 0, stage 1 skipped");
        } else if (!is_connected(hf)) {
            ell2_ = 0;
            notes_.push_back("H disconnected: lambda3(H) = 0, stage 1 skipped");
        } else {
            ell2_ = lambda_k(hf, 3, opts_);
        }
    }

    [[nodiscard]] const ProductGraph& product() const noexcept { return product_; }
    [[nodiscard]] int ell1() const noexcept { return ell1_; }
    [[nodiscard]] int ell2() const noexcept { return ell2_; }
    [[nodiscard]] int target() const noexcept { return ell2_ + ell1_ * product_.n2(); }

    ConstructionResult construct(std::array<Vertex, 3> terminals) const;

private:
    friend class ConstructionRun;

    const PathSystem& g_paths(Vertex a, Vertex b) const
    {
        auto key = std::make_pair(a, b);
        auto it = g_paths_.find(key);
        if (it == g_paths_.end())
            it = g_paths_.emplace(key, disjoint_paths(product_.first(), a, b, ell1_)).first;
        return it->second;
    }

    const PathSystem& h_paths(Vertex a, Vertex b) const
    {
        auto key = std::make_pair(a, b);
        auto it = h_paths_.find(key);
        if (it == h_paths_.end())
            it = h_paths_.emplace(key, disjoint_paths(product_.second(), a, b, ell2_)).first;
        return it->second;
    }

    const TreePacking& g_trees(std::array<Vertex, 3> s) const { return factor_trees(product_.first(), s, ell1_, g_trees_, false); }
    const TreePacking& h_trees(std::array<Vertex, 3> s) const { return factor_trees(product_.second(), s, ell2_, h_trees_, true); }

    const TreePacking& factor_trees(const Graph& f, std::array<Vertex, 3> s, int k, std::map<std::array<Vertex, 3>, TreePacking>& cache,
        bool normalize) const
    {
        std::sort(s.begin(), s.end());
        auto it = cache.find(s);
        if (it != cache.end())
            return it->second;
        auto found = find_packing(f, s, k, opts_);
        if (!found)
            throw ConstructionDefect("factor packing of size " + std::to_string(k) + " not found");
        if (normalize && k >= 2)
            *found = normalize_packing(f, std::move(*found), opts_);
        return cache.emplace(s, std::move(*found)).first->second;
    }

    ProductGraph product_;
    SearchOptions opts_;
    int ell1_ = 0;
    int ell2_ = 0;
    std::vector<std::string> notes_;
    mutable std::map<std::pair<Vertex, Vertex>, PathSystem> g_paths_;
    mutable std::map<std::pair<Vertex, Vertex>, PathSystem> h_paths_;
    mutable std::map<std::array<Vertex, 3>, TreePacking> g_trees_;
    mutable std::map<std::array<Vertex, 3>, TreePacking> h_trees_;
};

/// One construction for one terminal set: proposes trees group by group,
/// verifies each group against the edges consumed so far, and falls back
/// to a search restricted to the group's edge types and layers when a
/// pattern does not verify.
class ConstructionRun {
public:
    ConstructionRun(const PackingConstructor& owner, std::array<Vertex, 3> terminals)
        : c_(owner), p_(owner.product_), g_(owner.product_.first()), h_(owner.product_.second()), n2_(owner.product_.n2())
    {
        for (auto t : terminals)
            if (!p_.graph().contains(t))
                throw ConstructionError("terminal " + std::to_string(t) + " out of range");
        cfg_ = classify_terminals(p_, terminals);
        for (std::size_t i = 0; i < 3; ++i)
            roles_[i] = p_.flat(cfg_.roles[i]);
        terminals_.assign(terminals.begin(), terminals.end());
        result_.config = cfg_;
        result_.ell1 = owner.ell1_;
        result_.ell2 = owner.ell2_;
        result_.notes = owner.notes_;
        result_.packing.terminals = terminals_;
        used_ = p_.graph().empty_edge_set();
    }

    ConstructionResult run()
    {
        const auto fresh = result_;
        try {
            if (c_.ell2_ > 0)
                stage_one();
            stage_two();
        } catch (const ConstructionDefect& first) {
            // Stage I choices can block Stage II; place Stage II first and fit Stage I around it.
            result_ = fresh;
            used_ = p_.graph().empty_edge_set();
            stage_two();
            stage_two_placed_ = true;
            if (c_.ell2_ > 0)
                stage_one();
            result_.notes.push_back(std::string("stage 2 placed first; stage-1-first attempt failed: ") + first.what());
        }
        const auto report = verify_packing(p_, result_.packing, result_.stages);
        if (!report.valid)
            throw ConstructionDefect("construction failed verification: " + report.problems.front(), report.shared_edge);
        if (result_.packing.size() != c_.target())
            throw ConstructionDefect("construction produced " + std::to_string(result_.packing.size()) + " trees, expected "
                + std::to_string(c_.target()));
        return std::move(result_);
    }

private:
    using EdgeList = std::vector<Edge>;

    struct Group {
        std::string pattern;
        std::vector<EdgeList> trees;
        /// G-edges the group's trees live over (stage 2).
        std::vector<Edge> g_edges;
        bool pattern_ok = true;
        /// Tried in order when the main pattern does not verify.
        std::vector<Group> alternatives {};
    };

    Vertex at(Vertex g, Vertex h) const { return p_.flat(g, h); }
    Vertex x() const { return roles_[0]; }
    Vertex y() const { return roles_[1]; }
    Vertex z() const { return roles_[2]; }
    ProductVertex cx() const { return cfg_.roles[0]; }
    ProductVertex cy() const { return cfg_.roles[1]; }
    ProductVertex cz() const { return cfg_.roles[2]; }

    static void add_path(EdgeList& out, const Path& path)
    {
        for (std::size_t i = 0; i + 1 < path.size(); ++i)
            out.push_back({path[i], path[i + 1]});
    }

    /// Copy of a G-path inside the G-layer at H-coordinate h.
    void add_g_path_in_layer(EdgeList& out, const Path& gpath, Vertex h) const
    {
        for (std::size_t i = 0; i + 1 < gpath.size(); ++i)
            out.push_back({at(gpath[i], h), at(gpath[i + 1], h)});
    }

    /// Copy of H-edges inside H(u).
    void add_h_edges_in_layer(EdgeList& out, std::span<const Edge> hedges, Vertex u) const
    {
        for (const auto& e : hedges)
            out.push_back({at(u, e.u), at(u, e.v)});
    }

    void add_g_edges_in_layer(EdgeList& out, std::span<const Edge> gedges, Vertex h) const
    {
        for (const auto& e : gedges)
            out.push_back({at(e.u, h), at(e.v, h)});
    }

    static std::vector<Edge> path_edges(const Path& path)
    {
        std::vector<Edge> out;
        for (std::size_t i = 0; i + 1 < path.size(); ++i)
            out.push_back(make_edge(path[i], path[i + 1]));
        return out;
    }

    /// The unique path between a and b inside a tree given by its edges.
    static Path tree_path(std::span<const Edge> tree, Vertex a, Vertex b)
    {
        std::map<Vertex, std::vector<Vertex>> adj;
        for (const auto& e : tree) {
            adj[e.u].push_back(e.v);
            adj[e.v].push_back(e.u);
        }
        std::map<Vertex, Vertex> parent {{a, a}};
        std::vector<Vertex> stack {a};
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            for (auto w : adj[v])
                if (!parent.count(w)) {
                    parent[w] = v;
                    stack.push_back(w);
                }
        }
        if (!parent.count(b))
            return {};
        Path out {b};
        while (out.back() != a)
            out.push_back(parent[out.back()]);
        std::reverse(out.begin(), out.end());
        return out;
    }

    static std::vector<Vertex> neighbors_in(std::span<const Edge> tree, Vertex v)
    {
        std::vector<Vertex> out;
        for (const auto& e : tree)
            if (e.touches(v))
                out.push_back(e.other(v));
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Lowest neighbor of v in graph f outside `exclude`.
    static std::optional<Vertex> spare_neighbor(const Graph& f, Vertex v, const std::set<Vertex>& exclude)
    {
        for (const auto& inc : f.neighbors(v))
            if (!exclude.count(inc.to))
                return inc.to;
        return std::nullopt;
    }

    // ---- verification and fallback -------------------------------------

    bool allowed_type(int stage, EdgeType t) const { return stage == 1 ? t != EdgeType::ThreeType : t != EdgeType::TwoType; }

    /// Turns proposed edge lists into reduced S-trees and checks them against
    /// consumed edges and the stage's edge types. Commits on success.
    bool try_commit(const Group& group, int stage)
    {
        rejection_.clear();
        if (!group.pattern_ok) {
            rejection_ = "no spare neighbor";
            return false;
        }
        std::vector<SteinerTree> trees;
        auto claimed = used_;
        for (const auto& proposal : group.trees) {
            EdgeList edges;
            for (const auto& e : proposal) {
                if (!p_.graph().has_edge(e.u, e.v)) {
                    rejection_ = "(" + std::to_string(e.u) + "," + std::to_string(e.v) + ") not an edge";
                    return false;
                }
                edges.push_back(e.normalized());
            }
            std::sort(edges.begin(), edges.end());
            edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
            auto tree = extract_steiner_tree(edges, terminals_);
            if (!tree) {
                rejection_ = "tree " + std::to_string(trees.size()) + " does not connect the terminals";
                return false;
            }
            for (const auto& e : tree->edges) {
                const auto id = static_cast<std::size_t>(p_.graph().edge_id(e.u, e.v));
                if (claimed.test(id) || !allowed_type(stage, p_.classify(e))) {
                    rejection_ = "tree " + std::to_string(trees.size()) + ": edge (" + std::to_string(e.u) + "," + std::to_string(e.v)
                        + (claimed.test(id) ? ") already used" : ") has the wrong type");
                    return false;
                }
                claimed.set(id);
            }
            trees.push_back(std::move(*tree));
        }
        used_ = std::move(claimed);
        for (auto& t : trees) {
            result_.packing.trees.push_back(std::move(t));
            result_.stages.push_back(stage);
        }
        result_.groups.push_back({stage, group.pattern, static_cast<int>(group.trees.size()), false, {}});
        return true;
    }

    bool search_commit(int count, const EdgeSet& domain, int stage, const std::string& pattern)
    {
        if (count == 0)
            return true;
        std::optional<TreePacking> found;
        try {
            SearchOptions opts = c_.opts_;
            opts.node_budget = std::min<std::uint64_t>(opts.node_budget, 2'000'000);
            found = find_packing(p_.graph(), terminals_, count, opts, &domain);
        } catch (const SearchBudgetExceeded&) {
            return false;
        }
        if (!found)
            return false;
        for (auto& t : found->trees) {
            used_ |= edge_set_of(p_.graph(), t.edges);
            result_.packing.trees.push_back(std::move(t));
            result_.stages.push_back(stage);
        }
        result_.groups.push_back({stage, pattern, count, true, rejection_});
        return true;
    }

    /// Unused product edges of the stage's types, optionally limited to those
    /// lying over the given G-edges.
    EdgeSet domain(int stage, const std::set<Edge>* over = nullptr) const
    {
        auto d = p_.graph().empty_edge_set();
        for (EdgeId id = 0; id < p_.graph().size(); ++id) {
            if (used_.test(static_cast<std::size_t>(id)))
                continue;
            const auto e = p_.graph().edge(id);
            const auto type = p_.classify(e);
            if (!allowed_type(stage, type))
                continue;
            // Terminal one-type edges are held back for Stage II until it has been placed.
            if (stage == 1 && !stage_two_placed_ && type == EdgeType::OneType
                && std::any_of(roles_.begin(), roles_.end(), [&](Vertex t) { return e.touches(t); }))
                continue;
            if (over) {
                auto proj = p_.g_projection(e);
                if (!proj || !over->count(*proj))
                    continue;
            }
            d.set(static_cast<std::size_t>(id));
        }
        return d;
    }

    std::string describe_groups() const
    {
        std::string out = std::string(to_string(cfg_.layout)) + "/" + to_string(cfg_.subcase);
        for (const auto& g : result_.groups)
            out += "; " + g.pattern + (g.rejected.empty() ? "" : " [" + g.rejected + "]");
        if (!rejection_.empty())
            out += "; last rejection: " + rejection_;
        return out;
    }

    // ---- stage I ---------------------------------------------------------

    void stage_one()
    {
        Group group = stage_one_pattern();
        if (try_commit(group, 1))
            return;
        if (!search_commit(c_.ell2_, domain(1), 1, group.pattern + " (search)"))
            throw ConstructionDefect("stage 1: no " + std::to_string(c_.ell2_) + " trees over one-/two-type edges (" + group.pattern
                + " rejected: " + rejection_ + ")");
    }

    Group stage_one_pattern() const
    {
        switch (cfg_.layout) {
        case TerminalLayout::SameLayer:
            return same_layer_stage_one();
        case TerminalLayout::TwoInOneLayer:
            return cfg_.subcase == LayoutSubcase::ZPrimeInXY ? two_layer_stage_one_shared() : two_layer_stage_one_trees();
        case TerminalLayout::ThreeLayers:
            if (cfg_.subcase == LayoutSubcase::ProjectionsEqual)
                return three_layer_stage_one_equal();
            if (cfg_.subcase == LayoutSubcase::TwoProjectionsEqual)
                return three_layer_stage_one_paths();
            return three_layer_stage_one_trees();
        }
        return {};
    }

    /// The H-packing copied into the common layer.
    Group same_layer_stage_one() const
    {
        Group out {"same-layer/H-copy", {}, {}, true};
        const auto& pack = c_.h_trees({cx().h, cy().h, cz().h});
        for (const auto& t : pack.trees) {
            EdgeList e;
            add_h_edges_in_layer(e, t.edges, cx().g);
            out.trees.push_back(std::move(e));
        }
        return out;
    }

    /// x=(u1,a), y=(u1,b), z=(u2,a): a-b paths of H in H(u1), each lifted
    /// to H(u2) along the longest G-path at the path's first inner vertex.
    Group two_layer_stage_one_shared() const
    {
        Group out {"two-in-one/paths", {}, {}, true};
        const auto u1 = cx().g;
        const auto u2 = cz().g;
        const auto a = cx().h;
        const auto b = cy().h;
        const auto& q = c_.g_paths(u1, u2).paths;
        const auto& longest = q.back();
        const auto& paths = c_.h_paths(a, b).paths;
        std::set<Vertex> firsts;
        std::set<Vertex> lasts;
        for (const auto& path : paths) {
            firsts.insert(path[1]);
            lasts.insert(path[path.size() - 2]);
        }
        for (const auto& path : paths) {
            EdgeList e;
            if (path.size() == 2) {
                // a, b adjacent: use a spare neighbor so the one-type edges at x, y stay free.
                auto excl = firsts;
                excl.insert(b);
                if (auto alpha = spare_neighbor(h_, a, excl)) {
                    out.pattern = "two-in-one/paths+spare-a";
                    e.push_back({x(), y()});
                    e.push_back({x(), at(u1, *alpha)});
                    add_g_path_in_layer(e, longest, *alpha);
                    e.push_back({at(u2, *alpha), z()});
                } else {
                    auto excl_b = firsts;
                    excl_b.insert(lasts.begin(), lasts.end());
                    excl_b.insert(a);
                    auto beta = spare_neighbor(h_, b, excl_b);
                    if (!beta) {
                        out.pattern_ok = false;
                        return out;
                    }
                    out.pattern = "two-in-one/paths+spare-b";
                    e.push_back({x(), y()});
                    e.push_back({y(), at(u1, *beta)});
                    add_g_path_in_layer(e, longest, *beta);
                    e.push_back({at(u2, *beta), at(u2, b)});
                    e.push_back({at(u2, b), z()});
                }
            } else {
                const auto alpha = path[1];
                Path lifted;
                for (auto v : path)
                    lifted.push_back(at(u1, v));
                add_path(e, lifted);
                add_g_path_in_layer(e, longest, alpha);
                e.push_back({at(u2, alpha), z()});
            }
            out.trees.push_back(std::move(e));
        }
        return out;
    }

    /// x=(u1,a), y=(u1,b), z=(u2,c), c new: S'-trees of H in H(u1), each
    /// lifted to H(u2) at a neighbor of c outside {a,b}.
    Group two_layer_stage_one_trees() const
    {
        Group out {"two-in-one/trees", {}, {}, true};
        const auto u1 = cx().g;
        const auto u2 = cz().g;
        const auto a = cx().h;
        const auto b = cy().h;
        const auto c = cz().h;
        const auto& longest = c_.g_paths(u1, u2).paths.back();
        const auto& pack = c_.h_trees({a, b, c});
        for (const auto& t : pack.trees) {
            EdgeList e;
            add_h_edges_in_layer(e, t.edges, u1);
            std::optional<Vertex> alpha;
            for (auto w : neighbors_in(t.edges, c))
                if (w != a && w != b) {
                    alpha = w;
                    break;
                }
            if (alpha) {
                add_g_path_in_layer(e, longest, *alpha);
                e.push_back({at(u2, *alpha), z()});
            } else {
                // c only touches a or b in this tree: climb through G(c) itself.
                out.pattern = "two-in-one/trees+c-layer";
                add_g_path_in_layer(e, longest, c);
            }
            out.trees.push_back(std::move(e));
        }
        return out;
    }

    /// All three coordinates equal h: one G-tree copied into G(alpha_j) for
    /// lambda3(H) neighbors alpha_j of h, terminals hooked on by two-type edges.
    Group three_layer_stage_one_equal() const
    {
        Group out {"three-layer/equal", {}, {}, true};
        const auto h = cx().h;
        const auto& gtree = c_.g_trees({cx().g, cy().g, cz().g}).trees.front();
        int taken = 0;
        for (const auto& inc : h_.neighbors(h)) {
            if (taken == c_.ell2_)
                break;
            const auto alpha = inc.to;
            EdgeList e;
            add_g_edges_in_layer(e, gtree.edges, alpha);
            for (auto role : cfg_.roles)
                e.push_back({at(role.g, role.h), at(role.g, alpha)});
            out.trees.push_back(std::move(e));
            ++taken;
        }
        if (taken < c_.ell2_)
            out.pattern_ok = false;
        return out;
    }

    /// x, y share coordinate h, z has hz: h-hz paths of H in H(g_z), joined
    /// to x and y through a copy of one G-tree.
    Group three_layer_stage_one_paths() const
    {
        Group out {"three-layer/paths", {}, {}, true};
        const auto h = cx().h;
        const auto hz = cz().h;
        const auto& gtree = c_.g_trees({cx().g, cy().g, cz().g}).trees.front();
        const auto& paths = c_.h_paths(h, hz).paths;
        std::set<Vertex> firsts;
        std::set<Vertex> lasts;
        for (const auto& path : paths) {
            firsts.insert(path[1]);
            lasts.insert(path[path.size() - 2]);
        }
        for (const auto& path : paths) {
            EdgeList e;
            if (path.size() == 2) {
                if (auto alpha = spare_neighbor(h_, h, firsts)) {
                    out.pattern = "three-layer/paths+spare-h";
                    e.push_back({x(), at(cx().g, *alpha)});
                    e.push_back({y(), at(cy().g, *alpha)});
                    e.push_back({z(), at(cz().g, h)});
                    e.push_back({at(cz().g, h), at(cz().g, *alpha)});
                    add_g_edges_in_layer(e, gtree.edges, *alpha);
                } else if (auto beta = spare_neighbor(h_, hz, lasts)) {
                    out.pattern = "three-layer/paths+spare-hz";
                    e.push_back({x(), at(cx().g, hz)});
                    e.push_back({at(cx().g, hz), at(cx().g, *beta)});
                    e.push_back({y(), at(cy().g, hz)});
                    e.push_back({at(cy().g, hz), at(cy().g, *beta)});
                    e.push_back({z(), at(cz().g, *beta)});
                    add_g_edges_in_layer(e, gtree.edges, *beta);
                } else {
                    out.pattern_ok = false;
                    return out;
                }
            } else {
                const auto alpha = path[1];
                e.push_back({x(), at(cx().g, alpha)});
                e.push_back({y(), at(cy().g, alpha)});
                Path tail;
                for (std::size_t i = 1; i < path.size(); ++i)
                    tail.push_back(at(cz().g, path[i]));
                add_path(e, tail);
                add_g_edges_in_layer(e, gtree.edges, alpha);
            }
            out.trees.push_back(std::move(e));
        }
        return out;
    }

    /// Distinct coordinates: each S'-tree of H is split at a pivot terminal's
    /// neighbor alpha outside S'; the pivot hooks on with one two-type edge,
    /// the other terminals follow the tree in their own layers, and a copy of
    /// one G-tree in G(alpha) joins the layers.
    Group three_layer_stage_one_trees() const
    {
        Group out {"three-layer/trees", {}, {}, true};
        const std::set<Vertex> coords {cx().h, cy().h, cz().h};
        const auto& gtree = c_.g_trees({cx().g, cy().g, cz().g}).trees.front();
        const auto& pack = c_.h_trees({cx().h, cy().h, cz().h});
        std::set<Vertex> taken;
        for (const auto& t : pack.trees) {
            std::optional<std::size_t> pivot;
            Vertex alpha = -1;
            for (std::size_t r = 0; r < 3 && !pivot; ++r)
                for (auto w : neighbors_in(t.edges, cfg_.roles[r].h))
                    if (!coords.count(w) && !taken.count(w)) {
                        pivot = r;
                        alpha = w;
                        break;
                    }
            if (!pivot) {
                out.pattern_ok = false;
                return out;
            }
            taken.insert(alpha);
            EdgeList e;
            for (std::size_t r = 0; r < 3; ++r) {
                const auto role = cfg_.roles[r];
                if (r == *pivot) {
                    e.push_back({at(role.g, role.h), at(role.g, alpha)});
                    continue;
                }
                Path lifted;
                for (auto v : tree_path(t.edges, role.h, alpha))
                    lifted.push_back(at(role.g, v));
                add_path(e, lifted);
            }
            add_g_edges_in_layer(e, gtree.edges, alpha);
            out.trees.push_back(std::move(e));
        }
        return out;
    }

    // ---- stage II --------------------------------------------------------

    void stage_two()
    {
        std::vector<Group> groups = stage_two_groups();
        std::set<Edge> claimed;
        for (const auto& g : groups) {
            claimed.insert(g.g_edges.begin(), g.g_edges.end());
            for (const auto& alt : g.alternatives)
                claimed.insert(alt.g_edges.begin(), alt.g_edges.end());
        }
        std::set<Edge> unclaimed;
        for (const auto& e : g_.edges())
            if (!claimed.count(e.normalized()))
                unclaimed.insert(e.normalized());

        int deficit = 0;
        for (const auto& group : groups) {
            if (try_commit(group, 2))
                continue;
            const auto first_rejection = rejection_;
            if (std::any_of(group.alternatives.begin(), group.alternatives.end(), [&](const Group& alt) { return try_commit(alt, 2); }))
                continue;
            rejection_ = first_rejection;
            std::set<Edge> over(group.g_edges.begin(), group.g_edges.end());
            over.insert(unclaimed.begin(), unclaimed.end());
            const auto count = static_cast<int>(group.trees.size());
            if (!search_commit(count, domain(2, &over), 2, group.pattern + " (search)"))
                deficit += count;
        }
        if (deficit > 0 && !search_commit(deficit, domain(2), 2, "stage-2 (global search)"))
            throw ConstructionDefect("stage 2: could not place " + std::to_string(deficit) + " trees (" + describe_groups() + ")");
    }

    std::vector<Group> stage_two_groups() const
    {
        switch (cfg_.layout) {
        case TerminalLayout::SameLayer:
            return same_layer_stage_two();
        case TerminalLayout::TwoInOneLayer:
            return two_layer_stage_two();
        case TerminalLayout::ThreeLayers:
            return three_layer_stage_two();
        }
        return {};
    }

    /// Stars centred at (beta_i, v) for lambda3(G) G-neighbors beta_i.
    std::vector<Group> same_layer_stage_two() const
    {
        std::vector<Group> out;
        const auto u = cx().g;
        int taken = 0;
        for (const auto& inc : g_.neighbors(u)) {
            if (taken == c_.ell1_)
                break;
            Group group {"same-layer/stars", {}, {make_edge(u, inc.to)}, true};
            for (Vertex v = 0; v < n2_; ++v) {
                const auto hub = at(inc.to, v);
                group.trees.push_back({{x(), hub}, {y(), hub}, {z(), hub}});
            }
            out.push_back(std::move(group));
            ++taken;
        }
        if (taken < c_.ell1_)
            out.push_back({"same-layer/stars", std::vector<EdgeList>(static_cast<std::size_t>(c_.ell1_ - taken)), {}, false});
        return out;
    }

    std::vector<Group> two_layer_stage_two() const
    {
        std::vector<Group> out;
        const auto u1 = cx().g;
        const auto u2 = cz().g;
        const auto& q = c_.g_paths(u1, u2).paths;
        for (const auto& route : q) {
            if (route.size() >= 3)
                out.push_back(fan_and_linkage(route));
            else
                out.push_back(direct_edge_group(q));
        }
        return out;
    }

    /// x - (q1, v_i) - y, then a zigzag linkage along the route to
    /// q_{t-1}, then one edge into z.
    Group fan_and_linkage(const Path& route) const
    {
        Group group {"two-in-one/fan+linkage", {}, path_edges(route), true};
        const auto last = route.size() - 2;
        const auto fan = xy_fan(p_, route[0], route[1], x(), y());
        const auto link = zigzag_linkage(p_, route, 1, last);
        for (int i = 0; i < n2_; ++i) {
            EdgeList e;
            add_path(e, fan[static_cast<std::size_t>(i)]);
            add_path(e, link[static_cast<std::size_t>(i)]);
            e.push_back({link[static_cast<std::size_t>(i)].back(), z()});
            group.trees.push_back(std::move(e));
        }
        return group;
    }

    /// Trees for the route u1u2 of length one, using a spare neighbor of u1
    /// or u2 that no other route leaves through.
    Group direct_edge_group(const std::vector<Path>& q) const
    {
        const auto u1 = cx().g;
        const auto u2 = cz().g;
        std::set<Vertex> firsts {u2};
        std::set<Vertex> lasts {u1};
        for (const auto& route : q) {
            firsts.insert(route[1]);
            lasts.insert(route[route.size() - 2]);
        }
        const auto beta = spare_neighbor(g_, u1, firsts);
        const auto gamma = spare_neighbor(g_, u2, lasts);
        Group none {"two-in-one/direct", std::vector<EdgeList>(static_cast<std::size_t>(n2_)), {make_edge(u1, u2)}, false};
        if (!beta && !gamma)
            return none;
        const bool shared = cfg_.subcase == LayoutSubcase::ZPrimeInXY;
        auto paper_pattern = [&](std::optional<Vertex> b, std::optional<Vertex> c) {
            Group g {"", {}, {make_edge(u1, u2), b ? make_edge(u1, *b) : make_edge(u2, *c)}, true};
            direct_shared(g, b, c);
            return g;
        };
        // Hub families first when z's coordinate is new: they leave (u1,c)-z
        // and the x/y crossings into H(u2) free for stage-1 trees.
        std::vector<Group> order;
        if (shared && beta)
            order.push_back(paper_pattern(beta, std::nullopt));
        if (shared && gamma)
            order.push_back(paper_pattern(std::nullopt, gamma));
        if (gamma)
            order.push_back(u2_hubs(*gamma));
        if (beta)
            order.push_back(u1_hubs(*beta));
        Group group = std::move(order.front());
        group.alternatives.assign(std::make_move_iterator(order.begin() + 1), std::make_move_iterator(order.end()));
        return group;
    }

    /// Hubs (beta, h) joined to x and y, each returning to z through its own
    /// vertex (u1, r): r = a or b means the direct edge xz or yz.
    Group u1_hubs(Vertex beta) const
    {
        const auto u1 = cx().g;
        Group group {"two-in-one/direct+u1-hubs", {}, {make_edge(u1, cz().g), make_edge(u1, beta)}, true};
        std::vector<Vertex> all(static_cast<std::size_t>(n2_));
        std::iota(all.begin(), all.end(), 0);
        const auto ret = rotation_match(all, all);
        for (std::size_t k = 0; k < all.size(); ++k) {
            const auto hub = at(beta, all[k]);
            const auto back = at(u1, ret[k]);
            EdgeList e {{x(), hub}, {y(), hub}, {back, z()}};
            if (back != x() && back != y())
                e.push_back({hub, back});
            group.trees.push_back(std::move(e));
        }
        return group;
    }

    /// {xz, yz} plus, for each w other than z's coordinate, the hub tree
    /// x-(u2,w)-y, (u2,w)-(gamma,r)-z with r a fixed-point-free relabelling.
    /// Leaves every edge of H(u1)'s G-layers above u1 alone.
    Group u2_hubs(Vertex gamma) const
    {
        const auto u2 = cz().g;
        Group group {"two-in-one/direct+u2-hubs", {}, {make_edge(cx().g, u2), make_edge(u2, gamma)}, true};
        group.trees.push_back({{x(), z()}, {y(), z()}});
        std::vector<Vertex> hubs;
        for (Vertex w = 0; w < n2_; ++w)
            if (w != cz().h)
                hubs.push_back(w);
        const auto ret = rotation_match(hubs, hubs);
        for (std::size_t k = 0; k < hubs.size(); ++k) {
            const auto hub = at(u2, hubs[k]);
            const auto via = at(gamma, ret[k]);
            group.trees.push_back({{x(), hub}, {y(), hub}, {hub, via}, {via, z()}});
        }
        return group;
    }

    /// z = (u2, a). H-vertices ordered v1 = a, v2 = b, then the rest.
    void direct_shared(Group& group, std::optional<Vertex> beta, std::optional<Vertex> gamma) const
    {
        const auto u1 = cx().g;
        const auto u2 = cz().g;
        std::vector<Vertex> v {cx().h, cy().h};
        for (Vertex w = 0; w < n2_; ++w)
            if (w != cx().h && w != cy().h)
                v.push_back(w);
        auto vv = [&](int i) { return v[static_cast<std::size_t>(i - 1)]; };
        if (beta) {
            group.pattern = "two-in-one/direct+spare-u1";
            group.trees.push_back({{at(*beta, vv(1)), x()}, {at(*beta, vv(1)), y()}, {x(), z()}});
            group.trees.push_back({{at(*beta, vv(2)), x()}, {at(*beta, vv(2)), y()}, {y(), z()}});
        } else {
            group.pattern = "two-in-one/direct+spare-u2";
            const auto y2 = at(u2, cy().h);
            group.trees.push_back({{x(), z()}, {z(), y()}});
            group.trees.push_back({{x(), y2}, {y2, y()}, {at(*gamma, vv(1)), y2}, {at(*gamma, vv(1)), z()}});
        }
        for (int i = 3; i <= n2_; ++i) {
            const auto hub = at(u2, vv(i));
            const auto back = at(u1, i < n2_ ? vv(i + 1) : vv(3));
            group.trees.push_back({{hub, x()}, {hub, y()}, {hub, back}, {back, z()}});
        }
    }

    /// Fixed-point-free (when possible) bijection between two equal-size
    /// sorted lists, as the smallest rotation avoiding fixed points.
    static std::vector<Vertex> rotation_match(const std::vector<Vertex>& from, const std::vector<Vertex>& to)
    {
        const auto n = from.size();
        for (std::size_t r = 0; r < std::max<std::size_t>(n, 1); ++r) {
            bool ok = true;
            for (std::size_t k = 0; k < n && ok; ++k)
                ok = from[k] != to[(k + r) % n];
            if (ok) {
                std::vector<Vertex> out;
                for (std::size_t k = 0; k < n; ++k)
                    out.push_back(to[(k + r) % n]);
                return out;
            }
        }
        return to;
    }

    /// n2 edge-disjoint paths between two terminals p, q along the G-path
    /// `route` (from p's layer to q's layer).
    std::vector<Path> terminal_paths(Vertex p, Vertex q, const Path& route) const
    {
        const auto cp = p_.coords(p);
        const auto cq = p_.coords(q);
        const auto d = route.size() - 1;
        std::vector<Path> out;
        if (d == 1) {
            out.push_back({p, q});
            std::vector<Vertex> from;
            std::vector<Vertex> to;
            for (Vertex w = 0; w < n2_; ++w) {
                if (w != cq.h)
                    from.push_back(w);
                if (w != cp.h)
                    to.push_back(w);
            }
            const auto back = rotation_match(from, to);
            for (std::size_t k = 0; k < from.size(); ++k)
                out.push_back({p, at(cq.g, from[k]), at(cp.g, back[k]), q});
        } else if (d == 2) {
            for (Vertex v = 0; v < n2_; ++v)
                out.push_back({p, at(route[1], v), q});
        } else {
            const auto link = zigzag_linkage(p_, route, 1, d - 1);
            for (const auto& l : link) {
                Path path {p};
                path.insert(path.end(), l.begin(), l.end());
                path.push_back(q);
                out.push_back(std::move(path));
            }
        }
        return out;
    }

    /// n2 paths from terminal p to the hubs (route.back(), v_i), alternating
    /// coordinates so inner hops are three-type.
    std::vector<Path> hub_paths(Vertex p, const Path& route) const
    {
        const auto d = static_cast<int>(route.size()) - 1;
        std::vector<Path> out;
        for (int i = 0; i < n2_; ++i) {
            Path path {p};
            for (int j = 1; j <= d; ++j)
                path.push_back(at(route[static_cast<std::size_t>(j)], (i + (d - j) % 2) % n2_));
            out.push_back(std::move(path));
        }
        return out;
    }

    std::vector<Group> three_layer_stage_two() const
    {
        std::vector<Group> out;
        const std::array<Vertex, 3> gs {cx().g, cy().g, cz().g};
        const auto& pack = c_.g_trees(gs);
        for (const auto& t : pack.trees) {
            SteinerTree tree {{gs.begin(), gs.end()}, t.edges};
            Group group {"three-layer/type-I", {}, t.edges, true};
            if (tree_type(tree) == TreeType::TypeI) {
                std::size_t mid = 0;
                while (tree.degree(gs[mid]) != 2)
                    ++mid;
                const auto e1 = (mid + 1) % 3;
                const auto e2 = (mid + 2) % 3;
                const auto a = terminal_paths(roles_[e1], roles_[mid], tree_path(t.edges, gs[e1], gs[mid]));
                const auto b = terminal_paths(roles_[e2], roles_[mid], tree_path(t.edges, gs[e2], gs[mid]));
                for (int i = 0; i < n2_; ++i) {
                    EdgeList e;
                    add_path(e, a[static_cast<std::size_t>(i)]);
                    add_path(e, b[static_cast<std::size_t>((i + 1) % n2_)]);
                    group.trees.push_back(std::move(e));
                }
            } else {
                group.pattern = "three-layer/type-II";
                Vertex centre = -1;
                for (auto v : tree.vertices())
                    if (tree.degree(v) == 3)
                        centre = v;
                std::array<std::vector<Path>, 3> legs;
                for (std::size_t r = 0; r < 3; ++r)
                    legs[r] = hub_paths(roles_[r], tree_path(t.edges, gs[r], centre));
                for (int i = 0; i < n2_; ++i) {
                    EdgeList e;
                    for (const auto& leg : legs)
                        add_path(e, leg[static_cast<std::size_t>(i)]);
                    group.trees.push_back(std::move(e));
                }
            }
            out.push_back(std::move(group));
        }
        return out;
    }

    const PackingConstructor& c_;
    const ProductGraph& p_;
    const Graph& g_;
    const Graph& h_;
    int n2_;
    LayerConfig cfg_;
    std::array<Vertex, 3> roles_ {};
    std::vector<Vertex> terminals_;
    EdgeSet used_;
    ConstructionResult result_;
    std::string rejection_;
    bool stage_two_placed_ = false;
};

inline ConstructionResult PackingConstructor::construct(std::array<Vertex, 3> terminals) const
{
    return ConstructionRun(*this, terminals).run();
}

/// One-shot construction for a single terminal triple in G∘H.
inline TreePacking construct_packing(const Graph& g, const Graph& h, std::array<Vertex, 3> terminals)
{
    return PackingConstructor(g, h).construct(terminals).packing;
}

} // namespace lexconn

#endif // LEXCONN_CONSTRUCT_HPP
