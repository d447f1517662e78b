#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include <lexconn/product.hpp>
#include <lexconn/steiner.hpp>

#include "oracles.hpp"

using namespace lexconn;

namespace {

const std::vector<std::pair<const char*, Graph>>& factors()
{
    static const std::vector<std::pair<const char*, Graph>> all {
        {"P2", path_graph(2)},
        {"P3", path_graph(3)},
        {"P4", path_graph(4)},
        {"C4", cycle_graph(4)},
        {"K3", complete_graph(3)},
        {"K4", complete_graph(4)},
        {"E3", empty_graph(3)},
        {"star", new_graph(4, {{0, 1}, {0, 2}, {0, 3}})},
    };
    return all;
}

/// Product edges by the adjacency rule, without the library's builder.
std::set<Edge> adjacency_rule(const Graph& g, const Graph& h)
{
    const int n2 = h.order();
    std::set<Edge> out;
    for (Vertex a = 0; a < g.order() * n2; ++a)
        for (Vertex b = a + 1; b < g.order() * n2; ++b) {
            const auto [ga, ha] = std::pair {a / n2, a % n2};
            const auto [gb, hb] = std::pair {b / n2, b % n2};
            if (g.has_edge(ga, gb) || (ga == gb && h.has_edge(ha, hb)))
                out.insert({a, b});
        }
    return out;
}

/// E(G∘T) for an edge set T of H: every product edge whose H-part is in T,
/// plus all inter-layer edges among the H-vertices T touches.
std::set<Edge> over_h_edges(const ProductGraph& p, const std::vector<Edge>& t)
{
    std::set<Vertex> verts;
    for (const auto& e : t) {
        verts.insert(e.u);
        verts.insert(e.v);
    }
    std::set<Edge> out;
    for (const auto& e : p.graph().edges()) {
        const auto a = p.coords(e.u);
        const auto b = p.coords(e.v);
        if (a.g == b.g) {
            if (std::find(t.begin(), t.end(), make_edge(a.h, b.h)) != t.end())
                out.insert(e.normalized());
        } else if (verts.count(a.h) && verts.count(b.h)) {
            out.insert(e.normalized());
        }
    }
    return out;
}

} // namespace

TEST(Product, EdgeCountFormula)
{
    const auto p = lex_product(path_graph(3), path_graph(3));
    EXPECT_EQ(p.graph().order(), 9);
    EXPECT_EQ(p.graph().size(), 24);
    for (const auto& [gn, g] : factors())
        for (const auto& [hn, h] : factors()) {
            const auto q = lex_product(g, h);
            EXPECT_EQ(q.graph().size(), oracle::product_size(g.order(), g.size(), h.order(), h.size())) << gn << "∘" << hn;
            const auto& edges = q.graph().sorted_edges();
            EXPECT_EQ(std::set<Edge>(edges.begin(), edges.end()), adjacency_rule(g, h)) << gn << "∘" << hn;
        }
}

TEST(Product, CompleteFactors)
{
    EXPECT_TRUE(lex_product(complete_graph(2), complete_graph(2)).graph().same_as(complete_graph(4)));
}

TEST(Product, ConnectedIffFirstFactorConnected)
{
    const auto split = new_graph(4, {{0, 1}, {2, 3}});
    EXPECT_FALSE(is_connected(lex_product(split, path_graph(3)).graph()));
    EXPECT_TRUE(is_connected(lex_product(path_graph(3), empty_graph(3)).graph()));
}

TEST(Product, NotCommutative)
{
    const auto star = new_graph(4, {{0, 1}, {0, 2}, {0, 3}});
    const auto p3 = path_graph(3);
    EXPECT_NE(lex_product(star, p3).graph().size(), lex_product(p3, star).graph().size());
}

TEST(Product, ClassifiesEdges)
{
    const auto p = lex_product(path_graph(3), path_graph(3));
    EXPECT_EQ(classify_edge(p, {p.flat(0, 0), p.flat(1, 0)}), EdgeType::OneType);
    EXPECT_EQ(classify_edge(p, {p.flat(0, 0), p.flat(0, 1)}), EdgeType::TwoType);
    EXPECT_EQ(classify_edge(p, {p.flat(0, 0), p.flat(1, 1)}), EdgeType::ThreeType);
    EXPECT_THROW(classify_edge(p, {p.flat(0, 0), p.flat(2, 0)}), GraphError);
}

TEST(Product, EdgeTypePartition)
{
    for (const auto& [gn, g] : factors())
        for (const auto& [hn, h] : factors()) {
            const auto p = lex_product(g, h);
            int counts[3] {};
            for (const auto& e : p.graph().edges())
                ++counts[static_cast<int>(p.classify(e))];
            const int n2 = h.order();
            EXPECT_EQ(counts[static_cast<int>(EdgeType::OneType)], g.size() * n2) << gn << "∘" << hn;
            EXPECT_EQ(counts[static_cast<int>(EdgeType::TwoType)], g.order() * h.size()) << gn << "∘" << hn;
            EXPECT_EQ(counts[static_cast<int>(EdgeType::ThreeType)], g.size() * n2 * (n2 - 1)) << gn << "∘" << hn;
        }
}

TEST(Product, Layers)
{
    const auto p = lex_product(path_graph(3), path_graph(3));
    EXPECT_EQ(p.h_layer(1), (std::vector<Vertex> {p.flat(1, 0), p.flat(1, 1), p.flat(1, 2)}));
    EXPECT_TRUE(induced_subgraph(p.graph(), p.h_layer(1)).same_as(path_graph(3)));
    EXPECT_EQ(p.g_layer(0), (std::vector<Vertex> {p.flat(0, 0), p.flat(1, 0), p.flat(2, 0)}));
    EXPECT_TRUE(induced_subgraph(p.graph(), p.g_layer(0)).same_as(path_graph(3)));
    EXPECT_THROW(p.h_layer(3), GraphError);
}

TEST(Product, FlatIndexIsRowMajor)
{
    const auto p = lex_product(path_graph(3), path_graph(4));
    for (Vertex v = 0; v < p.graph().order(); ++v) {
        const auto c = p.coords(v);
        EXPECT_EQ(v, c.g * 4 + c.h);
        EXPECT_EQ(p.flat(c), v);
    }
    EXPECT_EQ(to_string(p.coords(6)), "(1,2)");
}

TEST(Product, KSubgraph)
{
    const auto p = lex_product(path_graph(3), path_graph(3));
    const std::vector<Vertex> adjacent {0, 1};
    const auto k = k_subgraph(p, adjacent);
    EXPECT_EQ(k.graph.order(), 6);
    EXPECT_EQ(k.graph.size(), 9);
    for (const auto& e : k.graph.edges()) {
        const auto a = p.coords(k.to_product[static_cast<std::size_t>(e.u)]);
        const auto b = p.coords(k.to_product[static_cast<std::size_t>(e.v)]);
        EXPECT_NE(a.g, b.g);
    }
    const std::vector<Vertex> far {0, 2};
    EXPECT_EQ(k_subgraph(p, far).graph.size(), 0);

    const auto q = lex_product(complete_graph(2), complete_graph(2));
    EXPECT_EQ(k_subgraph(q, adjacent).graph.size(), 4);
}

// Edge-disjoint trees T1, T2 of H with W = V(T1) ∩ V(T2). G∘(T1∪T2)
// contains G∘T1 ∪ G∘T2, and the two agree exactly when V(T1) = V(T2): the
// surplus is the inter-layer edges between V(T1)∖W and V(T2)∖W. The overlap
// E(G∘T1) ∩ E(G∘T2) is E(G∘H[W]) without its two-type edges.
TEST(Product, OverlapIdentityForTreesOfH)
{
    const auto g = path_graph(3);
    const auto h = complete_graph(4);
    const auto p = lex_product(g, h);
    const std::vector<Edge> t1 {{0, 1}, {1, 2}};
    const std::vector<Edge> t2 {{0, 2}, {2, 3}};
    auto both = t1;
    both.insert(both.end(), t2.begin(), t2.end());

    const auto e1 = over_h_edges(p, t1);
    const auto e2 = over_h_edges(p, t2);
    std::set<Edge> joined = e1;
    joined.insert(e2.begin(), e2.end());
    const auto whole = over_h_edges(p, both);
    EXPECT_TRUE(std::includes(whole.begin(), whole.end(), joined.begin(), joined.end()));
    std::set<Edge> surplus;
    std::set_difference(whole.begin(), whole.end(), joined.begin(), joined.end(), std::inserter(surplus, surplus.end()));
    for (const auto& e : surplus) {
        const std::set<Vertex> ends {p.coords(e.u).h, p.coords(e.v).h};
        EXPECT_EQ(ends, (std::set<Vertex> {1, 3}));
    }
    EXPECT_EQ(surplus.size(), static_cast<std::size_t>(g.size() * 2));

    // Same vertex set: the union identity is exact.
    const std::vector<Edge> s1 {{0, 1}, {1, 2}, {2, 3}};
    const std::vector<Edge> s2 {{0, 2}, {0, 3}, {1, 3}};
    auto spanning = s1;
    spanning.insert(spanning.end(), s2.begin(), s2.end());
    auto spanning_joined = over_h_edges(p, s1);
    const auto spanning_second = over_h_edges(p, s2);
    spanning_joined.insert(spanning_second.begin(), spanning_second.end());
    EXPECT_EQ(over_h_edges(p, spanning), spanning_joined);

    std::set<Edge> shared;
    std::set_intersection(e1.begin(), e1.end(), e2.begin(), e2.end(), std::inserter(shared, shared.end()));
    const std::vector<Vertex> w {0, 2};
    const auto hw = lex_product(g, induced_subgraph(h, w));
    std::set<Edge> expected;
    for (const auto& e : hw.graph().edges()) {
        if (hw.classify(e) == EdgeType::TwoType)
            continue;
        const auto a = hw.coords(e.u);
        const auto b = hw.coords(e.v);
        expected.insert(make_edge(p.flat(a.g, w[static_cast<std::size_t>(a.h)]), p.flat(b.g, w[static_cast<std::size_t>(b.h)])));
    }
    EXPECT_EQ(shared, expected);
    EXPECT_EQ(shared.size(), static_cast<std::size_t>(g.size() * 4));
}

// Symmetric form: for edge-disjoint trees of G, the overlap of (T1)∘H and
// (T2)∘H is exactly the union of the H-layers over the shared vertices.
TEST(Product, OverlapIdentityForTreesOfG)
{
    const auto g = complete_graph(4);
    const auto h = path_graph(3);
    const auto p = lex_product(g, h);
    auto over_g = [&](const std::vector<Edge>& t) {
        std::set<Vertex> verts;
        for (const auto& e : t) {
            verts.insert(e.u);
            verts.insert(e.v);
        }
        std::set<Edge> out;
        for (const auto& e : p.graph().edges()) {
            const auto a = p.coords(e.u).g;
            const auto b = p.coords(e.v).g;
            if (a == b ? verts.count(a) > 0 : std::find(t.begin(), t.end(), make_edge(a, b)) != t.end())
                out.insert(e.normalized());
        }
        return out;
    };
    const std::vector<Edge> t1 {{0, 1}, {1, 2}};
    const std::vector<Edge> t2 {{0, 2}, {2, 3}};
    auto both = t1;
    both.insert(both.end(), t2.begin(), t2.end());
    const auto e1 = over_g(t1);
    const auto e2 = over_g(t2);
    std::set<Edge> joined = e1;
    joined.insert(e2.begin(), e2.end());
    EXPECT_EQ(over_g(both), joined);

    std::set<Edge> shared;
    std::set_intersection(e1.begin(), e1.end(), e2.begin(), e2.end(), std::inserter(shared, shared.end()));
    std::set<Edge> layers;
    for (auto u : {0, 2}) {
        const auto layer = induced_subgraph(p.graph(), p.h_layer(u));
        for (const auto& e : layer.edges())
            layers.insert(make_edge(p.flat(u, e.u), p.flat(u, e.v)));
    }
    EXPECT_EQ(shared, layers);
}
