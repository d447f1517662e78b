#include <numeric>

#include <gtest/gtest.h>

#include <lexconn/corpus.hpp>
#include <lexconn/graph.hpp>

using namespace lexconn;

namespace {

int degree_sum(const Graph& g)
{
    int total = 0;
    for (Vertex v = 0; v < g.order(); ++v)
        total += g.degree(v);
    return total;
}

} // namespace

TEST(Graph, BuildsPath)
{
    const auto g = new_graph(3, {{0, 1}, {1, 2}});
    EXPECT_EQ(g.order(), 3);
    EXPECT_EQ(g.size(), 2);
    EXPECT_TRUE(g.has_edge(1, 0));
    EXPECT_FALSE(g.has_edge(0, 2));
    EXPECT_TRUE(g.same_as(path_graph(3)));
}

TEST(Graph, RejectsBadEdges)
{
    try {
        new_graph(3, {{0, 0}});
        FAIL() << "self-loop accepted";
    } catch (const GraphError& e) {
        EXPECT_NE(std::string(e.what()).find("self-loop (0,0)"), std::string::npos);
    }
    EXPECT_THROW(new_graph(3, {{0, 1}, {1, 0}}), GraphError);
    EXPECT_THROW(new_graph(3, {{0, 3}}), GraphError);
    EXPECT_THROW(new_graph(3, {{-1, 2}}), GraphError);
    EXPECT_THROW(new_graph(0, {}), GraphError);
}

TEST(Graph, MinDegree)
{
    EXPECT_EQ(min_degree(path_graph(3)), 1);
    EXPECT_EQ(min_degree(complete_graph(4)), 3);
    EXPECT_EQ(min_degree(cycle_graph(5)), 2);
    EXPECT_EQ(min_degree(empty_graph(3)), 0);
}

TEST(Graph, Connectivity)
{
    EXPECT_TRUE(is_connected(path_graph(3)));
    EXPECT_FALSE(is_connected(new_graph(4, {{0, 1}, {2, 3}})));
    EXPECT_TRUE(is_connected(new_graph(1, {})));
    EXPECT_FALSE(is_connected(empty_graph(3)));
}

TEST(Graph, Families)
{
    EXPECT_EQ(path_graph(4).sorted_edges(), (std::vector<Edge> {{0, 1}, {1, 2}, {2, 3}}));
    EXPECT_TRUE(cycle_graph(3).same_as(complete_graph(3)));
    EXPECT_EQ(empty_graph(3).size(), 0);
    EXPECT_EQ(empty_graph(3).order(), 3);
    EXPECT_EQ(parse_family("cycle"), Family::Cycle);
    EXPECT_FALSE(parse_family("wheel"));
    EXPECT_THROW(family(Family::Path, 0), GraphError);
}

TEST(Graph, FamilySizes)
{
    for (int n = 2; n <= 9; ++n) {
        EXPECT_EQ(path_graph(n).size(), n - 1);
        EXPECT_EQ(min_degree(path_graph(n)), 1);
        EXPECT_EQ(complete_graph(n).size(), n * (n - 1) / 2);
    }
}

TEST(Graph, HandshakeOnCorpus)
{
    for (const auto& g : connected_graphs(1, 5, false))
        ASSERT_EQ(degree_sum(g), 2 * g.size());
}

TEST(Graph, InducedSubgraphKeepsExactlyInnerEdges)
{
    for (const auto& g : connected_graphs(5, false)) {
        const std::vector<Vertex> s {0, 2, 3};
        const auto sub = induced_subgraph(g, s);
        int inner = 0;
        for (const auto& e : g.edges())
            inner += std::count(s.begin(), s.end(), e.u) && std::count(s.begin(), s.end(), e.v);
        ASSERT_EQ(sub.size(), inner);
        for (const auto& e : sub.edges())
            ASSERT_TRUE(g.has_edge(s[static_cast<std::size_t>(e.u)], s[static_cast<std::size_t>(e.v)]));
    }
}

TEST(Corpus, CountsConnectedGraphs)
{
    // Labelled connected graphs: 1, 1, 4, 38, 728; unlabelled: 1, 1, 2, 6, 21, 112.
    EXPECT_EQ(connected_graphs(3, false).size(), 4U);
    EXPECT_EQ(connected_graphs(4, false).size(), 38U);
    EXPECT_EQ(connected_graphs(5, false).size(), 728U);
    EXPECT_EQ(connected_graphs(4, true).size(), 6U);
    EXPECT_EQ(connected_graphs(5, true).size(), 21U);
    EXPECT_EQ(connected_graphs(6, true).size(), 112U);
}
