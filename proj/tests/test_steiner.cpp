#include <gtest/gtest.h>

#include <lexconn/bounds.hpp>
#include <lexconn/corpus.hpp>
#include <lexconn/io.hpp>
#include <lexconn/product.hpp>
#include <lexconn/steiner.hpp>

#include "oracles.hpp"

using namespace lexconn;

namespace {

SteinerTree tree(std::vector<Vertex> s, std::vector<Edge> edges) { return make_tree(std::move(s), std::move(edges)); }

void expect_witness(const Graph& g, const PackingResult& r)
{
    EXPECT_EQ(r.witness.size(), r.value);
    EXPECT_TRUE(is_valid_packing(g, r.witness));
}

} // namespace

TEST(Steiner, RecognisesTrees)
{
    const std::vector<Vertex> all3 {0, 1, 2};
    const std::vector<Vertex> all4 {0, 1, 2, 3};
    const std::vector<Edge> p3 {{0, 1}, {1, 2}};
    const std::vector<Edge> split {{0, 1}, {2, 3}};
    const std::vector<Edge> triangle {{0, 1}, {1, 2}, {0, 2}};
    EXPECT_TRUE(is_steiner_tree(path_graph(3), p3, all3));
    EXPECT_FALSE(is_steiner_tree(complete_graph(4), split, all4));
    EXPECT_FALSE(is_steiner_tree(complete_graph(4), triangle, all3));
    const std::vector<Vertex> pair {0, 1};
    EXPECT_FALSE(is_steiner_tree(complete_graph(4), triangle, pair));
    const std::vector<Edge> missing {{0, 2}};
    EXPECT_THROW(is_steiner_tree(path_graph(3), missing, pair), GraphError);
}

TEST(Steiner, TreeTypes)
{
    EXPECT_EQ(tree_type(tree({0, 2, 1}, {{0, 2}, {2, 1}})), TreeType::TypeI);
    EXPECT_EQ(tree_type(tree({0, 1, 2}, {{0, 5}, {5, 2}, {2, 1}})), TreeType::TypeI);
    EXPECT_EQ(tree_type(tree({0, 1, 2}, {{3, 0}, {3, 1}, {3, 2}})), TreeType::TypeII);
    EXPECT_EQ(tree_type(tree({0, 1, 2}, {{3, 0}, {3, 4}, {4, 1}, {3, 2}})), TreeType::TypeII);
    EXPECT_THROW(tree_type(tree({0, 1, 2}, {{0, 1}, {1, 2}, {2, 3}})), std::invalid_argument);
    EXPECT_THROW(tree_type(tree({0, 1}, {{0, 1}})), std::invalid_argument);
}

TEST(Steiner, ExtractsReducedTree)
{
    const std::vector<Edge> edges {{0, 1}, {1, 2}, {2, 3}, {1, 4}, {4, 5}, {0, 2}};
    const std::vector<Vertex> s {0, 3, 4};
    const auto t = extract_steiner_tree(edges, s);
    ASSERT_TRUE(t);
    EXPECT_TRUE(is_reduced(*t));
    EXPECT_TRUE(is_steiner_tree(new_graph(6, edges), *t));
    const std::vector<Vertex> cut_off {0, 7};
    EXPECT_FALSE(extract_steiner_tree(edges, cut_off));
}

TEST(Steiner, PackingNumbers)
{
    const auto k4 = complete_graph(4);
    for (const auto& s : detail::k_subsets(4, 3)) {
        const auto r = steiner_packing_number(k4, s);
        EXPECT_EQ(r.value, 2);
        expect_witness(k4, r);
    }
    const std::vector<Vertex> s {0, 1, 3};
    EXPECT_EQ(steiner_packing_number(path_graph(4), s).value, 1);
    const auto split = new_graph(4, {{0, 1}, {2, 3}});
    const auto zero = steiner_packing_number(split, s);
    EXPECT_EQ(zero.value, 0);
    EXPECT_TRUE(zero.witness.trees.empty());
}

TEST(Steiner, LambdaValues)
{
    EXPECT_EQ(lambda_k(complete_graph(4), 3), 2);
    EXPECT_EQ(lambda_k(cycle_graph(5), 3), 1);
    EXPECT_EQ(lambda_k(complete_graph(3), 3), 1);
    EXPECT_EQ(lambda_k(path_graph(3), 3), 1);
    EXPECT_EQ(lambda_k(empty_graph(3), 3), 0);
    EXPECT_EQ(lambda_k(lex_product(path_graph(3), path_graph(3)).graph(), 3), 4);

    const auto w = lambda_k_witness(complete_graph(5), 3);
    EXPECT_EQ(w.value, 3);
    EXPECT_EQ(w.terminals, (std::vector<Vertex> {0, 1, 2}));
    EXPECT_EQ(w.witness.size(), 3);
    EXPECT_TRUE(is_valid_packing(complete_graph(5), w.witness));
}

TEST(Steiner, ParallelSearchMatchesSerial)
{
    const auto g = lex_product(path_graph(3), complete_graph(3)).graph();
    SearchOptions four;
    four.jobs = 4;
    EXPECT_EQ(lambda_k(g, 3, four), lambda_k(g, 3));
}

TEST(Steiner, BudgetIsEnforced)
{
    SearchOptions tiny;
    tiny.node_budget = 1;
    EXPECT_THROW(lambda_k(lex_product(complete_graph(4), complete_graph(3)).graph(), 3, tiny), SearchBudgetExceeded);
}

TEST(Steiner, AgreesWithTreeEnumerationOracle)
{
    for (const auto& g : connected_graphs(3, 6, true)) {
        const int n = g.order();
        for (const auto& s : detail::k_subsets(n, 3)) {
            const auto r = steiner_packing_number(g, s);
            ASSERT_EQ(r.value, oracle::packing_number(g, s)) << io::to_edge_list(g);
            ASSERT_TRUE(is_valid_packing(g, r.witness));
        }
    }
}

TEST(Steiner, AgreesWithOracleOnSmallProduct)
{
    const auto g = lex_product(path_graph(3), path_graph(3)).graph();
    for (const auto& s : detail::k_subsets(g.order(), 3))
        ASSERT_EQ(steiner_packing_number(g, s).value, oracle::packing_number(g, s));
}

TEST(Normalize, LeavesCleanPackingsAlone)
{
    const auto c4 = cycle_graph(4);
    TreePacking p {{0, 2, 3}, {tree({0, 2, 3}, {{0, 1}, {1, 2}, {2, 3}})}};
    EXPECT_EQ(count_touching_induced(c4, p), 1);
    const auto out = normalize_packing(c4, p);
    EXPECT_EQ(out.trees.front().edges, p.trees.front().edges);

    const auto k4 = complete_graph(4);
    const TreePacking q {{0, 1, 2}, {tree({0, 1, 2}, {{0, 1}, {1, 2}}), tree({0, 1, 2}, {{0, 3}, {1, 3}, {2, 3}})}};
    const auto same = normalize_packing(k4, q);
    ASSERT_EQ(same.size(), 2);
    EXPECT_EQ(same.trees[0].edges, q.trees[0].edges);
    EXPECT_EQ(same.trees[1].edges, q.trees[1].edges);
}

TEST(Normalize, RepairsThreeTouchingTrees)
{
    const auto k5 = complete_graph(5);
    const std::vector<Vertex> s {0, 1, 2};
    const TreePacking p {s,
        {tree(s, {{0, 1}, {1, 3}, {2, 3}}), tree(s, {{0, 2}, {0, 4}, {1, 4}}), tree(s, {{1, 2}, {0, 3}, {3, 4}, {2, 4}})}};
    ASSERT_TRUE(is_valid_packing(k5, p));
    ASSERT_EQ(count_touching_induced(k5, p), 3);
    const auto out = normalize_packing(k5, p);
    EXPECT_EQ(out.size(), 3);
    EXPECT_EQ(out.terminals, s);
    EXPECT_TRUE(is_valid_packing(k5, out));
    EXPECT_LE(count_touching_induced(k5, out), 2);
}

TEST(Normalize, RejectsInvalidInput)
{
    const auto k4 = complete_graph(4);
    const std::vector<Vertex> s {0, 1, 2};
    const TreePacking shared {s, {tree(s, {{0, 1}, {1, 2}}), tree(s, {{0, 1}, {0, 2}})}};
    EXPECT_THROW(normalize_packing(k4, shared), std::invalid_argument);
}

TEST(Normalize, MaximumPackingsOnCorpus)
{
    int repaired = 0;
    for (const auto& g : connected_graphs(4, 6, true)) {
        const auto best = steiner_packing_number(g, std::vector<Vertex> {0, 1, 2});
        const auto out = normalize_packing(g, best.witness);
        ASSERT_EQ(out.size(), best.value);
        ASSERT_TRUE(is_valid_packing(g, out));
        ASSERT_LE(count_touching_induced(g, out), 2);
        repaired += count_touching_induced(g, best.witness) > 2;
    }
    RecordProperty("repaired", repaired);
}
