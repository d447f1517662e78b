#include <gtest/gtest.h>

#include <lexconn/bounds.hpp>
#include <lexconn/corpus.hpp>
#include <lexconn/io.hpp>

#include "oracles.hpp"

using namespace lexconn;

TEST(Bounds, LowerBound)
{
    EXPECT_EQ(lower_bound_thm1(path_graph(3), path_graph(3)), 4);
    EXPECT_EQ(lower_bound_thm1(path_graph(3), empty_graph(3)), 3);
    EXPECT_EQ(lower_bound_thm1(complete_graph(4), complete_graph(3)), 7);
    EXPECT_EQ(lower_bound_thm1(cycle_graph(4), path_graph(2)), 2);
    EXPECT_THROW(lower_bound_thm1(empty_graph(3), path_graph(3)), BoundsError);
    EXPECT_THROW(lower_bound_thm1(path_graph(2), path_graph(3)), BoundsError);
}

TEST(Bounds, UpperBound)
{
    EXPECT_EQ(upper_bound_thm2(path_graph(3), path_graph(3)), 4);
    EXPECT_EQ(upper_bound_thm2(complete_graph(4), complete_graph(3)), 11);
    EXPECT_EQ(upper_bound_thm2(path_graph(4), path_graph(3)), 4);
}

TEST(Bounds, YangXu)
{
    EXPECT_EQ(yangxu_lambda(path_graph(3), path_graph(3)), 4);
    EXPECT_EQ(edge_connectivity(lex_product(path_graph(3), path_graph(3)).graph()), 4);
    EXPECT_EQ(yangxu_lambda(complete_graph(2), complete_graph(2)), 3);
    EXPECT_EQ(yangxu_lambda(path_graph(3), empty_graph(3)), 3);
    EXPECT_THROW(yangxu_lambda(new_graph(4, {{0, 1}, {2, 3}}), path_graph(2)), BoundsError);
}

TEST(Bounds, YangXuMatchesCutOracle)
{
    const std::vector<Graph> fs {path_graph(2), path_graph(3), cycle_graph(3), empty_graph(2), empty_graph(3), new_graph(3, {{0, 1}})};
    for (const auto& g : {path_graph(2), path_graph(3), cycle_graph(3), new_graph(4, {{0, 1}, {0, 2}, {0, 3}})})
        for (const auto& h : fs) {
            const auto p = lex_product(g, h);
            if (p.graph().order() > 14)
                continue;
            EXPECT_EQ(yangxu_lambda(g, h), oracle::global_min_cut(p.graph())) << io::to_edge_list(g) << io::to_edge_list(h);
        }
}

TEST(Bounds, Prop42)
{
    EXPECT_EQ(prop42_lower(0), 0);
    EXPECT_EQ(prop42_lower(1), 1);
    EXPECT_EQ(prop42_lower(2), 1);
    EXPECT_EQ(prop42_lower(3), 2);
    EXPECT_EQ(prop42_lower(4), 3);
    EXPECT_EQ(prop42_lower(7), 5);
    EXPECT_EQ(prop42_lower(8), 6);
    EXPECT_THROW(prop42_lower(-1), std::invalid_argument);
}

TEST(Bounds, StrideSample)
{
    EXPECT_EQ(stride_sample(5, 10), (std::vector<std::size_t> {0, 1, 2, 3, 4}));
    EXPECT_EQ(stride_sample(10, 3), (std::vector<std::size_t> {0, 4, 8}));
    EXPECT_LE(stride_sample(220, 200).size(), 200U);
    EXPECT_TRUE(stride_sample(0, 5).empty());
}

TEST(Audit, PathSquareClosesExactly)
{
    AuditOptions opts;
    opts.exact = true;
    const auto r = audit(path_graph(3), path_graph(3), opts);
    EXPECT_TRUE(r.passed());
    EXPECT_EQ(r.lower_thm1, 4);
    EXPECT_EQ(r.constructed, 4);
    EXPECT_EQ(r.upper_thm2, 4);
    ASSERT_TRUE(r.exact_lambda3);
    EXPECT_EQ(*r.exact_lambda3, 4);
    EXPECT_EQ(r.exact_method, "sandwich");
    EXPECT_EQ(r.construct_triples, 84);
}

TEST(Audit, SandwichWithoutSearch)
{
    const auto r = audit(path_graph(3), path_graph(4));
    EXPECT_TRUE(r.passed());
    EXPECT_EQ(r.lower_thm1, 5);
    EXPECT_EQ(r.constructed, 5);
    EXPECT_EQ(r.upper_thm2, 5);
    EXPECT_EQ(r.exact_lambda3, 5);
}

TEST(Audit, OpenSandwichBySearch)
{
    AuditOptions opts;
    opts.exact = true;
    opts.exact_edge_budget = 100;
    opts.construct_cap = 40;
    const auto r = audit(complete_graph(4), complete_graph(3), opts);
    EXPECT_TRUE(r.passed()) << r.first_failure()->detail;
    EXPECT_EQ(r.lower_thm1, 7);
    EXPECT_EQ(r.upper_thm2, 11);
    ASSERT_TRUE(r.exact_lambda3);
    EXPECT_EQ(r.exact_method, "search");
    EXPECT_GE(*r.exact_lambda3, 7);
    EXPECT_LE(*r.exact_lambda3, 11);
    EXPECT_EQ(r.exact_witness.size(), 3U);
}

TEST(Audit, BudgetSkipsSearch)
{
    AuditOptions opts;
    opts.exact = true;
    opts.construct_cap = 20;
    const auto r = audit(complete_graph(4), complete_graph(3), opts);
    EXPECT_FALSE(r.exact_lambda3);
    EXPECT_FALSE(r.notes.empty());
}

TEST(Audit, SearchAgreesWithOracle)
{
    AuditOptions opts;
    opts.exact = true;
    const auto r = audit(cycle_graph(4), path_graph(2), opts);
    ASSERT_TRUE(r.exact_lambda3);
    EXPECT_EQ(*r.exact_lambda3, oracle::lambda3(lex_product(cycle_graph(4), path_graph(2)).graph()));
    EXPECT_TRUE(r.passed());
}

TEST(Audit, JsonSchema)
{
    const auto j = to_json(audit(path_graph(3), empty_graph(3)));
    EXPECT_EQ(j["schema"], 1);
    EXPECT_EQ(j["lower_thm1"], 3);
    EXPECT_EQ(j["yangxu_lambda"], 3);
    EXPECT_EQ(j["H"]["connected"], false);
    EXPECT_TRUE(j["passed"].get<bool>());
    EXPECT_TRUE(j["checks"].is_array());
}

TEST(Audit, RequirePassed)
{
    BoundReport r;
    r.checks.push_back({"demo", false, "1 <= 0"});
    EXPECT_THROW(require_passed(r), AuditFailure);
    r.checks.front().passed = true;
    EXPECT_NO_THROW(require_passed(r));
}

TEST(Inequalities, FlagViolations)
{
    const auto k4 = complete_graph(4);
    EXPECT_FALSE(graph_inequalities(k4, 3, 3, "K4")[2].passed);
    for (const auto& c : graph_inequalities(k4, 3, 2, "K4"))
        EXPECT_TRUE(c.passed) << c.name;
}

TEST(Inequalities, HoldOnSmallCorpus)
{
    SearchOptions opts;
    const auto summary = run_corpus(connected_graphs(3, 5, false), opts, 1);
    EXPECT_EQ(summary.graphs, 4 + 38 + 728);
    EXPECT_EQ(summary.skipped, 0);
    EXPECT_EQ(summary.violations, 0);
}

TEST(Inequalities, LambdaThreeMatchesOracle)
{
    for (const auto& g : connected_graphs(3, 6, true))
        ASSERT_EQ(lambda_k(g, 3), oracle::lambda3(g)) << io::to_edge_list(g);
}
