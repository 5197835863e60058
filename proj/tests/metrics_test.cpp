#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "echograph/graph_metrics.hpp"
#include "oracles.hpp"

using namespace echograph;

namespace {

FollowGraph graph_of(std::initializer_list<std::pair<const char*, const char*>> edges) {
    GraphBuilder b;
    for (auto [u, v] : edges) b.add_edge(u, v);
    return b.build();
}

double value_of(const FollowGraph& g, const metrics::NodeMetricVector& m, const char* id) {
    return m.values[*g.index_of(id)];
}

} // namespace

TEST(PageRank, MatchesDenseIterationOnRandomGraphs) {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 30; ++trial) {
        const auto r = oracle::random_graph(gen, 60, 0.15);
        const auto g = oracle::build(r);
        const auto pr = metrics::pagerank(g);
        const auto expected = oracle::dense_pagerank(r);
        ASSERT_TRUE(pr.converged);
        double l1 = 0;
        for (int i = 0; i < r.n; ++i) l1 += std::fabs(pr.scores.values[i] - expected[i]);
        EXPECT_LT(l1, 1e-8) << "trial " << trial;
    }
}

TEST(PageRank, CycleIsUniform) {
    const auto g = graph_of({{"a", "b"}, {"b", "c"}, {"c", "a"}});
    for (double v : metrics::pagerank(g).scores.values) EXPECT_NEAR(v, 1.0 / 3, 1e-12);
}

TEST(PageRank, StarCenterRanksHighest) {
    const auto g = graph_of({{"l1", "hub"}, {"l2", "hub"}, {"l3", "hub"}});
    const auto pr = metrics::pagerank(g);
    EXPECT_GT(value_of(g, pr.scores, "hub"), value_of(g, pr.scores, "l1"));
    EXPECT_NEAR(std::accumulate(pr.scores.values.begin(), pr.scores.values.end(), 0.0), 1.0, 1e-12);
}

TEST(PageRank, AllDanglingGraphIsUniform) {
    GraphBuilder b;
    for (const char* id : {"a", "b", "c", "d"}) b.add_node(id);
    for (double v : metrics::pagerank(b.build()).scores.values) EXPECT_DOUBLE_EQ(v, 0.25);
}

TEST(PageRank, RejectsBadInput) {
    EXPECT_THROW(metrics::pagerank(FollowGraph{}), ValidationError);
    metrics::PageRankOptions bad;
    bad.damping = 1.0;
    EXPECT_THROW(metrics::pagerank(graph_of({{"a", "b"}}), bad), ValidationError);
}

TEST(PageRank, ThreadCountDoesNotChangeBits) {
    std::mt19937_64 gen(5);
    const auto r = oracle::random_graph(gen, 300, 0.05);
    const auto g = oracle::build(r);
    metrics::PageRankOptions one, four;
    four.threads = 4;
    EXPECT_EQ(metrics::pagerank(g, one).scores.values, metrics::pagerank(g, four).scores.values);
}

TEST(Clustering, TriangleAndPath) {
    const auto tri = graph_of({{"a", "b"}, {"b", "c"}, {"c", "a"}});
    for (double v : metrics::clustering_coefficient(tri).values) EXPECT_EQ(v, 1.0);
    const auto path = graph_of({{"a", "b"}, {"b", "c"}});
    for (double v : metrics::clustering_coefficient(path).values) EXPECT_EQ(v, 0.0);
}

TEST(Clustering, ReciprocalEdgesCountOnce) {
    const auto g = graph_of({{"a", "b"}, {"b", "a"}, {"b", "c"}, {"c", "b"}, {"a", "c"}, {"c", "d"}});
    const auto cc = metrics::clustering_coefficient(g);
    EXPECT_DOUBLE_EQ(value_of(g, cc, "a"), 1.0);
    EXPECT_DOUBLE_EQ(value_of(g, cc, "c"), 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(value_of(g, cc, "d"), 0.0);
}

TEST(Clustering, MatchesEnumerationOnRandomGraphs) {
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 30; ++trial) {
        const auto r = oracle::random_graph(gen, 80, 0.2);
        const auto g = oracle::build(r);
        EXPECT_EQ(metrics::clustering_coefficient(g, 2).values, oracle::brute_clustering(r)) << "trial " << trial;
    }
}

TEST(Degrees, CountsDirectedAndUndirected) {
    const auto g = graph_of({{"a", "b"}, {"b", "a"}, {"a", "c"}});
    const auto d = metrics::degrees(g);
    EXPECT_EQ(value_of(g, d.out, "a"), 2.0);
    EXPECT_EQ(value_of(g, d.in, "a"), 1.0);
    EXPECT_EQ(value_of(g, d.undirected, "a"), 2.0);
    EXPECT_EQ(value_of(g, d.undirected, "c"), 1.0);
}

TEST(Metrics, ExportHasOneRowPerNodeAndMetric) {
    const auto g = graph_of({{"a", "b"}});
    const auto pr = metrics::pagerank(g);
    const auto cc = metrics::clustering_coefficient(g);
    const auto text = metrics::export_metrics(g, {&pr.scores, &cc}, "# h\n");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 1 + 4);
    EXPECT_NE(text.find("a,clustering_coefficient,0\n"), std::string::npos);
}
