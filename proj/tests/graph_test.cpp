#include <sstream>

#include <gtest/gtest.h>

#include "echograph/graph.hpp"

using namespace echograph;

namespace {

FollowGraph from_text(const std::string& text, EdgeListStats* stats = nullptr) {
    std::istringstream in(text);
    return read_edge_list(in, "edges", stats);
}

} // namespace

TEST(GraphBuilder, SortsIdsAndDeduplicates) {
    GraphBuilder b;
    b.add_edge("c", "a");
    b.add_edge("a", "b");
    b.add_edge("a", "b");
    EXPECT_FALSE(b.add_edge("b", "b"));
    const auto g = b.build();
    ASSERT_EQ(g.node_count(), 3u);
    EXPECT_EQ(g.edge_count(), 2u);
    EXPECT_EQ(g.id(0), "a");
    EXPECT_EQ(g.id(2), "c");
    EXPECT_EQ(b.self_loops_dropped(), 1u);
    EXPECT_EQ(g.out_degree(*g.index_of("a")), 1u);
    EXPECT_EQ(g.in_degree(*g.index_of("a")), 1u);
    EXPECT_EQ(g.in_degree(*g.index_of("b")), 1u);
}

TEST(GraphBuilder, InsertionOrderDoesNotMatter) {
    GraphBuilder x, y;
    x.add_edge("u1", "u2");
    x.add_edge("u3", "u1");
    x.add_node("u9");
    y.add_node("u9");
    y.add_edge("u3", "u1");
    y.add_edge("u1", "u2");
    EXPECT_TRUE(x.build() == y.build());
}

TEST(GraphBuilder, ReverseListsMirrorForwardLists) {
    GraphBuilder b;
    b.add_edge("a", "b");
    b.add_edge("a", "c");
    b.add_edge("c", "b");
    const auto g = b.build();
    const auto bi = *g.index_of("b");
    std::vector<NodeIndex> followers(g.in_neighbors(bi).begin(), g.in_neighbors(bi).end());
    EXPECT_EQ(followers, (std::vector<NodeIndex>{*g.index_of("a"), *g.index_of("c")}));
    const auto un = g.undirected_neighbors(*g.index_of("c"));
    EXPECT_EQ(un, (std::vector<NodeIndex>{*g.index_of("a"), *g.index_of("b")}));
}

TEST(EdgeList, ParsesCommentsAndCountsRecords) {
    EdgeListStats st;
    const auto g = from_text("# header\nu1\tu2\n\nu2\tu1\nu1\tu2\nu3\tu3\n", &st);
    EXPECT_EQ(g.node_count(), 3u);
    EXPECT_EQ(g.edge_count(), 2u);
    EXPECT_EQ(st.records, 4u);
    EXPECT_EQ(st.self_loops_dropped, 1u);
    EXPECT_EQ(st.duplicates_collapsed, 1u);
}

TEST(EdgeList, MalformedLineReportsLineNumber) {
    try {
        from_text("a\tb\nonly-one-field\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    EXPECT_THROW(from_text("a\tb\tc\n"), ParseError);
    EXPECT_THROW(from_text("\tb\n"), ParseError);
}

TEST(EdgeList, WriteReadRoundTrip) {
    const auto g = from_text("x\ty\ny\tz\nz\tx\nw\tx\n");
    const auto text = write_edge_list(g, "# generated\n");
    EXPECT_TRUE(from_text(text) == g);
}

TEST(Graph, InducedSubgraphKeepsOnlyInternalEdges) {
    const auto g = from_text("a\tb\nb\tc\nc\ta\nc\td\n");
    const auto h = g.induced({"a", "b", "c"});
    EXPECT_EQ(h.node_count(), 3u);
    EXPECT_EQ(h.edge_count(), 3u);
    EXPECT_FALSE(h.contains("d"));
}
