#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "echograph/format.hpp"
#include "echograph/parallel.hpp"
#include "echograph/random.hpp"

using namespace echograph;

TEST(Format, ShortestRoundTrip) {
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(-0.0), "0");
    EXPECT_EQ(format_double(1e-20), "1e-20");
    EXPECT_EQ(format_double(std::nan("")), "nan");
    EXPECT_EQ(format_optional(std::nullopt), "NA");
    const double x = 0.1 + 0.2;
    EXPECT_EQ(*parse_double(format_double(x)), x);
}

TEST(Format, ParseRejectsJunk) {
    EXPECT_FALSE(parse_double("1.5x"));
    EXPECT_FALSE(parse_double(""));
    EXPECT_EQ(parse_double(" 2.5 "), 2.5);
    EXPECT_EQ(parse_integer<std::int64_t>("-42"), -42);
    EXPECT_FALSE(parse_integer<std::int64_t>("4.2"));
}

TEST(Format, SplitKeepsEmptyFields) {
    const auto f = split("a,,b,", ',');
    ASSERT_EQ(f.size(), 4u);
    EXPECT_EQ(f[1], "");
    EXPECT_EQ(f[3], "");
}

TEST(Fnv1a, KnownDigest) {
    Fnv1a h;
    EXPECT_EQ(h.digest(), 0xcbf29ce484222325ULL);
    h.update("a");
    EXPECT_EQ(h.digest(), 0xaf63dc4c8601ec8cULL);
}

TEST(Random, SplitMixReferenceValue) {
    std::uint64_t state = 0;
    EXPECT_EQ(splitmix64(state), 0xe220a8397b1dcdafULL);
}

TEST(Random, StreamsAreReproducibleAndDistinct) {
    Rng a(5, "x", 1), b(5, "x", 1), c(5, "x", 2), d(5, "y", 1);
    const auto va = a.next();
    EXPECT_EQ(va, b.next());
    EXPECT_NE(va, c.next());
    EXPECT_NE(va, d.next());
}

TEST(Random, BelowIsInRangeAndCoversIt) {
    Rng r(1);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        const auto v = r.below(7);
        ASSERT_LT(v, 7u);
        seen.insert(v);
    }
    EXPECT_EQ(seen.size(), 7u);
}

TEST(Random, DistributionMoments) {
    Rng r(42);
    const int n = 200000;
    double sn = 0, sn2 = 0, sb = 0, sg = 0, sp = 0;
    for (int i = 0; i < n; ++i) {
        const double z = r.normal();
        sn += z;
        sn2 += z * z;
        sb += r.beta(2, 8);
        sg += r.gamma(3.5);
        sp += static_cast<double>(r.poisson(40.0));
    }
    EXPECT_NEAR(sn / n, 0.0, 0.01);
    EXPECT_NEAR(sn2 / n, 1.0, 0.01);
    EXPECT_NEAR(sb / n, 0.2, 0.002);
    EXPECT_NEAR(sg / n, 3.5, 0.02);
    EXPECT_NEAR(sp / n, 40.0, 0.1);
}

TEST(Random, SampleWithoutReplacementIsDistinct) {
    Rng r(3);
    const auto s = r.sample_without_replacement(100, 40);
    EXPECT_EQ(s.size(), 40u);
    EXPECT_EQ(std::set<std::size_t>(s.begin(), s.end()).size(), 40u);
    for (auto v : s) EXPECT_LT(v, 100u);
    EXPECT_EQ(r.sample_without_replacement(3, 4).size(), 3u);
}

TEST(Parallel, CoversEveryIndexOnce) {
    std::vector<int> hits(1001, 0);
    parallel_for(hits.size(), 4, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) ++hits[i];
    });
    for (int h : hits) EXPECT_EQ(h, 1);
}

TEST(Parallel, PropagatesExceptions) {
    EXPECT_THROW(parallel_for(10, 3, [](std::size_t b, std::size_t) {
                     if (b > 0) throw std::runtime_error("boom");
                 }),
                 std::runtime_error);
}
