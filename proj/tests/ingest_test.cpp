#include <sstream>

#include <gtest/gtest.h>

#include "echograph/ingest.hpp"

using namespace echograph;
using namespace echograph::ingest;

TEST(Domain, ExtractsAndNormalizesHosts) {
    EXPECT_EQ(extract_domain("https://www.NYTimes.com/2016/a.html"), "nytimes.com");
    EXPECT_EQ(extract_domain("http://user:pw@edition.cnn.com:8080/x?y#z"), "edition.cnn.com");
    EXPECT_EQ(extract_domain("foxnews.com/politics"), "foxnews.com");
    EXPECT_EQ(extract_domain("//bbc.co.uk"), "bbc.co.uk");
    EXPECT_EQ(extract_domain("https://example.org./"), "example.org");
}

TEST(Domain, RejectsMalformedUrls) {
    for (const char* bad : {"", "not a url", "http://localhost/", "http://1.2.3.4/", "https://[::1]/",
                            "http://-bad-.com", "http://a..com", "http://host.com:80x/", "1http://x.com"})
        EXPECT_FALSE(extract_domain(bad).has_value()) << bad;
}

TEST(LeaningTable, LooksUpParentsAndAliases) {
    std::istringstream in("# c\nnytimes.com,0.2\nfoxnews.com,0.85\nfxn.ws,=,foxnews.com\n");
    const auto t = load_leaning_table(in);
    EXPECT_EQ(t.size(), 2u);
    EXPECT_EQ(t.lookup("nytimes.com"), 0.2);
    EXPECT_EQ(t.lookup("politics.nytimes.com"), 0.2);
    EXPECT_EQ(t.lookup("www.foxnews.com"), 0.85);
    EXPECT_EQ(t.lookup("fxn.ws"), 0.85);
    EXPECT_FALSE(t.lookup("times.com"));
    EXPECT_FALSE(t.lookup("com"));
}

TEST(LeaningTable, RejectsBadRows) {
    auto load = [](const char* text) {
        std::istringstream in(text);
        return load_leaning_table(in);
    };
    EXPECT_THROW(load("a.com,1.5\n"), ValidationError);
    EXPECT_THROW(load("a.com,0.5\na.com,0.4\n"), ValidationError);
    EXPECT_THROW(load("x.co,=,missing.com\n"), ValidationError);
    try {
        load("a.com,0.5\nb.com,zero\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
}

TEST(LeaningTable, WriteReadRoundTrip) {
    SourceLeaningTable t;
    t.add_entry("a.com", 0.25);
    t.add_alias("b.co", "a.com");
    std::istringstream in(write_leaning_table(t, "# h\n"));
    const auto u = load_leaning_table(in);
    EXPECT_EQ(u.entries(), t.entries());
    EXPECT_EQ(u.aliases(), t.aliases());
}

TEST(ResolveLeaning, AveragesMatchedLinksOnly) {
    SourceLeaningTable t;
    t.add_entry("left.com", 0.0);
    t.add_entry("right.com", 1.0);
    TweetRecord tw;
    tw.urls = {"https://left.com/x", "https://right.com/y", "https://other.com/z", "garbage"};
    EXPECT_DOUBLE_EQ(*resolve_leaning(tw, t), 0.5);
    tw.urls = {"https://other.com/"};
    EXPECT_FALSE(resolve_leaning(tw, t).has_value());
}

TEST(Tweets, JsonLinesRoundTrip) {
    std::istringstream in(
        "# header\n"
        "{\"tweet_id\":1,\"user_id\":\"u1\",\"timestamp\":10,\"urls\":[\"http://a.com\"],\"text\":\"hi\","
        "\"retweet_count\":3,\"favorite_count\":4}\n"
        "\n"
        "{\"tweet_id\":\"2\",\"user_id\":\"u2\"}\n");
    const auto tweets = read_tweets(in);
    ASSERT_EQ(tweets.size(), 2u);
    EXPECT_EQ(tweets[0].tweet_id, "1");
    EXPECT_EQ(tweets[0].retweet_count, 3);
    EXPECT_TRUE(tweets[1].urls.empty());
    std::istringstream again(write_tweets(tweets));
    const auto back = read_tweets(again);
    EXPECT_EQ(back[0].text, "hi");
    EXPECT_EQ(back[0].favorite_count, 4);
    EXPECT_EQ(back[1].user_id, "u2");
}

TEST(Tweets, MalformedLineNamesLine) {
    std::istringstream in("{\"tweet_id\":1,\"user_id\":\"u\"}\n{\"tweet_id\":2}\n");
    try {
        read_tweets(in);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    std::istringstream neg("{\"tweet_id\":1,\"user_id\":\"u\",\"retweet_count\":-1}\n");
    EXPECT_THROW(read_tweets(neg), ParseError);
}

TEST(Profiles, ReadsWithHeaderAndRejectsFutureAccounts) {
    std::istringstream in("user_id,followers_count,friends_count,statuses_count,account_created\nu1,5,6,7,100\n");
    const auto p = read_profiles(in, "profiles", 1000);
    ASSERT_EQ(p.size(), 1u);
    EXPECT_EQ(p.at("u1").friends_count, 6);
    std::istringstream future("u1,5,6,7,5000\n");
    EXPECT_THROW(read_profiles(future, "profiles", 1000), ValidationError);
    std::istringstream dup("u1,5,6,7,1\nu1,5,6,7,1\n");
    EXPECT_THROW(read_profiles(dup, "profiles", 1000), ValidationError);
}

namespace {

constexpr std::int64_t kDay = 86400;

UserProfileRecord profile(const std::string& id, std::int64_t followers, std::int64_t friends, std::int64_t statuses,
                          std::int64_t age_days, std::int64_t now) {
    return {id, followers, friends, statuses, now - age_days * kDay};
}

} // namespace

TEST(BotFilter, EachThresholdHasItsReason) {
    const std::int64_t now = 1000 * kDay;
    BotThresholds t;
    EXPECT_TRUE(bot_violations(profile("ok", 50, 50, 1000, 500, now), t, now).empty());
    EXPECT_EQ(bot_violations(profile("young", 50, 50, 10, 30, now), t, now), std::vector<std::string>{"account_age"});
    EXPECT_EQ(bot_violations(profile("chatty", 50, 50, 500 * 101, 500, now), t, now),
              std::vector<std::string>{"tweets_per_day_high"});
    EXPECT_EQ(bot_violations(profile("lonely", 9, 50, 10, 500, now), t, now), std::vector<std::string>{"followers"});
    EXPECT_EQ(bot_violations(profile("shy", 50, 9, 10, 500, now), t, now), std::vector<std::string>{"friends"});
    t.min_tweets_per_day = 1.0;
    EXPECT_EQ(bot_violations(profile("quiet", 50, 50, 10, 500, now), t, now),
              std::vector<std::string>{"tweets_per_day_low"});
}

TEST(BotFilter, FilterOrderOnlyChangesAttribution) {
    const std::int64_t now = 1000 * kDay;
    std::map<std::string, UserProfileRecord> profiles;
    profiles["bot"] = profile("bot", 1, 1, 1, 500, now);
    profiles["fine"] = profile("fine", 50, 50, 100, 500, now);
    profiles["lazybot"] = profile("lazybot", 1, 1, 1, 500, now);
    std::vector<TweetRecord> tweets;
    auto add = [&](const std::string& u, int n) {
        for (int i = 0; i < n; ++i) {
            TweetRecord t;
            t.user_id = u;
            t.tweet_id = u + std::to_string(i);
            t.timestamp = now;
            tweets.push_back(t);
        }
    };
    add("bot", 6);
    add("fine", 6);
    add("lazybot", 1);
    add("noprofile", 6);
    const Corpus corpus(tweets, SourceLeaningTable{});
    BotThresholds t;
    const auto a = apply_user_filters(profiles, corpus, t, 5, FilterOrder::bots_first);
    const auto b = apply_user_filters(profiles, corpus, t, 5, FilterOrder::activity_first);
    EXPECT_EQ(a.retained, (std::set<std::string>{"fine"}));
    EXPECT_EQ(a.retained, b.retained);
    ASSERT_EQ(a.removals.size(), 3u);
    EXPECT_EQ(a.removals[1].user_id, "lazybot");
    EXPECT_EQ(a.removals[1].stage, "bot");
    EXPECT_EQ(b.removals[1].stage, "activity");
    EXPECT_EQ(a.removals[2].reasons, "missing_profile");
}

TEST(Corpus, GroupsObservationsPerUser) {
    SourceLeaningTable table;
    table.add_entry("a.com", 0.3);
    TweetRecord t1{"t1", "u", 5, {"http://a.com/1"}, "", 0, 0};
    TweetRecord t2{"t2", "u", 9, {}, "", 0, 0};
    TweetRecord t3{"t3", "v", 7, {"http://a.com/2"}, "", 0, 0};
    const Corpus c({t1, t2, t3}, table);
    EXPECT_EQ(c.user_count(), 2u);
    EXPECT_EQ(c.tweets("u").size(), 2u);
    EXPECT_EQ(c.observations("u").size(), 1u);
    EXPECT_EQ(c.observation_count(), 2u);
    EXPECT_EQ(c.latest_timestamp(), 9);
    EXPECT_TRUE(c.tweets("nobody").empty());
    EXPECT_EQ(c.restricted({"v"}).user_count(), 1u);
}
