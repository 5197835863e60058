#include <cmath>

#include <gtest/gtest.h>

#include "echograph/text.hpp"

using namespace echograph::text;

TEST(Tokenize, LowercasesAndKeepsInnerApostrophes) {
    EXPECT_EQ(tokenize("Don't STOP, now!"), (std::vector<std::string>{"don't", "stop", "now"}));
    EXPECT_EQ(tokenize("'quoted' rock'n'roll"), (std::vector<std::string>{"quoted", "rock'n'roll"}));
    EXPECT_EQ(tokenize("ÉCOLE\xE2\x80\x94vote 2016"), (std::vector<std::string>{"école", "vote", "2016"}));
    EXPECT_TRUE(tokenize(" ... ").empty());
}

TEST(Tokenize, SurvivesInvalidUtf8) {
    EXPECT_EQ(tokenize("ab\xFF" "cd"), (std::vector<std::string>{"ab", "cd"}));
}

TEST(Ngrams, UnigramsThenBigrams) {
    EXPECT_EQ(ngrams({"a", "b", "c"}, 1, 2), (std::vector<std::string>{"a", "b", "c", "a b", "b c"}));
    EXPECT_TRUE(ngrams({"a"}, 2, 2).empty());
}

TEST(Tfidf, HandComputedThreeDocuments) {
    // df: cat 2, the 2, dog 1, sat 1 over N = 3 documents.
    const std::vector<Document> docs = {{"The cat sat"}, {"the dog"}, {"cat cat"}};
    TfidfOptions opt;
    opt.max_n = 1;
    TfidfModel model;
    const auto rows = tfidf_features(docs, opt, &model);
    EXPECT_EQ(model.vocabulary(), (std::vector<std::string>{"cat", "the", "dog", "sat"}));
    const double common = std::log(4.0 / 3.0) + 1.0;
    const double rare = std::log(2.0) + 1.0;
    EXPECT_NEAR(model.idf()[0], common, 1e-15);
    EXPECT_NEAR(model.idf()[3], rare, 1e-15);

    const double norm = std::sqrt(2 * common * common + rare * rare);
    ASSERT_EQ(rows[0].index, (std::vector<std::uint32_t>{0, 1, 3}));
    EXPECT_NEAR(rows[0].value[0], common / norm, 1e-15);
    EXPECT_NEAR(rows[0].value[2], rare / norm, 1e-15);
    ASSERT_EQ(rows[2].index, (std::vector<std::uint32_t>{0}));
    EXPECT_NEAR(rows[2].value[0], 1.0, 1e-15);
}

TEST(Tfidf, BigramsDoNotCrossTweets) {
    const std::vector<Document> docs = {{"red blue", "green"}};
    TfidfModel model;
    tfidf_features(docs, {}, &model);
    const auto& v = model.vocabulary();
    EXPECT_NE(std::find(v.begin(), v.end(), "red blue"), v.end());
    EXPECT_EQ(std::find(v.begin(), v.end(), "blue green"), v.end());
}

TEST(Tfidf, VocabularyCapKeepsMostFrequent) {
    const std::vector<Document> docs = {{"a b c"}, {"a b"}, {"a"}};
    TfidfOptions opt;
    opt.max_n = 1;
    opt.vocab_cap = 2;
    TfidfModel model;
    tfidf_features(docs, opt, &model);
    EXPECT_EQ(model.vocabulary(), (std::vector<std::string>{"a", "b"}));
}

TEST(Tfidf, RowsAreUnitLengthOrEmpty) {
    const std::vector<Document> docs = {{"one two three two"}, {""}, {"two"}};
    const auto rows = tfidf_features(docs);
    for (const auto& r : rows) {
        double s = 0;
        for (double x : r.value) s += x * x;
        if (r.value.empty()) continue;
        EXPECT_NEAR(s, 1.0, 1e-12);
    }
    EXPECT_TRUE(rows[1].index.empty());
    EXPECT_THROW(fit_tfidf({}), echograph::ValidationError);
}
