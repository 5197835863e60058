#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "echograph/forest.hpp"
#include "echograph/predict.hpp"

using namespace echograph;
using forest::Matrix;

namespace {

// Two informative columns (label = x0 + x1 > 1) and three noise columns.
void make_data(std::size_t n, std::uint64_t seed, Matrix& x, std::vector<int>& y) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(0, 1);
    x = Matrix(n, 5);
    y.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < 5; ++c) x(i, c) = u(gen);
        y[i] = x(i, 0) + x(i, 1) > 1.0 ? 1 : 0;
    }
}

} // namespace

TEST(Forest, LearnsSimpleBoundary) {
    Matrix x, xt;
    std::vector<int> y, yt;
    make_data(600, 1, x, y);
    make_data(400, 2, xt, yt);
    forest::RandomForest rf;
    forest::ForestOptions opt;
    opt.n_trees = 60;
    rf.fit(x, y, opt);
    EXPECT_GT(forest::accuracy(rf.predict(xt), yt), 0.9);
    const auto p = rf.predict_proba(xt.row(0));
    EXPECT_NEAR(p[0] + p[1], 1.0, 1e-12);
}

TEST(Forest, PureNodeIsALeaf) {
    Matrix x(4, 1);
    for (std::size_t i = 0; i < 4; ++i) x(i, 0) = static_cast<double>(i);
    forest::RandomForest rf;
    forest::ForestOptions opt;
    opt.n_trees = 3;
    rf.fit(x, {1, 1, 1, 1}, opt);
    for (const auto& t : rf.trees()) EXPECT_EQ(t.node_count(), 1u);
    EXPECT_EQ(rf.predict(x.row(0)), 1);
}

TEST(Forest, DepthLimitIsRespected) {
    Matrix x;
    std::vector<int> y;
    make_data(300, 3, x, y);
    forest::ForestOptions opt;
    opt.n_trees = 5;
    opt.max_depth = 1;
    forest::RandomForest rf;
    rf.fit(x, y, opt);
    for (const auto& t : rf.trees()) EXPECT_LE(t.node_count(), 3u);
}

TEST(Forest, ThreadCountDoesNotChangeModel) {
    Matrix x;
    std::vector<int> y;
    make_data(300, 4, x, y);
    forest::ForestOptions one, four;
    one.n_trees = four.n_trees = 16;
    four.threads = 4;
    forest::RandomForest a, b;
    a.fit(x, y, one);
    b.fit(x, y, four);
    ASSERT_EQ(a.trees().size(), b.trees().size());
    for (std::size_t t = 0; t < a.trees().size(); ++t) {
        EXPECT_EQ(a.trees()[t].threshold, b.trees()[t].threshold);
        EXPECT_EQ(a.trees()[t].class_frequency, b.trees()[t].class_frequency);
    }
}

TEST(Forest, RejectsBadInput) {
    forest::RandomForest rf;
    EXPECT_THROW(rf.fit(Matrix(2, 1), {0}), ValidationError);
    EXPECT_THROW(rf.fit(Matrix(1, 1), {-1}), ValidationError);
}

TEST(Folds, StratifiedAndBalanced) {
    std::vector<int> y(103, 0);
    for (std::size_t i = 0; i < 37; ++i) y[i] = 1;
    const auto f = predict::stratified_folds(y, 10, 9);
    std::vector<int> size(10, 0), pos(10, 0);
    for (std::size_t i = 0; i < y.size(); ++i) {
        ++size[f[i]];
        pos[f[i]] += y[i];
    }
    EXPECT_LE(*std::max_element(size.begin(), size.end()) - *std::min_element(size.begin(), size.end()), 1);
    EXPECT_LE(*std::max_element(pos.begin(), pos.end()) - *std::min_element(pos.begin(), pos.end()), 1);
    EXPECT_EQ(f, predict::stratified_folds(y, 10, 9));
    EXPECT_THROW(predict::stratified_folds(y, 1, 9), ValidationError);
}

TEST(CrossValidate, PermutedLabelsNearChance) {
    Matrix x;
    std::vector<int> y;
    make_data(400, 5, x, y);
    forest::ForestOptions opt;
    opt.n_trees = 30;
    const auto real = predict::cross_validate(x, y, 5, opt, 1);
    const auto shuffled = predict::cross_validate(x, predict::permute_labels(y, 2), 5, opt, 1);
    EXPECT_GT(real.mean_accuracy, 0.85);
    EXPECT_LT(shuffled.mean_accuracy, 0.65);
    EXPECT_EQ(real.folds.size(), 5u);
}

namespace {

polarity::RoleLabel role(std::optional<polarity::PartisanLabel> p, std::optional<bool> gk) {
    polarity::RoleLabel r;
    r.partisan = p;
    r.gatekeeper = gk;
    return r;
}

} // namespace

TEST(BuildTask, StrictAndDownsample) {
    using polarity::PartisanLabel;
    std::vector<polarity::RoleLabel> labels;
    for (int i = 0; i < 6; ++i) labels.push_back(role(PartisanLabel::left_partisan, i == 0));
    for (int i = 0; i < 2; ++i) labels.push_back(role(PartisanLabel::bipartisan, false));
    labels.push_back(role(std::nullopt, std::nullopt));

    EXPECT_THROW(predict::build_task(labels, predict::Target::partisan, 1, predict::BalanceMode::strict),
                 ValidationError);
    const auto ds = predict::build_task(labels, predict::Target::partisan, 1, predict::BalanceMode::downsample);
    EXPECT_EQ(ds.rows.size(), 4u);
    EXPECT_EQ(std::count(ds.labels.begin(), ds.labels.end(), 1), 2);

    const auto gk = predict::build_task(labels, predict::Target::gatekeeper, 1);
    EXPECT_EQ(gk.rows.size(), 2u);
    EXPECT_EQ(gk.rows[0], 0u);
    EXPECT_EQ(predict::build_task(labels, predict::Target::gatekeeper, 1).rows, gk.rows);

    std::vector<polarity::RoleLabel> none(3, role(PartisanLabel::bipartisan, false));
    EXPECT_THROW(predict::build_task(none, predict::Target::gatekeeper, 1), ValidationError);
}

TEST(ModelFile, RoundTripPredictsIdentically) {
    predict::FeatureSet fs;
    std::vector<text::Document> docs;
    std::mt19937_64 gen(6);
    std::uniform_real_distribution<double> u(0, 1);
    predict::LabeledDataset ds;
    for (std::size_t i = 0; i < 60; ++i) {
        predict::FeatureVector f;
        f.user_id = "u" + std::to_string(i);
        f.degree = u(gen) * 10 + (i % 2 ? 5 : 0);
        f.pagerank = u(gen) / 100;
        docs.push_back({i % 2 ? "alpha beta" : "gamma delta"});
        fs.users.push_back(f);
        ds.rows.push_back(i);
        ds.labels.push_back(static_cast<int>(i % 2));
    }
    const auto rows = text::tfidf_features(docs, {}, &fs.tfidf);
    for (std::size_t i = 0; i < rows.size(); ++i) fs.users[i].text = rows[i];

    forest::ForestOptions opt;
    opt.n_trees = 10;
    const auto model = predict::train(fs, ds, predict::FeatureBlocks::all, opt);
    const auto text = predict::serialize(model);
    std::istringstream in("# comment\n" + text);
    const auto back = predict::deserialize(in);
    EXPECT_EQ(predict::serialize(back), text);
    const auto x = predict::assemble(fs, ds.rows, predict::FeatureBlocks::all);
    EXPECT_EQ(back.forest.predict(x), model.forest.predict(x));

    std::istringstream truncated(text.substr(0, text.size() / 2));
    EXPECT_THROW(predict::deserialize(truncated), ParseError);
    std::istringstream wrong("echograph-forest-model 2\n");
    EXPECT_THROW(predict::deserialize(wrong), ParseError);
}

TEST(Features, BlocksSelectColumns) {
    predict::FeatureSet fs;
    const std::vector<text::Document> docs = {{"x y"}};
    fs.users.resize(1);
    fs.users[0].text = text::tfidf_features(docs, {}, &fs.tfidf)[0];
    EXPECT_EQ(predict::feature_names(fs, predict::FeatureBlocks::network_profile).size(), 8u);
    EXPECT_EQ(predict::feature_names(fs, predict::FeatureBlocks::ngram).size(), 3u);
    EXPECT_EQ(predict::feature_names(fs, predict::FeatureBlocks::all).size(), 11u);
    EXPECT_EQ(predict::parse_blocks("net"), predict::FeatureBlocks::network_profile);
    EXPECT_THROW(predict::parse_blocks("bogus"), ValidationError);
}
