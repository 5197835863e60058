#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "echograph/error.hpp"
#include "echograph/forest.hpp"
#include "echograph/format.hpp"
#include "echograph/graph.hpp"
#include "echograph/ingest.hpp"
#include "echograph/polarity.hpp"
#include "echograph/random.hpp"
#include "echograph/text.hpp"

namespace echograph::predict {

/// Which feature groups feed the classifier: network + profile ("net"),
/// n-grams only, or everything.
enum class FeatureBlocks { network_profile, ngram, all };

inline const char* to_string(FeatureBlocks b) {
    switch (b) {
    case FeatureBlocks::network_profile: return "net";
    case FeatureBlocks::ngram: return "ngram";
    case FeatureBlocks::all: return "all";
    }
    return "?";
}

inline FeatureBlocks parse_blocks(std::string_view s) {
    if (s == "net") return FeatureBlocks::network_profile;
    if (s == "ngram") return FeatureBlocks::ngram;
    if (s == "all") return FeatureBlocks::all;
    throw ValidationError("unknown feature block set: " + std::string(s));
}

struct FeatureVector {
    std::string user_id;
    // network
    double pagerank = 0.0;
    double degree = 0.0;
    double clustering = 0.0;
    double network_present = 0.0; // 1 when the user has at least one edge
    // profile
    double tweets = 0.0;
    double followers = 0.0;
    double friends = 0.0;
    double age_weeks = 0.0;
    // text, L2-normalized tf-idf
    text::SparseRow text;
};

struct FeatureSet {
    std::vector<FeatureVector> users;
    text::TfidfModel tfidf;
};

inline const std::vector<std::string>& network_profile_names() {
    static const std::vector<std::string> names = {"pagerank", "degree",    "clustering_coefficient",
                                                   "network_present", "tweets", "followers",
                                                   "friends",  "age_weeks"};
    return names;
}

struct NetworkInputs {
    const FollowGraph* graph = nullptr;
    const std::vector<double>* pagerank = nullptr;
    const std::vector<double>* clustering = nullptr;
    const std::vector<double>* degree = nullptr;
};

/// Feature vectors for `user_ids` (usually the graph nodes). Users missing
/// from the graph, or isolated in it, get zero network metrics and
/// network_present = 0. Users without a profile get zero profile features.
inline FeatureSet build_features(const std::vector<std::string>& user_ids, const NetworkInputs& net,
                                 const std::map<std::string, ingest::UserProfileRecord>& profiles,
                                 const ingest::Corpus& corpus, std::int64_t reference_time,
                                 const text::TfidfOptions& tfidf = {}) {
    FeatureSet fs;
    std::vector<text::Document> docs;
    for (const auto& id : user_ids) {
        FeatureVector f;
        f.user_id = id;
        if (net.graph) {
            if (auto u = net.graph->index_of(id)) {
                f.pagerank = (*net.pagerank)[*u];
                f.degree = (*net.degree)[*u];
                f.clustering = (*net.clustering)[*u];
                f.network_present = f.degree > 0 ? 1.0 : 0.0;
                if (f.network_present == 0.0) f.pagerank = 0.0;
            }
        }
        if (auto it = profiles.find(id); it != profiles.end()) {
            f.tweets = static_cast<double>(it->second.statuses_count);
            f.followers = static_cast<double>(it->second.followers_count);
            f.friends = static_cast<double>(it->second.friends_count);
            f.age_weeks = static_cast<double>(reference_time - it->second.account_created) / (7.0 * 86400.0);
        }
        text::Document doc;
        for (const auto& t : corpus.tweets(id)) doc.push_back(t.text);
        docs.push_back(std::move(doc));
        fs.users.push_back(std::move(f));
    }
    auto rows = text::tfidf_features(docs, tfidf, &fs.tfidf);
    for (std::size_t i = 0; i < rows.size(); ++i) fs.users[i].text = std::move(rows[i]);
    return fs;
}

inline std::vector<std::string> feature_names(const FeatureSet& fs, FeatureBlocks blocks) {
    std::vector<std::string> names;
    if (blocks != FeatureBlocks::ngram) names = network_profile_names();
    if (blocks != FeatureBlocks::network_profile)
        for (const auto& term : fs.tfidf.vocabulary()) names.push_back("ngram:" + term);
    return names;
}

inline void write_row(const FeatureVector& f, FeatureBlocks blocks, std::size_t vocab, std::span<double> out) {
    std::size_t c = 0;
    if (blocks != FeatureBlocks::ngram) {
        for (double v : {f.pagerank, f.degree, f.clustering, f.network_present, f.tweets, f.followers, f.friends,
                         f.age_weeks})
            out[c++] = v;
    }
    if (blocks != FeatureBlocks::network_profile) {
        std::fill(out.begin() + static_cast<std::ptrdiff_t>(c), out.begin() + static_cast<std::ptrdiff_t>(c + vocab), 0.0);
        for (std::size_t k = 0; k < f.text.index.size(); ++k) out[c + f.text.index[k]] = f.text.value[k];
    }
}

/// Dense matrix for the given user rows (indices into fs.users).
inline forest::Matrix assemble(const FeatureSet& fs, const std::vector<std::size_t>& rows, FeatureBlocks blocks) {
    const std::size_t width = feature_names(fs, blocks).size();
    forest::Matrix m(rows.size(), width);
    std::vector<double> buf(width);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        write_row(fs.users[rows[r]], blocks, fs.tfidf.size(), buf);
        for (std::size_t c = 0; c < width; ++c) m(r, c) = buf[c];
    }
    return m;
}

// ---------------------------------------------------------------------------
// Tasks

enum class Target { partisan, gatekeeper };

inline const char* to_string(Target t) { return t == Target::partisan ? "partisan" : "gatekeeper"; }

/// strict: fewer negatives than positives is an error. downsample: the
/// larger class is subsampled to the size of the smaller one.
enum class BalanceMode { strict, downsample };

struct LabeledDataset {
    Target target = Target::partisan;
    std::vector<std::size_t> rows; // indices into the user list
    std::vector<int> labels;       // 1 = target role
    bool balanced = false;
    std::uint64_t seed = 0;
};

/// Positives are the users holding the target role; negatives a seeded
/// uniform sample of equal size from users whose role is defined but
/// different (bipartisans, or non-gatekeepers).
inline LabeledDataset build_task(const std::vector<polarity::RoleLabel>& labels, Target target, std::uint64_t seed,
                                 BalanceMode mode = BalanceMode::strict) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto& r = labels[i];
        if (target == Target::partisan) {
            if (r.is_partisan()) pos.push_back(i);
            else if (r.is_bipartisan()) neg.push_back(i);
        } else if (r.gatekeeper) {
            (*r.gatekeeper ? pos : neg).push_back(i);
        }
    }
    if (pos.empty()) throw ValidationError(std::string("build_task: no ") + to_string(target) + " users");
    if (neg.size() < pos.size()) {
        if (mode == BalanceMode::strict)
            throw ValidationError("build_task: fewer negatives (" + std::to_string(neg.size()) + ") than positives (" +
                                  std::to_string(pos.size()) + ")");
        Rng prng(seed, "task-positives");
        std::vector<std::size_t> kept;
        for (auto j : prng.sample_without_replacement(pos.size(), neg.size())) kept.push_back(pos[j]);
        std::sort(kept.begin(), kept.end());
        pos = std::move(kept);
    }
    Rng rng(seed, "task-negatives");
    std::vector<std::size_t> sampled;
    for (auto j : rng.sample_without_replacement(neg.size(), pos.size())) sampled.push_back(neg[j]);
    std::sort(sampled.begin(), sampled.end());

    LabeledDataset ds;
    ds.target = target;
    ds.seed = seed;
    for (auto i : pos) {
        ds.rows.push_back(i);
        ds.labels.push_back(1);
    }
    for (auto i : sampled) {
        ds.rows.push_back(i);
        ds.labels.push_back(0);
    }
    ds.balanced = pos.size() == sampled.size();
    return ds;
}

inline std::vector<int> permute_labels(std::vector<int> labels, std::uint64_t seed) {
    Rng rng(seed, "label-permutation");
    rng.shuffle(labels);
    return labels;
}

// ---------------------------------------------------------------------------
// Training and cross-validation

struct TrainedModel {
    forest::RandomForest forest;
    forest::ForestOptions options;
    FeatureBlocks blocks = FeatureBlocks::all;
    std::vector<std::string> feature_names;
    text::TfidfModel tfidf;
};

inline TrainedModel train(const FeatureSet& fs, const LabeledDataset& ds, FeatureBlocks blocks,
                          const forest::ForestOptions& opt) {
    if (ds.rows.empty()) throw ValidationError("train: empty dataset");
    TrainedModel m;
    m.options = opt;
    m.blocks = blocks;
    m.feature_names = feature_names(fs, blocks);
    m.tfidf = fs.tfidf;
    m.forest.fit(assemble(fs, ds.rows, blocks), ds.labels, opt);
    return m;
}

/// Fold id per row. Each class is shuffled and dealt round-robin, the deal
/// continuing across classes, so fold sizes and per-class counts differ by
/// at most one.
inline std::vector<int> stratified_folds(const std::vector<int>& labels, int k, std::uint64_t seed) {
    if (k < 2) throw ValidationError("cross_validate: k must be >= 2");
    if (static_cast<std::size_t>(k) > labels.size()) throw ValidationError("cross_validate: k exceeds dataset size");
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
    std::vector<int> fold(labels.size(), 0);
    std::size_t dealt = 0;
    for (auto& [cls, idx] : by_class) {
        Rng rng(seed, "folds", static_cast<std::uint64_t>(cls));
        rng.shuffle(idx);
        for (auto i : idx) fold[i] = static_cast<int>(dealt++ % static_cast<std::size_t>(k));
    }
    return fold;
}

struct FoldResult {
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    double accuracy = 0.0;
};

struct CVReport {
    std::vector<FoldResult> folds;
    double mean_accuracy = 0.0;
    std::uint64_t seed = 0;
};

inline CVReport cross_validate(const forest::Matrix& x, const std::vector<int>& y, int k,
                               const forest::ForestOptions& opt, std::uint64_t seed) {
    const auto fold = stratified_folds(y, k, seed);
    CVReport rep;
    rep.seed = seed;
    for (int f = 0; f < k; ++f) {
        std::vector<std::size_t> train_rows, test_rows;
        for (std::size_t i = 0; i < y.size(); ++i) (fold[i] == f ? test_rows : train_rows).push_back(i);
        std::vector<int> ytrain, ytest;
        for (auto i : train_rows) ytrain.push_back(y[i]);
        for (auto i : test_rows) ytest.push_back(y[i]);
        forest::ForestOptions fo = opt;
        fo.seed = derive_seed(opt.seed, "cv-fold", static_cast<std::uint64_t>(f));
        forest::RandomForest rf;
        rf.fit(x.select_rows(train_rows), ytrain, fo);
        FoldResult r;
        r.n_train = train_rows.size();
        r.n_test = test_rows.size();
        r.accuracy = forest::accuracy(rf.predict(x.select_rows(test_rows)), ytest);
        rep.folds.push_back(r);
        rep.mean_accuracy += r.accuracy;
    }
    rep.mean_accuracy /= static_cast<double>(k);
    return rep;
}

inline CVReport cross_validate(const FeatureSet& fs, const LabeledDataset& ds, FeatureBlocks blocks, int k,
                               const forest::ForestOptions& opt, std::uint64_t seed) {
    return cross_validate(assemble(fs, ds.rows, blocks), ds.labels, k, opt, seed);
}

inline std::string export_cv(const CVReport& rep, std::string_view header = {}) {
    std::string out(header);
    out += "fold,n_train,n_test,accuracy\n";
    for (std::size_t f = 0; f < rep.folds.size(); ++f)
        out += std::to_string(f) + "," + std::to_string(rep.folds[f].n_train) + "," +
               std::to_string(rep.folds[f].n_test) + "," + format_double(rep.folds[f].accuracy) + "\n";
    out += "mean,,," + format_double(rep.mean_accuracy) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Model file
//
// Line-oriented text, version 1:
//
//   echograph-forest-model 1
//   blocks <net|ngram|all>
//   options <n_trees> <max_depth> <features_per_split> <min_samples_split> <seed>
//   classes <C>
//   features <P>            followed by P lines, one feature name each
//   vocabulary <V>          followed by V lines "<idf>\t<term>"
//   ngram_range <min_n> <max_n>
//   trees <T>
//   tree <N>                followed by N node lines:
//     <feature> <threshold> <left> <right> <freq_0> ... <freq_C-1>
//   end
//
// A leaf has feature -1. Numbers use shortest round-trip decimal form, so
// a reloaded model predicts exactly like the original.

inline std::string serialize(const TrainedModel& m) {
    std::ostringstream os;
    os << "echograph-forest-model 1\n";
    os << "blocks " << to_string(m.blocks) << "\n";
    os << "options " << m.options.n_trees << " " << m.options.max_depth << " " << m.options.features_per_split << " "
       << m.options.min_samples_split << " " << m.options.seed << "\n";
    os << "classes " << m.forest.class_count() << "\n";
    os << "features " << m.feature_names.size() << "\n";
    for (const auto& n : m.feature_names) os << n << "\n";
    os << "vocabulary " << m.tfidf.size() << "\n";
    for (std::size_t i = 0; i < m.tfidf.size(); ++i)
        os << format_double(m.tfidf.idf()[i]) << "\t" << m.tfidf.vocabulary()[i] << "\n";
    os << "ngram_range " << m.tfidf.options().min_n << " " << m.tfidf.options().max_n << "\n";
    os << "trees " << m.forest.trees().size() << "\n";
    const auto classes = m.forest.class_count();
    for (const auto& t : m.forest.trees()) {
        os << "tree " << t.node_count() << "\n";
        for (std::size_t i = 0; i < t.node_count(); ++i) {
            os << t.feature[i] << " " << format_double(t.threshold[i]) << " " << t.left[i] << " " << t.right[i];
            for (std::size_t c = 0; c < classes; ++c) os << " " << format_double(t.class_frequency[i * classes + c]);
            os << "\n";
        }
    }
    os << "end\n";
    return os.str();
}

inline TrainedModel deserialize(std::istream& in, const std::string& source = "model") {
    std::size_t lineno = 0;
    std::string line;
    auto next = [&]() -> std::string {
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty() && line.front() == '#') continue;
            return line;
        }
        throw ParseError(source, lineno, "unexpected end of model file");
    };
    auto expect = [&](const std::string& keyword) {
        std::istringstream ls(next());
        std::string k;
        ls >> k;
        if (k != keyword) throw ParseError(source, lineno, "expected '" + keyword + "'");
        return ls.str().substr(std::min(ls.str().size(), keyword.size() + 1));
    };
    auto number = [&](std::string_view s) {
        auto v = parse_double(s);
        if (!v) throw ParseError(source, lineno, "bad number: " + std::string(s));
        return *v;
    };
    auto count = [&](const std::string& s) {
        auto v = parse_integer<std::size_t>(s);
        if (!v) throw ParseError(source, lineno, "bad count: " + s);
        return *v;
    };

    TrainedModel m;
    if (next() != "echograph-forest-model 1") throw ParseError(source, lineno, "unsupported model header or version");
    m.blocks = parse_blocks(trim(expect("blocks")));
    {
        std::istringstream ls(expect("options"));
        if (!(ls >> m.options.n_trees >> m.options.max_depth >> m.options.features_per_split >>
              m.options.min_samples_split >> m.options.seed))
            throw ParseError(source, lineno, "bad options line");
    }
    const auto classes = count(std::string(trim(expect("classes"))));
    if (classes < 2) throw ParseError(source, lineno, "classes must be >= 2");
    const auto n_features = count(std::string(trim(expect("features"))));
    for (std::size_t i = 0; i < n_features; ++i) m.feature_names.push_back(next());
    const auto vocab = count(std::string(trim(expect("vocabulary"))));
    std::vector<std::string> terms;
    std::vector<double> idf;
    for (std::size_t i = 0; i < vocab; ++i) {
        auto l = next();
        auto tab = l.find('\t');
        if (tab == std::string::npos) throw ParseError(source, lineno, "vocabulary line needs <idf>\\t<term>");
        idf.push_back(number(std::string_view(l).substr(0, tab)));
        terms.push_back(l.substr(tab + 1));
    }
    text::TfidfOptions topt;
    {
        std::istringstream ls(expect("ngram_range"));
        if (!(ls >> topt.min_n >> topt.max_n)) throw ParseError(source, lineno, "bad ngram_range");
    }
    m.tfidf = text::TfidfModel(std::move(terms), std::move(idf), topt);
    const auto n_trees = count(std::string(trim(expect("trees"))));
    std::vector<forest::Tree> trees(n_trees);
    for (auto& t : trees) {
        const auto nodes = count(std::string(trim(expect("tree"))));
        for (std::size_t i = 0; i < nodes; ++i) {
            const auto node_line = next();
            auto fields = split(trim(node_line), ' ');
            if (fields.size() != 4 + classes) throw ParseError(source, lineno, "node line has wrong field count");
            auto feature = parse_integer<std::int32_t>(fields[0]);
            auto left = parse_integer<std::int32_t>(fields[2]);
            auto right = parse_integer<std::int32_t>(fields[3]);
            if (!feature || !left || !right) throw ParseError(source, lineno, "bad node indices");
            t.feature.push_back(*feature);
            t.threshold.push_back(number(fields[1]));
            t.left.push_back(*left);
            t.right.push_back(*right);
            for (std::size_t c = 0; c < classes; ++c) t.class_frequency.push_back(number(fields[4 + c]));
        }
    }
    if (trim(next()) != "end") throw ParseError(source, lineno, "expected 'end'");
    m.forest.assign(std::move(trees), n_features, classes);
    return m;
}

} // namespace echograph::predict
