#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "echograph/error.hpp"
#include "echograph/format.hpp"
#include "echograph/graph.hpp"
#include "echograph/graph_metrics.hpp"
#include "echograph/ingest.hpp"
#include "echograph/polarity.hpp"
#include "echograph/predict.hpp"
#include "echograph/stats.hpp"
#include "echograph/synth.hpp"

namespace echograph::pipeline {

namespace fs = std::filesystem;

struct RunConfig {
    // inputs
    std::string edges, tweets, profiles, leaning_table, user_polarity, truth;
    std::string out = "echograph-out";

    // polarity and roles
    double delta = 0.3;
    std::vector<double> delta_grid = stats::default_delta_grid();
    std::size_t min_observations = 1;

    // filters
    ingest::BotThresholds bots;
    std::size_t min_tweets = 5;
    ingest::FilterOrder filter_order = ingest::FilterOrder::bots_first;

    // network
    double damping = 0.85;
    double pagerank_tolerance = 1e-10;
    int pagerank_max_iterations = 200;

    // statistics
    double alpha = 0.001;
    int min_significant = 4;

    // prediction
    std::size_t trees = 200;
    std::size_t max_depth = 0;
    std::size_t features_per_split = 0;
    int folds = 10;
    int ngram_max = 2;
    std::size_t vocab_cap = 20000;
    predict::BalanceMode balance = predict::BalanceMode::downsample;

    std::uint64_t seed = 1;
    unsigned threads = 1;

    /// Every result-affecting parameter, one "key=value" per line. Paths,
    /// output directory, and thread count are excluded: inputs enter the
    /// config hash through their contents instead.
    std::string canonical() const {
        std::string s;
        auto kv = [&](const char* k, const std::string& v) { s += std::string(k) + "=" + v + "\n"; };
        kv("delta", format_double(delta));
        std::string grid;
        for (double d : delta_grid) grid += format_double(d) + ";";
        kv("delta_grid", grid);
        kv("min_obs", std::to_string(min_observations));
        kv("bot_min_tweets_per_day", format_double(bots.min_tweets_per_day));
        kv("bot_max_tweets_per_day", format_double(bots.max_tweets_per_day));
        kv("bot_min_followers", std::to_string(bots.min_followers));
        kv("bot_min_friends", std::to_string(bots.min_friends));
        kv("bot_min_account_age_days", format_double(bots.min_account_age_days));
        kv("reference_time", bots.reference_time ? std::to_string(*bots.reference_time) : "auto");
        kv("min_tweets", std::to_string(min_tweets));
        kv("filter_order", filter_order == ingest::FilterOrder::bots_first ? "bots-first" : "activity-first");
        kv("damping", format_double(damping));
        kv("pagerank_tolerance", format_double(pagerank_tolerance));
        kv("pagerank_max_iterations", std::to_string(pagerank_max_iterations));
        kv("alpha", format_double(alpha));
        kv("k", std::to_string(min_significant));
        kv("trees", std::to_string(trees));
        kv("max_depth", std::to_string(max_depth));
        kv("features_per_split", std::to_string(features_per_split));
        kv("folds", std::to_string(folds));
        kv("ngram_max", std::to_string(ngram_max));
        kv("vocab_cap", std::to_string(vocab_cap));
        kv("balance", balance == predict::BalanceMode::strict ? "strict" : "downsample");
        kv("seed", std::to_string(seed));
        return s;
    }

    void validate() const {
        polarity::check_delta(delta);
        if (delta_grid.empty()) throw ValidationError("delta grid is empty");
        for (std::size_t i = 0; i < delta_grid.size(); ++i) {
            polarity::check_delta(delta_grid[i]);
            if (i && !(delta_grid[i] > delta_grid[i - 1])) throw ValidationError("delta grid must be strictly increasing");
        }
        if (min_observations < 1) throw ValidationError("min-obs must be >= 1");
        if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must be in (0,1)");
        if (min_significant < 1) throw ValidationError("k must be >= 1");
        if (folds < 2) throw ValidationError("folds must be >= 2");
        if (trees < 1) throw ValidationError("trees must be >= 1");
        if (ngram_max < 1) throw ValidationError("ngram-max must be >= 1");
        if (threads < 1) throw ValidationError("threads must be >= 1");
    }
};

/// Parses "lo:hi:step".
inline std::vector<double> parse_delta_grid(std::string_view text) {
    auto parts = split(text, ':');
    if (parts.size() != 3) throw ValidationError("delta grid must be lo:hi:step, got " + std::string(text));
    auto lo = parse_double(parts[0]), hi = parse_double(parts[1]), step = parse_double(parts[2]);
    if (!lo || !hi || !step) throw ValidationError("delta grid must be lo:hi:step, got " + std::string(text));
    return stats::make_delta_grid(*lo, *hi, *step);
}

/// Input paths must exist before any computation starts.
inline void require_path(const std::string& path, const char* flag) {
    if (path.empty()) throw ValidationError(std::string("missing required input ") + flag);
    if (!fs::exists(path)) throw ValidationError(std::string("input for ") + flag + " does not exist: " + path);
}

inline std::string config_hash(const RunConfig& cfg) {
    Fnv1a h;
    h.update(cfg.canonical());
    for (const auto* path : {&cfg.edges, &cfg.tweets, &cfg.profiles, &cfg.leaning_table, &cfg.user_polarity,
                             &cfg.truth}) {
        h.update("\x1f");
        if (!path->empty() && fs::exists(*path)) h.update(read_file(*path));
    }
    return h.hex();
}

inline std::string header_line(const std::string& stage, const std::string& hash) {
    return "# echograph " + stage + " config_hash=" + hash + "\n";
}

// ---------------------------------------------------------------------------
// Loading

struct LoadedData {
    FollowGraph graph;
    EdgeListStats edge_stats;
    ingest::SourceLeaningTable table;
    ingest::Corpus corpus;
    std::map<std::string, ingest::UserProfileRecord> profiles;
    std::map<std::string, double> user_polarity;
    ingest::FilterReport filter;
    std::int64_t reference_time = 0;
    std::optional<synth::GroundTruth> truth;
    std::size_t users_before_filter = 0;
    std::size_t tweets_loaded = 0;
};

/// Reads every configured input and applies the user filters. Without a
/// tweets file only the graph is loaded (no filtering).
inline LoadedData load_inputs(const RunConfig& cfg, bool need_content) {
    require_path(cfg.edges, "--edges");
    if (need_content) {
        require_path(cfg.tweets, "--tweets");
        require_path(cfg.leaning_table, "--leaning-table");
    }
    if (!cfg.profiles.empty()) require_path(cfg.profiles, "--profiles");
    if (!cfg.user_polarity.empty()) require_path(cfg.user_polarity, "--user-polarity");
    if (!cfg.truth.empty()) require_path(cfg.truth, "--truth");

    LoadedData d;
    if (!need_content && cfg.tweets.empty()) {
        auto in = open_input(cfg.edges);
        d.graph = ingest::build_graph(in, cfg.edges, &d.edge_stats);
        return d;
    }
    {
        auto in = open_input(cfg.leaning_table);
        d.table = ingest::load_leaning_table(in, cfg.leaning_table);
    }
    {
        auto in = open_input(cfg.tweets);
        auto tweets = ingest::read_tweets(in, cfg.tweets);
        d.tweets_loaded = tweets.size();
        d.corpus = ingest::Corpus(std::move(tweets), d.table);
    }
    if (!cfg.profiles.empty()) {
        auto in = open_input(cfg.profiles);
        d.profiles = ingest::read_profiles(in, cfg.profiles);
    }
    if (!cfg.user_polarity.empty()) {
        auto in = open_input(cfg.user_polarity);
        d.user_polarity = ingest::read_user_polarity(in, cfg.user_polarity);
    }
    if (!cfg.truth.empty()) {
        auto in = open_input(cfg.truth);
        d.truth = synth::read_truth(in, cfg.truth);
    }
    d.reference_time = ingest::resolve_reference_time(cfg.bots, d.corpus, d.profiles);
    d.users_before_filter = d.corpus.user_count();
    ingest::BotThresholds bots = cfg.bots;
    bots.reference_time = d.reference_time;
    d.filter = ingest::apply_user_filters(d.profiles, d.corpus, bots, cfg.min_tweets, cfg.filter_order,
                                          !cfg.profiles.empty());
    d.corpus = d.corpus.restricted(d.filter.retained);

    FollowGraph full;
    {
        auto in = open_input(cfg.edges);
        std::vector<std::string> extra(d.filter.retained.begin(), d.filter.retained.end());
        full = ingest::build_graph(in, cfg.edges, &d.edge_stats, extra);
    }
    std::unordered_set<std::string> keep(d.filter.retained.begin(), d.filter.retained.end());
    d.graph = full.induced(keep);
    return d;
}

// ---------------------------------------------------------------------------
// Analysis

struct Analysis {
    metrics::PageRankResult pagerank;
    metrics::NodeMetricVector clustering;
    metrics::DegreeVectors degrees;
    std::vector<polarity::UserContentProfile> profiles; // graph node order
    std::vector<polarity::PolaritySummary> summaries;   // graph node order
};

inline Analysis analyze_network(const LoadedData& d, const RunConfig& cfg) {
    Analysis a;
    if (d.graph.node_count() == 0) throw ValidationError("no users left after filtering");
    metrics::PageRankOptions pr;
    pr.damping = cfg.damping;
    pr.tolerance = cfg.pagerank_tolerance;
    pr.max_iterations = cfg.pagerank_max_iterations;
    pr.threads = cfg.threads;
    a.pagerank = metrics::pagerank(d.graph, pr);
    a.clustering = metrics::clustering_coefficient(d.graph, cfg.threads);
    a.degrees = metrics::degrees(d.graph);
    return a;
}

inline Analysis analyze(const LoadedData& d, const RunConfig& cfg) {
    Analysis a = analyze_network(d, cfg);
    a.profiles = polarity::build_profiles(d.graph, d.corpus, cfg.threads);
    polarity::PolarityOptions po;
    po.min_observations = cfg.min_observations;
    a.summaries = polarity::summarize_all(a.profiles, po, d.user_polarity, cfg.threads);
    return a;
}

/// Per-user comparison features aligned with Analysis::summaries.
inline stats::FeatureTable comparison_features(const LoadedData& d, const Analysis& a) {
    const auto n = a.summaries.size();
    using Col = std::vector<std::optional<double>>;
    Col pr(n), cc(n), up(n), deg(n), rr(n), rv(n), fr(n), fv(n), followers(n), friends(n), tweets(n), age(n);
    for (std::size_t i = 0; i < n; ++i) {
        pr[i] = a.pagerank.scores.values[i];
        cc[i] = a.clustering.values[i];
        deg[i] = a.degrees.undirected.values[i];
        if (a.summaries[i].user_polarity) up[i] = std::fabs(*a.summaries[i].user_polarity);
        if (auto im = polarity::interaction_metrics(a.profiles[i])) {
            rr[i] = im->retweet_rate;
            rv[i] = im->retweet_volume;
            fr[i] = im->favorite_rate;
            fv[i] = im->favorite_volume;
        }
        if (auto it = d.profiles.find(a.summaries[i].user_id); it != d.profiles.end()) {
            followers[i] = static_cast<double>(it->second.followers_count);
            friends[i] = static_cast<double>(it->second.friends_count);
            tweets[i] = static_cast<double>(it->second.statuses_count);
            age[i] = static_cast<double>(d.reference_time - it->second.account_created) / (7.0 * 86400.0);
        }
    }
    stats::FeatureTable t;
    t.add("pagerank", std::move(pr));
    t.add("clustering_coefficient", std::move(cc));
    t.add("user_polarity", std::move(up));
    t.add("degree", std::move(deg));
    t.add("retweet_rate", std::move(rr));
    t.add("retweet_volume", std::move(rv));
    t.add("favorite_rate", std::move(fr));
    t.add("favorite_volume", std::move(fv));
    t.add("followers", std::move(followers));
    t.add("friends", std::move(friends));
    t.add("tweets", std::move(tweets));
    t.add("age_weeks", std::move(age));
    return t;
}

// ---------------------------------------------------------------------------
// Stage outputs

class OutputDir {
public:
    OutputDir(const std::string& dir, std::string stage, std::string hash)
        : dir_(dir), stage_(std::move(stage)), hash_(std::move(hash)) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
    }
    std::string header() const { return header_line(stage_, hash_); }
    void write(const std::string& name, const std::string& body) {
        write_file((dir_ / name).string(), body);
        written_.push_back(name);
    }
    /// Body already starts with the header line.
    void write_with_header(const std::string& name, const std::string& body) { write(name, header() + body); }
    const std::vector<std::string>& written() const { return written_; }
    const std::string& hash() const { return hash_; }

private:
    fs::path dir_;
    std::string stage_, hash_;
    std::vector<std::string> written_;
};

inline std::string delta_tag(double delta) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", delta);
    return buf;
}

inline void write_ingest(OutputDir& out, const LoadedData& d) {
    std::string summary = "key,value\n";
    auto kv = [&](const std::string& k, const std::string& v) { summary += k + "," + v + "\n"; };
    kv("edge_records", std::to_string(d.edge_stats.records));
    kv("self_loops_dropped", std::to_string(d.edge_stats.self_loops_dropped));
    kv("duplicate_edges_collapsed", std::to_string(d.edge_stats.duplicates_collapsed));
    kv("tweets_loaded", std::to_string(d.tweets_loaded));
    kv("link_observations", std::to_string(d.corpus.observation_count()));
    kv("leaning_domains", std::to_string(d.table.size()));
    kv("users_before_filter", std::to_string(d.users_before_filter));
    kv("users_retained", std::to_string(d.filter.retained.size()));
    kv("users_removed", std::to_string(d.filter.removals.size()));
    kv("graph_nodes", std::to_string(d.graph.node_count()));
    kv("graph_edges", std::to_string(d.graph.edge_count()));
    kv("reference_time", std::to_string(d.reference_time));
    out.write_with_header("ingest_summary.csv", summary);

    std::string removed = "user_id,stage,reasons\n";
    for (const auto& r : d.filter.removals) removed += r.user_id + "," + r.stage + "," + r.reasons + "\n";
    out.write_with_header("bot_report.csv", removed);

    std::string retained = "user_id\n";
    for (const auto& u : d.filter.retained) retained += u + "\n";
    out.write_with_header("retained_users.csv", retained);

    out.write("edges_canonical.tsv", write_edge_list(d.graph, out.header()));

    std::string obs = "user_id,tweet_id,leaning\n";
    for (const auto& u : d.corpus.user_ids())
        for (const auto& o : d.corpus.observations(u)) obs += u + "," + o.tweet_id + "," + format_double(o.leaning) + "\n";
    out.write_with_header("link_observations.csv", obs);
}

inline void write_metrics(OutputDir& out, const LoadedData& d, const Analysis& a) {
    out.write("metrics.csv",
              metrics::export_metrics(d.graph,
                                      {&a.pagerank.scores, &a.clustering, &a.degrees.in, &a.degrees.out,
                                       &a.degrees.undirected},
                                      out.header()));
    std::string info = "key,value\n";
    info += "pagerank_iterations," + std::to_string(a.pagerank.iterations) + "\n";
    info += "pagerank_converged," + std::string(a.pagerank.converged ? "true" : "false") + "\n";
    info += "pagerank_last_l1_change," + format_double(a.pagerank.last_delta) + "\n";
    out.write_with_header("pagerank_convergence.csv", info);
}

inline std::vector<double> all_deltas(const RunConfig& cfg) {
    std::set<double> s(cfg.delta_grid.begin(), cfg.delta_grid.end());
    s.insert(cfg.delta);
    return {s.begin(), s.end()};
}

inline void write_polarity(OutputDir& out, const Analysis& a, const RunConfig& cfg) {
    for (double delta : all_deltas(cfg))
        out.write("polarity_delta_" + delta_tag(delta) + ".csv",
                  polarity::export_summaries(a.summaries, delta, out.header()));
}

inline void write_compare(OutputDir& out, const LoadedData& d, const Analysis& a, const RunConfig& cfg) {
    stats::CompareOptions opt;
    opt.delta_grid = cfg.delta_grid;
    opt.alpha = cfg.alpha;
    opt.min_significant = cfg.min_significant;
    opt.seed = cfg.seed;
    const auto features = comparison_features(d, a);
    auto partisan = stats::compare_groups(a.summaries, features, stats::Comparison::partisan_vs_bipartisan, opt);
    auto gatekeeper = stats::compare_groups(a.summaries, features, stats::Comparison::gatekeeper_vs_random, opt);
    out.write("comparison_partisan.csv", stats::export_comparison_table(partisan, out.header()));
    out.write("comparison_gatekeeper.csv", stats::export_comparison_table(gatekeeper, out.header()));
    auto all = partisan;
    all.insert(all.end(), gatekeeper.begin(), gatekeeper.end());
    out.write("comparison_details.csv", stats::export_comparison_details(all, out.header()));
}

inline void write_scatter(OutputDir& out, const Analysis& a) {
    out.write("scatter.csv", stats::export_scatter(stats::scatter(a.summaries), out.header()));

    std::string prof = "kind,bin_lo,bin_hi,count,mean_variance\n";
    for (bool production : {true, false})
        for (const auto& b : stats::variance_profile(a.summaries, production))
            prof += std::string(production ? "production" : "consumption") + "," + format_double(b.lo) + "," +
                    format_double(b.hi) + "," + std::to_string(b.count) + "," + format_optional(b.mean_variance) + "\n";
    out.write_with_header("variance_profile.csv", prof);

    std::vector<double> p, c;
    for (const auto& s : a.summaries) {
        if (s.p) p.push_back(*s.p);
        if (s.c) c.push_back(*s.c);
    }
    constexpr std::size_t bins = 20;
    const auto hp = stats::histogram(p, bins), hc = stats::histogram(c, bins);
    std::string hist = "bin_lo,bin_hi,production_count,consumption_count\n";
    for (std::size_t i = 0; i < bins; ++i)
        hist += format_double(static_cast<double>(i) / bins) + "," + format_double(static_cast<double>(i + 1) / bins) +
                "," + std::to_string(hp[i]) + "," + std::to_string(hc[i]) + "\n";
    out.write_with_header("polarity_histogram.csv", hist);

    std::string corr = "key,value\n";
    corr += "users_with_p," + std::to_string(p.size()) + "\n";
    corr += "users_with_c," + std::to_string(c.size()) + "\n";
    corr += "pearson_p_c," + format_optional(stats::polarity_correlation(a.summaries)) + "\n";
    corr += "bimodality_coefficient_p," + format_optional(stats::bimodality_coefficient(p)) + "\n";
    corr += "bimodality_coefficient_c," + format_optional(stats::bimodality_coefficient(c)) + "\n";
    out.write_with_header("correlation.csv", corr);
}

/// Partisan vs bipartisan densities at cfg.delta for the features the
/// beanplot figures show.
inline void write_beanplots(OutputDir& out, const LoadedData& d, const Analysis& a, const RunConfig& cfg) {
    const auto features = comparison_features(d, a);
    const auto split = stats::split_groups(a.summaries, cfg.delta, stats::Comparison::partisan_vs_bipartisan, cfg.seed, 0);
    for (const char* name : {"user_polarity", "pagerank", "clustering_coefficient"}) {
        const auto f = static_cast<std::size_t>(
            std::find(features.names.begin(), features.names.end(), name) - features.names.begin());
        nlohmann::ordered_json j;
        j["config_hash"] = out.hash();
        j["feature"] = name;
        j["delta"] = cfg.delta;
        j["groups"] = nlohmann::ordered_json::array();
        for (auto [label, members] : {std::pair{"partisan", &split.a}, std::pair{"bipartisan", &split.b}}) {
            std::vector<double> values;
            for (auto i : *members)
                if (features.columns[f][i]) values.push_back(*features.columns[f][i]);
            if (values.size() < 2) {
                nlohmann::ordered_json g;
                g["label"] = label;
                g["n"] = values.size();
                g["skipped"] = "fewer than 2 values";
                j["groups"].push_back(g);
                continue;
            }
            j["groups"].push_back(stats::beanplot_json(stats::beanplot(label, values)));
        }
        out.write(std::string("beanplot_") + name + ".json", j.dump(1) + "\n");
    }
}

inline void write_predict(OutputDir& out, const LoadedData& d, const Analysis& a, const RunConfig& cfg) {
    std::vector<std::string> ids;
    for (const auto& s : a.summaries) ids.push_back(s.user_id);
    predict::NetworkInputs net{&d.graph, &a.pagerank.scores.values, &a.clustering.values, &a.degrees.undirected.values};
    text::TfidfOptions topt;
    topt.max_n = cfg.ngram_max;
    topt.vocab_cap = cfg.vocab_cap;
    const auto features = predict::build_features(ids, net, d.profiles, d.corpus, d.reference_time, topt);
    const auto labels = polarity::classify_all(a.summaries, cfg.delta);

    forest::ForestOptions fo;
    fo.n_trees = cfg.trees;
    fo.max_depth = cfg.max_depth;
    fo.features_per_split = cfg.features_per_split;
    fo.seed = derive_seed(cfg.seed, "forest");
    fo.threads = cfg.threads;

    std::string summary = "target,features,rows,mean_accuracy,status\n";
    for (auto target : {predict::Target::partisan, predict::Target::gatekeeper}) {
        const std::string tname = predict::to_string(target);
        predict::LabeledDataset ds;
        try {
            ds = predict::build_task(labels, target, derive_seed(cfg.seed, "task", static_cast<std::uint64_t>(target)),
                                     cfg.balance);
            if (ds.rows.size() < static_cast<std::size_t>(cfg.folds))
                throw ValidationError("dataset smaller than the fold count");
        } catch (const ValidationError& e) {
            summary += tname + ",all,0,NA,skipped: " + std::string(e.what()) + "\n";
            continue;
        }
        const auto cv_seed = derive_seed(cfg.seed, "cv", static_cast<std::uint64_t>(target));
        for (auto blocks : {predict::FeatureBlocks::network_profile, predict::FeatureBlocks::ngram,
                            predict::FeatureBlocks::all}) {
            const auto rep = predict::cross_validate(features, ds, blocks, cfg.folds, fo, cv_seed);
            out.write("cv_" + tname + "_" + predict::to_string(blocks) + ".csv", predict::export_cv(rep, out.header()));
            summary += tname + "," + predict::to_string(blocks) + "," + std::to_string(ds.rows.size()) + "," +
                       format_double(rep.mean_accuracy) + ",ok\n";
        }
        const auto permuted = predict::permute_labels(ds.labels, derive_seed(cfg.seed, "permute"));
        const auto control = predict::cross_validate(predict::assemble(features, ds.rows, predict::FeatureBlocks::all),
                                                     permuted, cfg.folds, fo, cv_seed);
        out.write("cv_" + tname + "_permuted.csv", predict::export_cv(control, out.header()));
        summary += tname + ",all_permuted_labels," + std::to_string(ds.rows.size()) + "," +
                   format_double(control.mean_accuracy) + ",ok\n";
        const auto model = predict::train(features, ds, predict::FeatureBlocks::all, fo);
        out.write("model_" + tname + ".txt", out.header() + predict::serialize(model));
    }
    out.write_with_header("prediction_summary.csv", summary);
}

inline void write_plant_report(OutputDir& out, const LoadedData& d, const Analysis& a, const RunConfig& cfg) {
    if (!d.truth) return;
    std::vector<std::string> ids;
    for (const auto& s : a.summaries) ids.push_back(s.user_id);
    std::string body = "delta,planted,detected,true_positives,precision,recall,precision_by_convention,recall_by_convention\n";
    for (double delta : all_deltas(cfg)) {
        const auto r = synth::plant_report(*d.truth, ids, polarity::classify_all(a.summaries, delta), delta);
        body += format_double(delta) + "," + std::to_string(r.planted) + "," + std::to_string(r.detected) + "," +
                std::to_string(r.true_positives) + "," + format_double(r.precision) + "," + format_double(r.recall) +
                "," + (r.precision_by_convention ? "true" : "false") + "," + (r.recall_by_convention ? "true" : "false") +
                "\n";
    }
    out.write_with_header("plant_report.csv", body);
}

/// Every stage in order, writing into cfg.out.
inline std::vector<std::string> run_pipeline(const RunConfig& cfg) {
    cfg.validate();
    auto d = load_inputs(cfg, true);
    OutputDir out(cfg.out, "pipeline", config_hash(cfg));
    write_ingest(out, d);
    const auto a = analyze(d, cfg);
    write_metrics(out, d, a);
    write_polarity(out, a, cfg);
    write_compare(out, d, a, cfg);
    write_scatter(out, a);
    write_beanplots(out, d, a, cfg);
    write_predict(out, d, a, cfg);
    write_plant_report(out, d, a, cfg);
    return out.written();
}

} // namespace echograph::pipeline
