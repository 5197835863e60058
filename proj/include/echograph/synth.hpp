#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "echograph/error.hpp"
#include "echograph/format.hpp"
#include "echograph/graph.hpp"
#include "echograph/ingest.hpp"
#include "echograph/polarity.hpp"
#include "echograph/random.hpp"
#include "echograph/special.hpp"

namespace echograph::synth {

/// Two-sided polarized population.
///
/// Latent leanings are Beta(2,8) on the left and Beta(8,2) on the right.
/// Planted gatekeepers get side-pure leanings (Beta(2,18) / Beta(18,2)) and
/// follow both sides with probability p_in. Tweet text mixes a shared pool
/// with the two side pools, choosing the right pool with probability equal
/// to the author's latent leaning.
struct SynthConfig {
    std::size_t n_left = 500;
    std::size_t n_right = 500;
    double p_in = 0.02;
    double p_out = 0.001;
    double tweets_per_user = 20.0; // Poisson mean
    double link_fraction = 0.5;
    double leaning_noise = 0.05; // sigma
    double gatekeeper_fraction = 0.05;
    std::size_t n_domains = 10; // per side
    double short_link_fraction = 0.2;
    std::size_t side_vocabulary = 8;
    std::size_t shared_vocabulary = 8;
    double token_overlap = 0.3; // probability a word comes from the shared pool
    std::size_t words_per_tweet = 10;
    std::int64_t reference_time = 1467331200; // 2016-07-01T00:00:00Z
    std::uint64_t seed = 1;

    void validate() const {
        auto prob = [](double p, const char* name) {
            if (!(p >= 0.0 && p <= 1.0)) throw ValidationError(std::string("synth: ") + name + " must be in [0,1]");
        };
        prob(p_in, "p_in");
        prob(p_out, "p_out");
        prob(link_fraction, "link_fraction");
        prob(gatekeeper_fraction, "gatekeeper_fraction");
        prob(short_link_fraction, "short_link_fraction");
        prob(token_overlap, "token_overlap");
        if (!(leaning_noise >= 0.0)) throw ValidationError("synth: leaning_noise must be >= 0");
        if (!(tweets_per_user >= 0.0)) throw ValidationError("synth: tweets_per_user must be >= 0");
        if (n_domains == 0) throw ValidationError("synth: n_domains must be >= 1");
        if (side_vocabulary == 0 || shared_vocabulary == 0) throw ValidationError("synth: vocabularies must be non-empty");
    }

    std::string canonical() const {
        std::string s;
        auto kv = [&](const char* k, const std::string& v) { s += std::string(k) + "=" + v + "\n"; };
        kv("n_left", std::to_string(n_left));
        kv("n_right", std::to_string(n_right));
        kv("p_in", format_double(p_in));
        kv("p_out", format_double(p_out));
        kv("tweets_per_user", format_double(tweets_per_user));
        kv("link_fraction", format_double(link_fraction));
        kv("leaning_noise", format_double(leaning_noise));
        kv("gatekeeper_fraction", format_double(gatekeeper_fraction));
        kv("n_domains", std::to_string(n_domains));
        kv("short_link_fraction", format_double(short_link_fraction));
        kv("side_vocabulary", std::to_string(side_vocabulary));
        kv("shared_vocabulary", std::to_string(shared_vocabulary));
        kv("token_overlap", format_double(token_overlap));
        kv("words_per_tweet", std::to_string(words_per_tweet));
        kv("reference_time", std::to_string(reference_time));
        kv("seed", std::to_string(seed));
        return s;
    }
};

enum class Side { left, right };

struct UserTruth {
    std::string user_id;
    double lambda = 0.5;
    Side side = Side::left;
    bool planted_gatekeeper = false;
};

struct GroundTruth {
    std::vector<UserTruth> users; // in user-id order
    ingest::SourceLeaningTable table;
};

struct SynthData {
    FollowGraph graph;
    std::vector<ingest::TweetRecord> tweets;
    ingest::Corpus corpus;
    std::map<std::string, ingest::UserProfileRecord> profiles;
    std::map<std::string, double> user_polarity;
    GroundTruth truth;
};

struct Domain {
    std::string name;
    std::string alias;
    double leaning;
};

/// Left domains sit at the (k + 0.5)/n quantiles of Beta(2,8), right ones
/// mirror them.
inline std::vector<Domain> make_domains(std::size_t per_side) {
    std::vector<Domain> d;
    for (std::size_t k = 0; k < per_side; ++k) {
        const double q = (static_cast<double>(k) + 0.5) / static_cast<double>(per_side);
        const double leaning = special::beta_quantile(2.0, 8.0, q);
        const auto idx = std::to_string(k);
        d.push_back({"leftnews" + idx + ".com", "ln" + idx + ".co", leaning});
        d.push_back({"rightnews" + idx + ".com", "rn" + idx + ".co", 1.0 - leaning});
    }
    std::sort(d.begin(), d.end(), [](const Domain& a, const Domain& b) { return a.leaning < b.leaning; });
    return d;
}

inline std::size_t nearest_domain(const std::vector<Domain>& sorted, double x) {
    std::size_t best = 0;
    double best_gap = std::fabs(sorted[0].leaning - x);
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        const double gap = std::fabs(sorted[i].leaning - x);
        if (gap < best_gap) {
            best_gap = gap;
            best = i;
        }
    }
    return best;
}

inline std::string user_name(std::size_t i, std::size_t total) {
    std::string digits = std::to_string(i);
    const std::size_t width = std::max<std::size_t>(5, std::to_string(total).size());
    return "u" + std::string(width - digits.size(), '0') + digits;
}

/// Deterministic for a fixed config: every random quantity is drawn from a
/// stream keyed by (seed, purpose, user index).
inline SynthData generate(const SynthConfig& cfg) {
    cfg.validate();
    const std::size_t n = cfg.n_left + cfg.n_right;
    SynthData out;
    auto& users = out.truth.users;
    users.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        users[i].user_id = user_name(i, n);
        users[i].side = i < cfg.n_left ? Side::left : Side::right;
    }

    auto plant = [&](std::size_t first, std::size_t count, std::uint64_t side) {
        const auto k = static_cast<std::size_t>(std::llround(cfg.gatekeeper_fraction * static_cast<double>(count)));
        Rng rng(cfg.seed, "gatekeepers", side);
        for (std::size_t j : rng.sample_without_replacement(count, k)) users[first + j].planted_gatekeeper = true;
    };
    plant(0, cfg.n_left, 0);
    plant(cfg.n_left, cfg.n_right, 1);

    for (std::size_t i = 0; i < n; ++i) {
        Rng rng(cfg.seed, "lambda", i);
        const bool left = users[i].side == Side::left;
        const double a = 2.0;
        const double b = users[i].planted_gatekeeper ? 18.0 : 8.0;
        users[i].lambda = left ? rng.beta(a, b) : rng.beta(b, a);
    }

    GraphBuilder builder;
    for (const auto& u : users) builder.add_node(u.user_id);
    for (std::size_t u = 0; u < n; ++u) {
        Rng rng(cfg.seed, "follow", u);
        for (std::size_t v = 0; v < n; ++v) {
            if (u == v) continue;
            const bool same = users[u].side == users[v].side;
            const double p = (same || users[u].planted_gatekeeper) ? cfg.p_in : cfg.p_out;
            if (rng.bernoulli(p)) builder.add_edge(users[u].user_id, users[v].user_id);
        }
    }
    out.graph = builder.build();

    const auto domains = make_domains(cfg.n_domains);
    for (const auto& d : domains) out.truth.table.add_entry(d.name, d.leaning);
    for (const auto& d : domains) out.truth.table.add_alias(d.alias, d.name);

    for (std::size_t u = 0; u < n; ++u) {
        Rng rng(cfg.seed, "tweets", u);
        const auto& truth = users[u];
        const auto node = *out.graph.index_of(truth.user_id);
        const double followers = static_cast<double>(out.graph.in_degree(node));
        const auto count = rng.poisson(cfg.tweets_per_user);
        for (std::uint64_t k = 0; k < count; ++k) {
            ingest::TweetRecord t;
            t.user_id = truth.user_id;
            t.tweet_id = truth.user_id + "-" + std::to_string(k);
            t.timestamp = cfg.reference_time - static_cast<std::int64_t>(rng.below(7 * 86400));
            if (rng.bernoulli(cfg.link_fraction)) {
                const double x = std::clamp(truth.lambda + cfg.leaning_noise * rng.normal(), 0.0, 1.0);
                const auto& d = domains[nearest_domain(domains, x)];
                if (rng.bernoulli(cfg.short_link_fraction))
                    t.urls.push_back("http://" + d.alias + "/" + t.tweet_id);
                else
                    t.urls.push_back("https://www." + d.name + "/story/" + t.tweet_id);
            }
            for (std::size_t w = 0; w < cfg.words_per_tweet; ++w) {
                if (w) t.text += ' ';
                if (rng.bernoulli(cfg.token_overlap)) {
                    t.text += "common" + std::to_string(rng.below(cfg.shared_vocabulary));
                } else {
                    const bool right = rng.bernoulli(truth.lambda);
                    t.text += (right ? "rterm" : "lterm") + std::to_string(rng.below(cfg.side_vocabulary));
                }
            }
            t.retweet_count = static_cast<std::int64_t>(rng.poisson(0.02 * followers));
            t.favorite_count = static_cast<std::int64_t>(rng.poisson(0.05 * followers));
            out.tweets.push_back(std::move(t));
        }
    }
    out.corpus = ingest::Corpus(out.tweets, out.truth.table);

    for (std::size_t u = 0; u < n; ++u) {
        Rng rng(cfg.seed, "profile", u);
        const auto& id = users[u].user_id;
        const auto node = *out.graph.index_of(id);
        ingest::UserProfileRecord p;
        p.user_id = id;
        const auto age_days = static_cast<std::int64_t>(400 + rng.below(3000));
        p.account_created = cfg.reference_time - age_days * 86400;
        p.followers_count = static_cast<std::int64_t>(out.graph.in_degree(node) + 10 + rng.below(1000));
        p.friends_count = static_cast<std::int64_t>(out.graph.out_degree(node) + 10 + rng.below(500));
        p.statuses_count = static_cast<std::int64_t>(out.corpus.tweets(id).size() +
                                                     rng.below(static_cast<std::uint64_t>(age_days) * 20));
        out.profiles.emplace(id, p);

        Rng prng(cfg.seed, "user-polarity", u);
        out.user_polarity.emplace(id, 3.0 * (2.0 * users[u].lambda - 1.0) + 0.3 * prng.normal());
    }
    return out;
}

inline const char* to_string(Side s) { return s == Side::left ? "left" : "right"; }

inline std::string export_truth(const GroundTruth& truth, std::string_view header = {}) {
    std::string out(header);
    out += "user_id,lambda,side,planted_gatekeeper\n";
    for (const auto& u : truth.users)
        out += u.user_id + "," + format_double(u.lambda) + "," + to_string(u.side) + "," +
               (u.planted_gatekeeper ? "true" : "false") + "\n";
    return out;
}

inline GroundTruth read_truth(std::istream& in, const std::string& source = "truth") {
    GroundTruth truth;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_skippable_line(line)) continue;
        auto f = split(line, ',');
        if (f.size() != 4) throw ParseError(source, lineno, "expected user_id,lambda,side,planted_gatekeeper");
        if (trim(f[0]) == "user_id") continue;
        UserTruth u;
        u.user_id = std::string(trim(f[0]));
        auto lambda = parse_double(f[1]);
        if (!lambda) throw ParseError(source, lineno, "lambda is not a number");
        u.lambda = *lambda;
        const auto side = trim(f[2]);
        if (side != "left" && side != "right") throw ParseError(source, lineno, "side must be left or right");
        u.side = side == "left" ? Side::left : Side::right;
        const auto flag = trim(f[3]);
        if (flag != "true" && flag != "false") throw ParseError(source, lineno, "planted_gatekeeper must be true/false");
        u.planted_gatekeeper = flag == "true";
        truth.users.push_back(std::move(u));
    }
    return truth;
}

/// Standard file names inside a synth output directory.
struct DatasetPaths {
    std::filesystem::path dir;
    std::filesystem::path edges() const { return dir / "edges.tsv"; }
    std::filesystem::path tweets() const { return dir / "tweets.jsonl"; }
    std::filesystem::path profiles() const { return dir / "profiles.csv"; }
    std::filesystem::path leaning_table() const { return dir / "leaning.csv"; }
    std::filesystem::path user_polarity() const { return dir / "user_polarity.csv"; }
    std::filesystem::path truth() const { return dir / "truth.csv"; }
};

/// Writes the dataset in the formats ingest reads back.
inline void write_dataset(const SynthData& data, const DatasetPaths& paths, const std::string& header) {
    std::filesystem::create_directories(paths.dir);
    write_file(paths.edges().string(), write_edge_list(data.graph, header));
    write_file(paths.tweets().string(), header + ingest::write_tweets(data.tweets));
    write_file(paths.profiles().string(), ingest::write_profiles(data.profiles, header));
    write_file(paths.leaning_table().string(), ingest::write_leaning_table(data.truth.table, header));
    std::string up = header + "user_id,score\n";
    for (const auto& [id, score] : data.user_polarity) up += id + "," + format_double(score) + "\n";
    write_file(paths.user_polarity().string(), up);
    write_file(paths.truth().string(), export_truth(data.truth, header));
}

// ---------------------------------------------------------------------------
// Gatekeeper recovery

struct PlantReport {
    double delta = 0.0;
    std::size_t planted = 0;
    std::size_t detected = 0;
    std::size_t true_positives = 0;
    double precision = 1.0;
    double recall = 1.0;
    /// Set when the value is 1 by the empty-set convention (0/0).
    bool precision_by_convention = false;
    bool recall_by_convention = false;
};

/// Precision and recall of detected gatekeepers against planted ones.
/// Users whose gatekeeper status is undefined count as not detected.
inline PlantReport plant_report(const GroundTruth& truth, const std::vector<std::string>& user_ids,
                                const std::vector<polarity::RoleLabel>& labels, double delta) {
    if (user_ids.size() != labels.size()) throw ValidationError("plant_report: ids and labels differ in length");
    for (const auto& l : labels)
        if (l.delta != delta) throw ValidationError("plant_report: label computed at a different delta");
    std::map<std::string, bool> detected;
    for (std::size_t i = 0; i < labels.size(); ++i) detected[user_ids[i]] = labels[i].gatekeeper.value_or(false);

    PlantReport r;
    r.delta = delta;
    for (const auto& [id, flag] : detected) r.detected += flag ? 1 : 0;
    for (const auto& u : truth.users) {
        if (!u.planted_gatekeeper) continue;
        ++r.planted;
        auto it = detected.find(u.user_id);
        if (it != detected.end() && it->second) ++r.true_positives;
    }
    if (r.detected == 0) {
        r.precision = 1.0;
        r.precision_by_convention = true;
    } else {
        r.precision = static_cast<double>(r.true_positives) / static_cast<double>(r.detected);
    }
    if (r.planted == 0) {
        r.recall = 1.0;
        r.recall_by_convention = true;
    } else {
        r.recall = static_cast<double>(r.true_positives) / static_cast<double>(r.planted);
    }
    return r;
}

} // namespace echograph::synth
