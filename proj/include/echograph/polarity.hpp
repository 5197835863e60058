#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "echograph/error.hpp"
#include "echograph/format.hpp"
#include "echograph/graph.hpp"
#include "echograph/ingest.hpp"
#include "echograph/parallel.hpp"

namespace echograph::polarity {

/// Leanings a user produced (own link tweets) and consumed (followees'
/// link tweets), plus per-tweet interaction counts over all own tweets.
struct UserContentProfile {
    std::string user_id;
    std::vector<double> produced;
    std::vector<double> consumed;
    std::size_t total_tweets = 0;
    std::vector<std::int64_t> retweet_counts;
    std::vector<std::int64_t> favorite_counts;
};

struct PolarityOptions {
    std::size_t min_observations = 1;
};

namespace detail {

// Summation over a sorted copy makes the result bit-identical under any
// permutation of the observations.
inline std::vector<double> sorted_copy(std::span<const double> xs) {
    std::vector<double> v(xs.begin(), xs.end());
    std::sort(v.begin(), v.end());
    return v;
}

inline double sum_sorted(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

} // namespace detail

inline std::optional<double> mean_leaning(std::span<const double> leanings, std::size_t min_observations = 1) {
    if (leanings.empty() || leanings.size() < min_observations) return std::nullopt;
    const auto v = detail::sorted_copy(leanings);
    return std::clamp(detail::sum_sorted(v) / static_cast<double>(v.size()), 0.0, 1.0);
}

/// Population variance (divides by n). Bounded by 0.25 for data in [0,1].
inline std::optional<double> leaning_variance(std::span<const double> leanings, std::size_t min_observations = 1) {
    if (leanings.empty() || leanings.size() < min_observations) return std::nullopt;
    const auto v = detail::sorted_copy(leanings);
    const double n = static_cast<double>(v.size());
    const double mean = detail::sum_sorted(v) / n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::clamp(ss / n, 0.0, 0.25);
}

inline std::optional<double> production_polarity(const UserContentProfile& p, const PolarityOptions& o = {}) {
    return mean_leaning(p.produced, o.min_observations);
}
inline std::optional<double> production_variance(const UserContentProfile& p, const PolarityOptions& o = {}) {
    return leaning_variance(p.produced, o.min_observations);
}
inline std::optional<double> consumption_polarity(const UserContentProfile& p, const PolarityOptions& o = {}) {
    return mean_leaning(p.consumed, o.min_observations);
}
inline std::optional<double> consumption_variance(const UserContentProfile& p, const PolarityOptions& o = {}) {
    return leaning_variance(p.consumed, o.min_observations);
}

/// Pooled link leanings of every followee of `user`, followees in index order.
inline std::vector<double> consumption_observations(const std::string& user, const FollowGraph& g,
                                                    const ingest::Corpus& corpus) {
    auto u = g.index_of(user);
    if (!u) throw ValidationError("user not in follow graph: " + user);
    std::vector<double> pooled;
    for (NodeIndex v : g.out_neighbors(*u))
        for (const auto& obs : corpus.observations(g.id(v))) pooled.push_back(obs.leaning);
    return pooled;
}

/// Profiles for every graph node, in node index order.
inline std::vector<UserContentProfile> build_profiles(const FollowGraph& g, const ingest::Corpus& corpus,
                                                      unsigned threads = 1) {
    const auto n = g.node_count();
    std::vector<std::vector<double>> produced(n);
    for (NodeIndex u = 0; u < n; ++u)
        for (const auto& obs : corpus.observations(g.id(u))) produced[u].push_back(obs.leaning);

    std::vector<UserContentProfile> profiles(n);
    parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto u = static_cast<NodeIndex>(i);
            auto& p = profiles[i];
            p.user_id = g.id(u);
            p.produced = produced[u];
            for (NodeIndex v : g.out_neighbors(u))
                p.consumed.insert(p.consumed.end(), produced[v].begin(), produced[v].end());
            const auto& tweets = corpus.tweets(p.user_id);
            p.total_tweets = tweets.size();
            for (const auto& t : tweets) {
                p.retweet_counts.push_back(t.retweet_count);
                p.favorite_counts.push_back(t.favorite_count);
            }
        }
    });
    return profiles;
}

// ---------------------------------------------------------------------------
// Roles

enum class PartisanLabel { left_partisan, right_partisan, bipartisan };
enum class ConsumerLabel { left_consumer, right_consumer, non_consumer };

inline const char* to_string(PartisanLabel l) {
    switch (l) {
    case PartisanLabel::left_partisan: return "left-partisan";
    case PartisanLabel::right_partisan: return "right-partisan";
    case PartisanLabel::bipartisan: return "bipartisan";
    }
    return "?";
}
inline const char* to_string(ConsumerLabel l) {
    switch (l) {
    case ConsumerLabel::left_consumer: return "left-consumer";
    case ConsumerLabel::right_consumer: return "right-consumer";
    case ConsumerLabel::non_consumer: return "non-consumer";
    }
    return "?";
}

/// Slack on the inclusive boundary: p = 0.8 at delta = 0.2 is right-partisan
/// even though 1 - 0.8 rounds above 0.2.
inline constexpr double kBoundaryTolerance = 1e-12;

inline void check_delta(double delta) {
    if (!(delta > 0.0 && delta <= 0.5)) throw ValidationError("delta must lie in (0, 0.5]: " + format_double(delta));
}

inline bool within_delta_of_extreme(double x, double delta) {
    return std::min(x, 1.0 - x) <= delta + kBoundaryTolerance;
}

inline PartisanLabel classify_partisan(double p, double delta) {
    check_delta(delta);
    if (p <= delta + kBoundaryTolerance) return PartisanLabel::left_partisan;
    if (1.0 - p <= delta + kBoundaryTolerance) return PartisanLabel::right_partisan;
    return PartisanLabel::bipartisan;
}

inline ConsumerLabel classify_consumer(double c, double delta) {
    check_delta(delta);
    if (c <= delta + kBoundaryTolerance) return ConsumerLabel::left_consumer;
    if (1.0 - c <= delta + kBoundaryTolerance) return ConsumerLabel::right_consumer;
    return ConsumerLabel::non_consumer;
}

/// Partisan producer that is not a one-sided consumer.
inline bool classify_gatekeeper(double p, double c, double delta) {
    return classify_partisan(p, delta) != PartisanLabel::bipartisan &&
           classify_consumer(c, delta) == ConsumerLabel::non_consumer;
}

struct RoleLabel {
    double delta = 0.3;
    std::optional<PartisanLabel> partisan;
    std::optional<ConsumerLabel> consumer;
    /// Defined only when both p and c are.
    std::optional<bool> gatekeeper;

    bool is_partisan() const { return partisan && *partisan != PartisanLabel::bipartisan; }
    bool is_bipartisan() const { return partisan && *partisan == PartisanLabel::bipartisan; }
    bool is_consumer() const { return consumer && *consumer != ConsumerLabel::non_consumer; }
};

// ---------------------------------------------------------------------------
// Summaries

struct PolaritySummary {
    std::string user_id;
    std::optional<double> p, c, var_p, var_c;
    std::size_t n_produced = 0;
    std::size_t n_consumed = 0;
    std::optional<double> user_polarity;
};

inline PolaritySummary summarize(const UserContentProfile& profile, const PolarityOptions& o = {},
                                 std::optional<double> user_polarity = std::nullopt) {
    PolaritySummary s;
    s.user_id = profile.user_id;
    s.p = production_polarity(profile, o);
    s.c = consumption_polarity(profile, o);
    s.var_p = production_variance(profile, o);
    s.var_c = consumption_variance(profile, o);
    s.n_produced = profile.produced.size();
    s.n_consumed = profile.consumed.size();
    s.user_polarity = user_polarity;
    return s;
}

inline std::vector<PolaritySummary> summarize_all(const std::vector<UserContentProfile>& profiles,
                                                  const PolarityOptions& o = {},
                                                  const std::map<std::string, double>& user_polarity = {},
                                                  unsigned threads = 1) {
    std::vector<PolaritySummary> out(profiles.size());
    parallel_for(profiles.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            std::optional<double> up;
            if (auto it = user_polarity.find(profiles[i].user_id); it != user_polarity.end()) up = it->second;
            out[i] = summarize(profiles[i], o, up);
        }
    });
    return out;
}

inline RoleLabel classify(const PolaritySummary& s, double delta) {
    check_delta(delta);
    RoleLabel r;
    r.delta = delta;
    if (s.p) r.partisan = classify_partisan(*s.p, delta);
    if (s.c) r.consumer = classify_consumer(*s.c, delta);
    if (s.p && s.c) r.gatekeeper = r.is_partisan() && !r.is_consumer();
    return r;
}

inline std::vector<RoleLabel> classify_all(const std::vector<PolaritySummary>& summaries, double delta) {
    std::vector<RoleLabel> out;
    out.reserve(summaries.size());
    for (const auto& s : summaries) out.push_back(classify(s, delta));
    return out;
}

// ---------------------------------------------------------------------------
// Interactions

struct InteractionSummary {
    double retweet_rate = 0.0;
    double favorite_rate = 0.0;
    double retweet_volume = 0.0;
    double favorite_volume = 0.0;
};

/// Median; even lengths average the two middle values.
inline double median(std::vector<std::int64_t> values) {
    std::sort(values.begin(), values.end());
    const auto n = values.size();
    if (n % 2 == 1) return static_cast<double>(values[n / 2]);
    return (static_cast<double>(values[n / 2 - 1]) + static_cast<double>(values[n / 2])) / 2.0;
}

inline double fraction_positive(const std::vector<std::int64_t>& values) {
    const auto hits = std::count_if(values.begin(), values.end(), [](std::int64_t v) { return v >= 1; });
    return static_cast<double>(hits) / static_cast<double>(values.size());
}

/// Undefined for users with no tweets.
inline std::optional<InteractionSummary> interaction_metrics(const std::vector<std::int64_t>& retweets,
                                                             const std::vector<std::int64_t>& favorites) {
    if (retweets.empty() || favorites.empty()) return std::nullopt;
    InteractionSummary s;
    s.retweet_rate = fraction_positive(retweets);
    s.favorite_rate = fraction_positive(favorites);
    s.retweet_volume = median(retweets);
    s.favorite_volume = median(favorites);
    return s;
}

inline std::optional<InteractionSummary> interaction_metrics(const std::vector<ingest::TweetRecord>& tweets) {
    std::vector<std::int64_t> rt, fav;
    for (const auto& t : tweets) {
        rt.push_back(t.retweet_count);
        fav.push_back(t.favorite_count);
    }
    return interaction_metrics(rt, fav);
}

inline std::optional<InteractionSummary> interaction_metrics(const UserContentProfile& p) {
    return interaction_metrics(p.retweet_counts, p.favorite_counts);
}

/// "user_id,p,c,var_p,var_c,n_produced,n_consumed,partisan,consumer,gatekeeper"
/// for a single delta; undefined values are written as NA.
inline std::string export_summaries(const std::vector<PolaritySummary>& summaries, double delta,
                                    std::string_view header = {}) {
    std::string out(header);
    out += "user_id,p,c,var_p,var_c,n_produced,n_consumed,partisan,consumer,gatekeeper\n";
    for (const auto& s : summaries) {
        const auto r = classify(s, delta);
        out += s.user_id + "," + format_optional(s.p) + "," + format_optional(s.c) + "," +
               format_optional(s.var_p) + "," + format_optional(s.var_c) + "," + std::to_string(s.n_produced) +
               "," + std::to_string(s.n_consumed) + "," + (r.partisan ? to_string(*r.partisan) : "NA") + "," +
               (r.consumer ? to_string(*r.consumer) : "NA") + "," +
               (r.gatekeeper ? (*r.gatekeeper ? "true" : "false") : "NA") + "\n";
    }
    return out;
}

} // namespace echograph::polarity
