#pragma once

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "echograph/error.hpp"
#include "echograph/format.hpp"
#include "echograph/graph.hpp"

namespace echograph::ingest {

struct TweetRecord {
    std::string tweet_id;
    std::string user_id;
    std::int64_t timestamp = 0;
    std::vector<std::string> urls;
    std::string text;
    std::int64_t retweet_count = 0;
    std::int64_t favorite_count = 0;
};

struct UserProfileRecord {
    std::string user_id;
    std::int64_t followers_count = 0;
    std::int64_t friends_count = 0;
    std::int64_t statuses_count = 0;
    std::int64_t account_created = 0;
};

/// One news-linking tweet and its leaning in [0,1].
struct LinkObservation {
    std::string tweet_id;
    double leaning = 0.0;
};

// ---------------------------------------------------------------------------
// Domains

namespace detail {

inline bool valid_label(std::string_view label) {
    if (label.empty() || label.size() > 63) return false;
    if (label.front() == '-' || label.back() == '-') return false;
    return std::all_of(label.begin(), label.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-';
    });
}

inline std::string lowercase(std::string_view s) {
    std::string out(s);
    for (auto& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

inline std::string strip_www(std::string host) {
    if (host.size() > 4 && host.compare(0, 4, "www.") == 0) host.erase(0, 4);
    return host;
}

} // namespace detail

/// Lowercased host of a URL with a leading "www." removed; std::nullopt when
/// the input does not look like a URL with a dotted DNS host. Scheme-less
/// inputs such as "fxn.ws/abc" are accepted.
inline std::optional<std::string> extract_domain(std::string_view url) {
    url = trim(url);
    if (url.empty()) return std::nullopt;
    if (std::any_of(url.begin(), url.end(), [](char c) { return c == ' ' || c == '\t' || c == '\n'; }))
        return std::nullopt;

    if (auto pos = url.find("://"); pos != std::string_view::npos) {
        auto scheme = url.substr(0, pos);
        if (scheme.empty() || !std::isalpha(static_cast<unsigned char>(scheme.front()))) return std::nullopt;
        for (char c : scheme)
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.')
                return std::nullopt;
        url.remove_prefix(pos + 3);
    } else if (url.substr(0, 2) == "//") {
        url.remove_prefix(2);
    }

    auto authority = url.substr(0, url.find_first_of("/?#"));
    if (auto at = authority.rfind('@'); at != std::string_view::npos) authority.remove_prefix(at + 1);
    if (authority.find('[') != std::string_view::npos) return std::nullopt;
    if (auto colon = authority.find(':'); colon != std::string_view::npos) {
        auto port = authority.substr(colon + 1);
        if (!std::all_of(port.begin(), port.end(), [](char c) { return c >= '0' && c <= '9'; }))
            return std::nullopt;
        authority = authority.substr(0, colon);
    }
    std::string host = detail::lowercase(authority);
    if (!host.empty() && host.back() == '.') host.pop_back();
    host = detail::strip_www(std::move(host));

    auto labels = split(host, '.');
    if (labels.size() < 2) return std::nullopt;
    for (auto label : labels)
        if (!detail::valid_label(label)) return std::nullopt;
    auto tld = labels.back();
    if (!std::any_of(tld.begin(), tld.end(), [](char c) { return c >= 'a' && c <= 'z'; })) return std::nullopt;
    return host;
}

// ---------------------------------------------------------------------------
// Source leaning table

/// News domain -> leaning in [0,1] (0 liberal, 1 conservative), plus short
/// domains aliased to a canonical entry.
class SourceLeaningTable {
public:
    void add_entry(std::string domain, double leaning) {
        domain = normalize(domain);
        if (domain.empty()) throw ValidationError("empty domain in leaning table");
        if (!(leaning >= 0.0 && leaning <= 1.0))
            throw ValidationError("leaning for " + domain + " outside [0,1]: " + format_double(leaning));
        if (entries_.count(domain) || aliases_.count(domain))
            throw ValidationError("duplicate domain in leaning table: " + domain);
        entries_.emplace(std::move(domain), leaning);
    }

    /// Alias targets are checked by validate(), so aliases may precede entries.
    void add_alias(std::string alias, std::string canonical) {
        alias = normalize(alias);
        canonical = normalize(canonical);
        if (alias.empty() || canonical.empty()) throw ValidationError("empty alias or alias target");
        if (entries_.count(alias) || aliases_.count(alias))
            throw ValidationError("duplicate domain in leaning table: " + alias);
        aliases_.emplace(std::move(alias), std::move(canonical));
    }

    void validate() const {
        for (const auto& [alias, target] : aliases_)
            if (!entries_.count(target))
                throw ValidationError("alias " + alias + " points to unknown domain " + target);
    }

    /// Exact match of the host or one of its parent domains (longest first),
    /// each candidate looked up through the alias map and then the entries.
    std::optional<double> lookup(std::string_view host) const {
        std::string candidate = normalize(host);
        for (;;) {
            if (auto it = aliases_.find(candidate); it != aliases_.end()) return entries_.at(it->second);
            if (auto it = entries_.find(candidate); it != entries_.end()) return it->second;
            auto dot = candidate.find('.');
            if (dot == std::string::npos) return std::nullopt;
            std::string parent = candidate.substr(dot + 1);
            if (parent.find('.') == std::string::npos) return std::nullopt;
            candidate = std::move(parent);
        }
    }

    std::size_t size() const { return entries_.size(); }
    const std::map<std::string, double>& entries() const { return entries_; }
    const std::map<std::string, std::string>& aliases() const { return aliases_; }

private:
    static std::string normalize(std::string_view domain) {
        return detail::strip_www(detail::lowercase(trim(domain)));
    }

    std::map<std::string, double> entries_;
    std::map<std::string, std::string> aliases_;
};

/// "domain,score" rows and "alias,=,canonical" rows; '#' comments allowed.
inline SourceLeaningTable load_leaning_table(std::istream& in, const std::string& source = "leaning-table") {
    SourceLeaningTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_skippable_line(line)) continue;
        auto fields = split(line, ',');
        try {
            if (fields.size() == 3 && trim(fields[1]) == "=") {
                table.add_alias(std::string(trim(fields[0])), std::string(trim(fields[2])));
            } else if (fields.size() == 2) {
                auto score = parse_double(fields[1]);
                if (!score) throw ParseError(source, lineno, "score is not a decimal number");
                table.add_entry(std::string(trim(fields[0])), *score);
            } else {
                throw ParseError(source, lineno, "expected domain,score or alias,=,canonical");
            }
        } catch (const ParseError&) {
            throw;
        } catch (const ValidationError& e) {
            throw ValidationError(source + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    table.validate();
    return table;
}

inline std::string write_leaning_table(const SourceLeaningTable& table, std::string_view header = {}) {
    std::string out(header);
    for (const auto& [domain, leaning] : table.entries()) out += domain + "," + format_double(leaning) + "\n";
    for (const auto& [alias, target] : table.aliases()) out += alias + ",=," + target + "\n";
    return out;
}

/// Mean leaning of the tweet's URLs that resolve through the table; one
/// observation per tweet no matter how many links it carries.
inline std::optional<double> resolve_leaning(const TweetRecord& tweet, const SourceLeaningTable& table) {
    double sum = 0.0;
    std::size_t matched = 0;
    for (const auto& url : tweet.urls) {
        auto domain = extract_domain(url);
        if (!domain) continue;
        if (auto leaning = table.lookup(*domain)) {
            sum += *leaning;
            ++matched;
        }
    }
    if (matched == 0) return std::nullopt;
    return std::clamp(sum / static_cast<double>(matched), 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Tweets and corpus

namespace detail {

inline std::string json_id(const nlohmann::json& v, const char* key) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    throw ValidationError(std::string(key) + " must be a string or integer");
}

inline std::int64_t json_count(const nlohmann::json& obj, const char* key) {
    if (!obj.contains(key)) return 0;
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) throw ValidationError(std::string(key) + " must be an integer");
    auto n = v.get<std::int64_t>();
    if (n < 0) throw ValidationError(std::string(key) + " must be non-negative");
    return n;
}

} // namespace detail

inline TweetRecord parse_tweet(std::string_view line) {
    auto obj = nlohmann::json::parse(line.begin(), line.end());
    if (!obj.is_object()) throw ValidationError("tweet record must be an object");
    TweetRecord t;
    if (!obj.contains("tweet_id")) throw ValidationError("missing tweet_id");
    if (!obj.contains("user_id")) throw ValidationError("missing user_id");
    t.tweet_id = detail::json_id(obj.at("tweet_id"), "tweet_id");
    t.user_id = detail::json_id(obj.at("user_id"), "user_id");
    if (t.user_id.empty()) throw ValidationError("empty user_id");
    if (obj.contains("timestamp")) {
        if (!obj.at("timestamp").is_number_integer()) throw ValidationError("timestamp must be an integer");
        t.timestamp = obj.at("timestamp").get<std::int64_t>();
    }
    if (obj.contains("urls")) {
        const auto& urls = obj.at("urls");
        if (!urls.is_array()) throw ValidationError("urls must be an array");
        for (const auto& u : urls) {
            if (!u.is_string()) throw ValidationError("urls must contain strings");
            t.urls.push_back(u.get<std::string>());
        }
    }
    if (obj.contains("text")) {
        if (!obj.at("text").is_string()) throw ValidationError("text must be a string");
        t.text = obj.at("text").get<std::string>();
    }
    t.retweet_count = detail::json_count(obj, "retweet_count");
    t.favorite_count = detail::json_count(obj, "favorite_count");
    return t;
}

/// Newline-delimited JSON objects, one tweet per line; '#' lines are comments.
inline std::vector<TweetRecord> read_tweets(std::istream& in, const std::string& source = "tweets") {
    std::vector<TweetRecord> tweets;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_skippable_line(line)) continue;
        try {
            tweets.push_back(parse_tweet(line));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(source, lineno, e.what());
        } catch (const ValidationError& e) {
            throw ParseError(source, lineno, e.what());
        }
    }
    return tweets;
}

inline std::string tweet_to_json(const TweetRecord& t) {
    nlohmann::ordered_json obj;
    obj["tweet_id"] = t.tweet_id;
    obj["user_id"] = t.user_id;
    obj["timestamp"] = t.timestamp;
    obj["urls"] = t.urls;
    obj["text"] = t.text;
    obj["retweet_count"] = t.retweet_count;
    obj["favorite_count"] = t.favorite_count;
    return obj.dump();
}

inline std::string write_tweets(const std::vector<TweetRecord>& tweets) {
    std::string out;
    for (const auto& t : tweets) {
        out += tweet_to_json(t);
        out += '\n';
    }
    return out;
}

/// Tweets grouped by user plus each user's resolved link observations.
/// std::map keeps user iteration order deterministic.
class Corpus {
public:
    Corpus() = default;

    Corpus(std::vector<TweetRecord> tweets, const SourceLeaningTable& table) {
        for (auto& t : tweets) {
            auto leaning = resolve_leaning(t, table);
            auto& user = users_[t.user_id];
            if (leaning) user.observations.push_back({t.tweet_id, *leaning});
            user.tweets.push_back(std::move(t));
        }
    }

    std::vector<std::string> user_ids() const {
        std::vector<std::string> ids;
        ids.reserve(users_.size());
        for (const auto& [id, _] : users_) ids.push_back(id);
        return ids;
    }
    bool contains(const std::string& user) const { return users_.count(user) > 0; }
    std::size_t user_count() const { return users_.size(); }

    const std::vector<TweetRecord>& tweets(const std::string& user) const {
        auto it = users_.find(user);
        return it == users_.end() ? empty_tweets() : it->second.tweets;
    }
    const std::vector<LinkObservation>& observations(const std::string& user) const {
        auto it = users_.find(user);
        return it == users_.end() ? empty_observations() : it->second.observations;
    }

    std::size_t tweet_count() const {
        std::size_t n = 0;
        for (const auto& [_, u] : users_) n += u.tweets.size();
        return n;
    }
    std::size_t observation_count() const {
        std::size_t n = 0;
        for (const auto& [_, u] : users_) n += u.observations.size();
        return n;
    }
    std::optional<std::int64_t> latest_timestamp() const {
        std::optional<std::int64_t> latest;
        for (const auto& [_, u] : users_)
            for (const auto& t : u.tweets)
                if (!latest || t.timestamp > *latest) latest = t.timestamp;
        return latest;
    }

    Corpus restricted(const std::set<std::string>& keep) const {
        Corpus out;
        for (const auto& [id, u] : users_)
            if (keep.count(id)) out.users_.emplace(id, u);
        return out;
    }

private:
    struct UserData {
        std::vector<TweetRecord> tweets;
        std::vector<LinkObservation> observations;
    };
    static const std::vector<TweetRecord>& empty_tweets() {
        static const std::vector<TweetRecord> empty;
        return empty;
    }
    static const std::vector<LinkObservation>& empty_observations() {
        static const std::vector<LinkObservation> empty;
        return empty;
    }

    std::map<std::string, UserData> users_;
};

// ---------------------------------------------------------------------------
// Profiles

inline std::int64_t unix_now() {
    return std::chrono::duration_cast<std::chrono::seconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

/// "user_id,followers_count,friends_count,statuses_count,account_created";
/// an optional header row starting with "user_id" is skipped.
inline std::map<std::string, UserProfileRecord> read_profiles(std::istream& in,
                                                             const std::string& source = "profiles",
                                                             std::int64_t now = unix_now()) {
    std::map<std::string, UserProfileRecord> profiles;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_skippable_line(line)) continue;
        auto f = split(line, ',');
        if (f.size() != 5) throw ParseError(source, lineno, "expected 5 comma-separated fields");
        if (trim(f[0]) == "user_id") continue;
        UserProfileRecord p;
        p.user_id = std::string(trim(f[0]));
        if (p.user_id.empty()) throw ParseError(source, lineno, "empty user_id");
        auto followers = parse_integer<std::int64_t>(f[1]);
        auto friends = parse_integer<std::int64_t>(f[2]);
        auto statuses = parse_integer<std::int64_t>(f[3]);
        auto created = parse_integer<std::int64_t>(f[4]);
        if (!followers || !friends || !statuses || !created)
            throw ParseError(source, lineno, "non-integer count or timestamp");
        if (*followers < 0 || *friends < 0 || *statuses < 0)
            throw ValidationError(source + ":" + std::to_string(lineno) + ": negative count");
        if (*created > now)
            throw ValidationError(source + ":" + std::to_string(lineno) + ": account_created is in the future");
        p.followers_count = *followers;
        p.friends_count = *friends;
        p.statuses_count = *statuses;
        p.account_created = *created;
        if (!profiles.emplace(p.user_id, p).second)
            throw ValidationError(source + ":" + std::to_string(lineno) + ": duplicate user " + p.user_id);
    }
    return profiles;
}

inline std::string write_profiles(const std::map<std::string, UserProfileRecord>& profiles,
                                  std::string_view header = {}) {
    std::string out(header);
    out += "user_id,followers_count,friends_count,statuses_count,account_created\n";
    for (const auto& [id, p] : profiles) {
        out += id + "," + std::to_string(p.followers_count) + "," + std::to_string(p.friends_count) + "," +
               std::to_string(p.statuses_count) + "," + std::to_string(p.account_created) + "\n";
    }
    return out;
}

/// "user_id,score" with a signed externally estimated ideology score.
inline std::map<std::string, double> read_user_polarity(std::istream& in,
                                                        const std::string& source = "user-polarity") {
    std::map<std::string, double> scores;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_skippable_line(line)) continue;
        auto f = split(line, ',');
        if (f.size() != 2) throw ParseError(source, lineno, "expected user_id,score");
        if (trim(f[0]) == "user_id") continue;
        auto score = parse_double(f[1]);
        if (!score || !std::isfinite(*score)) throw ParseError(source, lineno, "score is not a finite number");
        if (!scores.emplace(std::string(trim(f[0])), *score).second)
            throw ValidationError(source + ":" + std::to_string(lineno) + ": duplicate user");
    }
    return scores;
}

// ---------------------------------------------------------------------------
// Bot and activity filters

struct BotThresholds {
    double min_tweets_per_day = 0.0;
    double max_tweets_per_day = 100.0;
    std::int64_t min_followers = 10;
    std::int64_t min_friends = 10;
    double min_account_age_days = 365.0;
    /// Data-collection time; when unset the latest tweet timestamp is used.
    std::optional<std::int64_t> reference_time;
};

enum class FilterOrder { bots_first, activity_first };

struct Removal {
    std::string user_id;
    std::string stage;  // "bot" or "activity"
    std::string reasons; // ';'-joined
};

struct FilterReport {
    std::set<std::string> retained;
    std::vector<Removal> removals; // sorted by user id
};

inline std::int64_t resolve_reference_time(const BotThresholds& t, const Corpus& corpus,
                                           const std::map<std::string, UserProfileRecord>& profiles) {
    if (t.reference_time) return *t.reference_time;
    if (auto latest = corpus.latest_timestamp()) return *latest;
    std::int64_t latest = 0;
    for (const auto& [_, p] : profiles) latest = std::max(latest, p.account_created);
    return latest;
}

inline double account_age_days(const UserProfileRecord& p, std::int64_t reference_time) {
    return static_cast<double>(reference_time - p.account_created) / 86400.0;
}

/// Reasons a profile fails the bot checks; empty when it passes.
/// Tweets per day is the lifetime rate statuses_count / account age.
inline std::vector<std::string> bot_violations(const UserProfileRecord& p, const BotThresholds& t,
                                               std::int64_t reference_time) {
    std::vector<std::string> reasons;
    const double age_days = account_age_days(p, reference_time);
    if (age_days < t.min_account_age_days) reasons.emplace_back("account_age");
    const double per_day = static_cast<double>(p.statuses_count) / std::max(age_days, 1.0);
    if (per_day > t.max_tweets_per_day) reasons.emplace_back("tweets_per_day_high");
    if (per_day < t.min_tweets_per_day) reasons.emplace_back("tweets_per_day_low");
    if (p.followers_count < t.min_followers) reasons.emplace_back("followers");
    if (p.friends_count < t.min_friends) reasons.emplace_back("friends");
    return reasons;
}

namespace detail {
inline std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}
} // namespace detail

/// Removes bot-like users among `candidates`. A candidate without a profile
/// is removed with reason "missing_profile".
inline FilterReport filter_bots(const std::map<std::string, UserProfileRecord>& profiles,
                                const std::set<std::string>& candidates, const BotThresholds& thresholds,
                                std::int64_t reference_time) {
    FilterReport report;
    for (const auto& user : candidates) {
        auto it = profiles.find(user);
        std::vector<std::string> reasons;
        if (it == profiles.end())
            reasons.emplace_back("missing_profile");
        else
            reasons = bot_violations(it->second, thresholds, reference_time);
        if (reasons.empty())
            report.retained.insert(user);
        else
            report.removals.push_back({user, "bot", detail::join(reasons, ';')});
    }
    return report;
}

/// Candidates are every corpus user plus every profiled user.
inline FilterReport filter_bots(const std::map<std::string, UserProfileRecord>& profiles, const Corpus& corpus,
                                const BotThresholds& thresholds) {
    std::set<std::string> candidates;
    for (auto& id : corpus.user_ids()) candidates.insert(id);
    for (const auto& [id, _] : profiles) candidates.insert(id);
    return filter_bots(profiles, candidates, thresholds, resolve_reference_time(thresholds, corpus, profiles));
}

/// Keeps users with at least `min_tweets` tweets in the corpus.
inline FilterReport filter_activity(const Corpus& corpus, const std::set<std::string>& candidates,
                                    std::size_t min_tweets) {
    FilterReport report;
    for (const auto& user : candidates) {
        if (corpus.tweets(user).size() >= min_tweets)
            report.retained.insert(user);
        else
            report.removals.push_back({user, "activity", "too_few_tweets"});
    }
    return report;
}

/// Bot checks and the topical-activity filter chained in the given order.
/// Both predicates depend only on per-user data, so the retained set is the
/// same either way; only the stage credited with each removal changes.
inline FilterReport apply_user_filters(const std::map<std::string, UserProfileRecord>& profiles,
                                       const Corpus& corpus, const BotThresholds& thresholds,
                                       std::size_t min_tweets, FilterOrder order, bool check_bots = true) {
    std::set<std::string> candidates;
    for (auto& id : corpus.user_ids()) candidates.insert(id);
    const auto reference = resolve_reference_time(thresholds, corpus, profiles);

    auto run_bots = [&](const std::set<std::string>& in) {
        if (!check_bots) return FilterReport{in, {}};
        return filter_bots(profiles, in, thresholds, reference);
    };
    auto run_activity = [&](const std::set<std::string>& in) { return filter_activity(corpus, in, min_tweets); };

    FilterReport first = order == FilterOrder::bots_first ? run_bots(candidates) : run_activity(candidates);
    FilterReport second = order == FilterOrder::bots_first ? run_activity(first.retained) : run_bots(first.retained);
    FilterReport out;
    out.retained = std::move(second.retained);
    out.removals = std::move(first.removals);
    out.removals.insert(out.removals.end(), second.removals.begin(), second.removals.end());
    std::sort(out.removals.begin(), out.removals.end(),
              [](const Removal& a, const Removal& b) { return a.user_id < b.user_id; });
    return out;
}

} // namespace echograph::ingest

namespace echograph::ingest {

/// Follow graph from an edge-list stream; `extra_users` become nodes even
/// when they have no edges.
inline FollowGraph build_graph(std::istream& edges, const std::string& source = "edges",
                               EdgeListStats* stats = nullptr,
                               const std::vector<std::string>& extra_users = {}) {
    return read_edge_list(edges, source, stats, extra_users);
}

} // namespace echograph::ingest
