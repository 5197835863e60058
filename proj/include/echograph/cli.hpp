#pragma once

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "echograph/error.hpp"
#include "echograph/format.hpp"
#include "echograph/pipeline.hpp"
#include "echograph/synth.hpp"

namespace echograph::cli {

enum ExitCode : int { ok = 0, validation_error = 1, io_error = 2 };

/// Flag values before they are folded into a RunConfig.
struct Options {
    pipeline::RunConfig run;
    synth::SynthConfig synth;
    std::string in;
    std::string delta_grid;
    std::string filter_order = "bots-first";
    std::string balance = "downsample";
    std::int64_t reference_time = 0;
};

inline void add_options(CLI::App& app, Options& o) {
    auto& r = o.run;
    app.set_config("--config", "", "flat key=value file; command-line flags take precedence");

    app.add_option("--edges", r.edges, "follow edge list (follower<TAB>followee)");
    app.add_option("--tweets", r.tweets, "tweets as JSON lines");
    app.add_option("--profiles", r.profiles, "user profiles CSV");
    app.add_option("--leaning-table", r.leaning_table, "domain,score CSV of source leanings");
    app.add_option("--user-polarity", r.user_polarity, "user_id,score CSV of external polarity scores");
    app.add_option("--truth", r.truth, "planted ground truth from synth");
    app.add_option("--in", o.in, "synth output directory supplying default input paths");
    app.add_option("--out", r.out, "output directory");

    app.add_option("--delta", r.delta, "partisanship threshold in (0, 0.5]");
    app.add_option("--delta-grid", o.delta_grid, "threshold grid lo:hi:step");
    app.add_option("--min-obs", r.min_observations, "minimum link observations for a defined polarity");
    app.add_option("--seed", r.seed, "master random seed");
    app.add_option("--threads", r.threads, "worker threads (default: $ECHOGRAPH_THREADS, else 1)")
        ->check(CLI::PositiveNumber);

    app.add_option("--min-tweets", r.min_tweets, "activity filter: minimum tweets per user");
    app.add_option("--max-tweets-per-day", r.bots.max_tweets_per_day);
    app.add_option("--min-tweets-per-day", r.bots.min_tweets_per_day);
    app.add_option("--min-followers", r.bots.min_followers);
    app.add_option("--min-friends", r.bots.min_friends);
    app.add_option("--min-account-age-days", r.bots.min_account_age_days);
    app.add_option("--reference-time", o.reference_time, "unix time for account ages (default: latest tweet)");
    app.add_option("--filter-order", o.filter_order)->check(CLI::IsMember({"bots-first", "activity-first"}));

    app.add_option("--damping", r.damping);
    app.add_option("--pagerank-tolerance", r.pagerank_tolerance);
    app.add_option("--pagerank-max-iterations", r.pagerank_max_iterations);
    app.add_option("--alpha", r.alpha, "per-test significance level");
    app.add_option("--k", r.min_significant, "significant thresholds needed for a verdict");

    app.add_option("--trees", r.trees);
    app.add_option("--max-depth", r.max_depth, "0 for unlimited");
    app.add_option("--mtry", r.features_per_split, "features per split, 0 for sqrt(p)");
    app.add_option("--folds", r.folds);
    app.add_option("--ngram-max", r.ngram_max);
    app.add_option("--vocab-cap", r.vocab_cap);
    app.add_option("--balance", o.balance)->check(CLI::IsMember({"strict", "downsample"}));

    auto& s = o.synth;
    app.add_option("--n-left", s.n_left);
    app.add_option("--n-right", s.n_right);
    app.add_option("--p-in", s.p_in);
    app.add_option("--p-out", s.p_out);
    app.add_option("--tweets-per-user", s.tweets_per_user);
    app.add_option("--link-fraction", s.link_fraction);
    app.add_option("--noise", s.leaning_noise, "sigma of the per-tweet leaning noise");
    app.add_option("--gatekeeper-fraction", s.gatekeeper_fraction);
    app.add_option("--domains", s.n_domains, "synthetic domains per side");
    app.add_option("--token-overlap", s.token_overlap);
}

inline void finalize(Options& o, const CLI::App& app) {
    auto& r = o.run;
    if (!o.delta_grid.empty()) r.delta_grid = pipeline::parse_delta_grid(o.delta_grid);
    if (app.count("--reference-time")) r.bots.reference_time = o.reference_time;
    if (app.count("--threads") == 0)
        if (const char* env = std::getenv("ECHOGRAPH_THREADS"); env && *env) {
            const std::string_view text(env);
            long n = 0;
            const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
            if (ec != std::errc{} || end != text.data() + text.size() || n < 1)
                throw ValidationError("ECHOGRAPH_THREADS must be a positive integer, got '" + std::string(text) + "'");
            r.threads = static_cast<unsigned>(n);
        }
    r.filter_order = o.filter_order == "activity-first" ? ingest::FilterOrder::activity_first
                                                        : ingest::FilterOrder::bots_first;
    r.balance = o.balance == "strict" ? predict::BalanceMode::strict : predict::BalanceMode::downsample;
    o.synth.seed = r.seed;
    if (!o.in.empty()) {
        synth::DatasetPaths d{o.in};
        auto fill = [](std::string& target, const std::filesystem::path& p, bool optional) {
            if (target.empty() && (!optional || std::filesystem::exists(p))) target = p.string();
        };
        fill(r.edges, d.edges(), false);
        fill(r.tweets, d.tweets(), false);
        fill(r.profiles, d.profiles(), true);
        fill(r.leaning_table, d.leaning_table(), false);
        fill(r.user_polarity, d.user_polarity(), true);
        fill(r.truth, d.truth(), true);
        if (app.count("--out") == 0) r.out = (std::filesystem::path(o.in) / "report").string();
    }
}

inline void report(std::ostream& out, const std::string& dir, const std::vector<std::string>& files) {
    for (const auto& f : files) out << (std::filesystem::path(dir) / f).string() << "\n";
}

inline int run_stage(const std::string& stage, Options& o, std::ostream& out) {
    using namespace pipeline;
    auto& cfg = o.run;

    if (stage == "synth") {
        o.synth.validate();
        const auto data = synth::generate(o.synth);
        Fnv1a h;
        h.update(o.synth.canonical());
        synth::write_dataset(data, {cfg.out}, header_line("synth", h.hex()));
        out << "wrote synthetic dataset to " << cfg.out << "\n";
        return ok;
    }

    cfg.validate();
    if (stage == "pipeline") {
        report(out, cfg.out, run_pipeline(cfg));
        return ok;
    }

    const bool content = stage != "metrics";
    auto d = load_inputs(cfg, content);
    OutputDir dir(cfg.out, stage, config_hash(cfg));
    if (stage == "ingest") {
        write_ingest(dir, d);
    } else if (stage == "metrics") {
        write_metrics(dir, d, analyze_network(d, cfg));
    } else {
        const auto a = analyze(d, cfg);
        if (stage == "polarity") write_polarity(dir, a, cfg);
        else if (stage == "compare") {
            write_compare(dir, d, a, cfg);
            out << cfg.delta_grid.size() << " thresholds evaluated\n";
        } else if (stage == "scatter") write_scatter(dir, a);
        else if (stage == "beanplot") write_beanplots(dir, d, a, cfg);
        else if (stage == "predict") write_predict(dir, d, a, cfg);
    }
    report(out, cfg.out, dir.written());
    return ok;
}

/// Runs one subcommand; args exclude the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"echograph: echo-chamber measurement on directed follow graphs", "echograph"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    Options o;
    add_options(app, o);
    const std::vector<std::pair<const char*, const char*>> stages = {
        {"ingest", "parse inputs, apply bot and activity filters"},
        {"metrics", "PageRank, clustering coefficient, degrees"},
        {"polarity", "production/consumption polarity and roles per delta"},
        {"compare", "Welch tests across the delta grid"},
        {"scatter", "polarity scatter, variance profile, correlation"},
        {"beanplot", "density data for partisan vs bipartisan features"},
        {"predict", "random-forest role prediction with cross-validation"},
        {"synth", "generate a synthetic two-sided dataset"},
        {"pipeline", "run every analysis stage"},
    };
    for (auto [name, desc] : stages) app.add_subcommand(name, desc);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return validation_error;
    }

    try {
        finalize(o, app);
        return run_stage(app.get_subcommands().front()->get_name(), o, out);
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return io_error;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "I/O error: " << e.what() << "\n";
        return io_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return validation_error;
    }
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

} // namespace echograph::cli
