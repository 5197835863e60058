#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "echograph/error.hpp"
#include "echograph/format.hpp"
#include "echograph/polarity.hpp"
#include "echograph/random.hpp"
#include "echograph/special.hpp"

namespace echograph::stats {

inline double mean(std::span<const double> xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

/// Unbiased (n-1) variance.
inline double sample_variance(std::span<const double> xs) {
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return ss / static_cast<double>(xs.size() - 1);
}

// ---------------------------------------------------------------------------
// Welch's t-test

struct WelchResult {
    double t = 0.0;
    double df = 0.0;
    double p_value = 1.0;
};

/// Two-sample t-test without the equal-variance assumption.
///
/// Degenerate samples (both variances zero) get df = n_a + n_b - 2 and
/// either t = 0, p = 1 (equal means) or t = +/-inf, p = 0.
inline WelchResult welch_t(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) throw ValidationError("welch_t: each sample needs at least 2 values");
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double ma = mean(a), mb = mean(b);
    const double va = sample_variance(a) / na;
    const double vb = sample_variance(b) / nb;
    const double se2 = va + vb;
    WelchResult r;
    if (se2 == 0.0) {
        r.df = na + nb - 2.0;
        if (ma == mb) {
            r.t = 0.0;
            r.p_value = 1.0;
        } else {
            r.t = ma > mb ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
            r.p_value = 0.0;
        }
        return r;
    }
    r.t = (ma - mb) / std::sqrt(se2);
    r.df = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    r.p_value = special::student_t_two_sided(r.t, r.df);
    return r;
}

/// Pearson correlation; std::nullopt when either input has zero variance.
inline std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ValidationError("pearson: length mismatch");
    if (x.size() < 2) throw ValidationError("pearson: need at least 2 pairs");
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// ---------------------------------------------------------------------------
// Group comparisons across the delta grid

/// Evenly spaced thresholds lo, lo+step, ..., hi (inclusive, within rounding).
inline std::vector<double> make_delta_grid(double lo, double hi, double step) {
    if (!(step > 0.0)) throw ValidationError("delta grid step must be positive");
    if (!(lo > 0.0 && hi <= 0.5 && lo <= hi)) throw ValidationError("delta grid must satisfy 0 < lo <= hi <= 0.5");
    std::vector<double> grid;
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= count; ++i) {
        // Round to 12 decimals so 0.2 + 5*0.05 prints as 0.45.
        grid.push_back(std::round((lo + static_cast<double>(i) * step) * 1e12) / 1e12);
    }
    return grid;
}

inline std::vector<double> default_delta_grid() { return make_delta_grid(0.20, 0.45, 0.05); }

/// Per-user feature columns aligned with a vector of PolaritySummary.
struct FeatureTable {
    std::vector<std::string> names;
    std::vector<std::vector<std::optional<double>>> columns; // [feature][user]

    void add(std::string name, std::vector<std::optional<double>> column) {
        names.push_back(std::move(name));
        columns.push_back(std::move(column));
    }
};

enum class Comparison { partisan_vs_bipartisan, gatekeeper_vs_random };
enum class Verdict { higher, lower, not_significant };

inline const char* to_string(Comparison c) {
    return c == Comparison::partisan_vs_bipartisan ? "partisan_vs_bipartisan" : "gatekeeper_vs_random";
}
inline const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::higher: return "higher";
    case Verdict::lower: return "lower";
    case Verdict::not_significant: return "not_significant";
    }
    return "?";
}

struct CompareOptions {
    std::vector<double> delta_grid = default_delta_grid();
    double alpha = 0.001;
    int min_significant = 4; // k
    std::uint64_t seed = 1;
};

struct DeltaEntry {
    double delta = 0.0;
    bool evaluable = false;
    std::size_t n_a = 0, n_b = 0;
    double mean_a = 0.0, mean_b = 0.0;
    WelchResult test;
    int direction = 0; // sign of mean_a - mean_b
    bool significant = false;
};

struct ComparisonReport {
    std::string feature;
    Comparison comparison = Comparison::partisan_vs_bipartisan;
    std::vector<DeltaEntry> entries;
    int higher_count = 0;
    int lower_count = 0;
    int evaluable_count = 0;
    Verdict verdict = Verdict::not_significant;
};

/// Users in the target group (a) and the comparison group (b) at one delta.
struct GroupSplit {
    std::vector<std::size_t> a, b;
};

/// Partisans vs bipartisans, or gatekeepers vs an equally sized seeded
/// sample of non-gatekeepers. Candidates are ordered by user id before
/// sampling, so the split does not depend on input order.
inline GroupSplit split_groups(const std::vector<polarity::PolaritySummary>& summaries, double delta,
                               Comparison comparison, std::uint64_t seed, std::size_t delta_index) {
    GroupSplit g;
    std::vector<std::size_t> order(summaries.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return summaries[x].user_id < summaries[y].user_id; });
    std::vector<std::size_t> others;
    for (std::size_t i : order) {
        const auto r = polarity::classify(summaries[i], delta);
        if (comparison == Comparison::partisan_vs_bipartisan) {
            if (r.is_partisan()) g.a.push_back(i);
            else if (r.is_bipartisan()) g.b.push_back(i);
        } else if (r.gatekeeper) {
            if (*r.gatekeeper) g.a.push_back(i);
            else others.push_back(i);
        }
    }
    if (comparison == Comparison::gatekeeper_vs_random) {
        Rng rng(seed, "gatekeeper-baseline", delta_index);
        for (std::size_t j : rng.sample_without_replacement(others.size(), g.a.size())) g.b.push_back(others[j]);
        std::sort(g.b.begin(), g.b.end(),
                  [&](std::size_t x, std::size_t y) { return summaries[x].user_id < summaries[y].user_id; });
    }
    return g;
}

namespace detail {
inline std::vector<double> gather_sorted(const std::vector<std::optional<double>>& column,
                                         const std::vector<std::size_t>& users) {
    std::vector<double> v;
    for (std::size_t i : users)
        if (column[i]) v.push_back(*column[i]);
    std::sort(v.begin(), v.end());
    return v;
}
} // namespace detail

/// Welch tests per feature at every delta, reduced to a verdict: "higher"
/// (or "lower") when significant in that direction at >= k evaluable deltas.
inline std::vector<ComparisonReport> compare_groups(const std::vector<polarity::PolaritySummary>& summaries,
                                                    const FeatureTable& features, Comparison comparison,
                                                    const CompareOptions& opt = {}) {
    for (double d : opt.delta_grid) polarity::check_delta(d);
    for (const auto& col : features.columns)
        if (col.size() != summaries.size()) throw ValidationError("compare_groups: feature column length mismatch");
    if (!(opt.alpha > 0.0 && opt.alpha < 1.0)) throw ValidationError("compare_groups: alpha must be in (0,1)");
    if (opt.min_significant < 1) throw ValidationError("compare_groups: k must be >= 1");

    std::vector<GroupSplit> splits;
    for (std::size_t di = 0; di < opt.delta_grid.size(); ++di)
        splits.push_back(split_groups(summaries, opt.delta_grid[di], comparison, opt.seed, di));

    std::vector<ComparisonReport> reports;
    for (std::size_t f = 0; f < features.names.size(); ++f) {
        ComparisonReport rep;
        rep.feature = features.names[f];
        rep.comparison = comparison;
        for (std::size_t di = 0; di < opt.delta_grid.size(); ++di) {
            DeltaEntry e;
            e.delta = opt.delta_grid[di];
            const auto a = detail::gather_sorted(features.columns[f], splits[di].a);
            const auto b = detail::gather_sorted(features.columns[f], splits[di].b);
            e.n_a = a.size();
            e.n_b = b.size();
            if (a.size() >= 2 && b.size() >= 2) {
                e.evaluable = true;
                e.mean_a = mean(a);
                e.mean_b = mean(b);
                e.test = welch_t(a, b);
                e.direction = e.test.t > 0 ? 1 : (e.test.t < 0 ? -1 : 0);
                e.significant = e.test.p_value < opt.alpha && e.direction != 0;
                ++rep.evaluable_count;
                if (e.significant && e.direction > 0) ++rep.higher_count;
                if (e.significant && e.direction < 0) ++rep.lower_count;
            }
            rep.entries.push_back(e);
        }
        if (rep.higher_count >= opt.min_significant && rep.higher_count > rep.lower_count)
            rep.verdict = Verdict::higher;
        else if (rep.lower_count >= opt.min_significant && rep.lower_count > rep.higher_count)
            rep.verdict = Verdict::lower;
        reports.push_back(std::move(rep));
    }
    return reports;
}

/// Summary table: one row per feature with the verdict and its counts.
inline std::string export_comparison_table(const std::vector<ComparisonReport>& reports,
                                           std::string_view header = {}) {
    std::string out(header);
    out += "feature,comparison,verdict,higher_count,lower_count,evaluable_count\n";
    for (const auto& r : reports)
        out += r.feature + "," + to_string(r.comparison) + "," + to_string(r.verdict) + "," +
               std::to_string(r.higher_count) + "," + std::to_string(r.lower_count) + "," +
               std::to_string(r.evaluable_count) + "\n";
    return out;
}

/// Per-delta detail rows behind the summary table.
inline std::string export_comparison_details(const std::vector<ComparisonReport>& reports,
                                             std::string_view header = {}) {
    std::string out(header);
    out += "feature,comparison,delta,evaluable,n_a,n_b,mean_a,mean_b,t,df,p_value,direction,significant\n";
    for (const auto& r : reports)
        for (const auto& e : r.entries) {
            out += r.feature + "," + to_string(r.comparison) + "," + format_double(e.delta) + "," +
                   (e.evaluable ? "true" : "false") + "," + std::to_string(e.n_a) + "," + std::to_string(e.n_b);
            if (e.evaluable)
                out += "," + format_double(e.mean_a) + "," + format_double(e.mean_b) + "," +
                       format_double(e.test.t) + "," + format_double(e.test.df) + "," +
                       format_double(e.test.p_value) + "," + std::to_string(e.direction) + "," +
                       (e.significant ? "true" : "false");
            else
                out += ",NA,NA,NA,NA,NA,NA,false";
            out += "\n";
        }
    return out;
}

// ---------------------------------------------------------------------------
// Beanplot densities

/// Linear-interpolation quantile (the common "type 7" definition) of sorted data.
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

/// 0.9 * min(sd, IQR/1.34) * n^(-1/5), falling back to sd when the IQR is 0.
inline double silverman_bandwidth(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const double sd = std::sqrt(sample_variance(values));
    const double iqr = quantile_sorted(values, 0.75) - quantile_sorted(values, 0.25);
    double spread = std::min(sd, iqr / 1.34);
    if (spread <= 0.0) spread = sd;
    return 0.9 * spread * std::pow(static_cast<double>(values.size()), -0.2);
}

struct BeanplotData {
    std::string label;
    std::vector<double> values;
    std::vector<double> grid;    // abscissae
    std::vector<double> density; // ordinates
    double mean = 0.0;
    double bandwidth = 0.0;
    /// All values equal: no density grid is produced.
    bool point_mass = false;
};

inline constexpr std::size_t kBeanplotGridPoints = 512;

/// Gaussian KDE on a 512-point grid over [min - 3h, max + 3h]. The density is
/// rescaled so its trapezoidal integral over the grid is exactly 1 (the
/// Gaussian tails beyond 3h carry ~0.3% of the mass).
inline BeanplotData beanplot(std::string label, std::vector<double> values) {
    if (values.size() < 2) throw ValidationError("beanplot: group " + label + " needs at least 2 values");
    BeanplotData out;
    out.label = std::move(label);
    std::sort(values.begin(), values.end());
    out.values = values;
    out.mean = mean(values);
    if (values.front() == values.back()) {
        out.point_mass = true;
        return out;
    }
    const double h = silverman_bandwidth(values);
    out.bandwidth = h;
    const double lo = values.front() - 3.0 * h;
    const double hi = values.back() + 3.0 * h;
    const double step = (hi - lo) / static_cast<double>(kBeanplotGridPoints - 1);
    const double norm = 1.0 / (static_cast<double>(values.size()) * h * std::sqrt(2.0 * std::numbers::pi));
    out.grid.resize(kBeanplotGridPoints);
    out.density.resize(kBeanplotGridPoints);
    for (std::size_t i = 0; i < kBeanplotGridPoints; ++i) {
        const double x = lo + step * static_cast<double>(i);
        double s = 0.0;
        for (double v : values) {
            const double z = (x - v) / h;
            s += std::exp(-0.5 * z * z);
        }
        out.grid[i] = x;
        out.density[i] = s * norm;
    }
    double area = 0.0;
    for (std::size_t i = 1; i < kBeanplotGridPoints; ++i) area += 0.5 * (out.density[i] + out.density[i - 1]) * step;
    for (auto& d : out.density) d /= area;
    return out;
}

inline double trapezoid_area(const BeanplotData& b) {
    double area = 0.0;
    for (std::size_t i = 1; i < b.grid.size(); ++i)
        area += 0.5 * (b.density[i] + b.density[i - 1]) * (b.grid[i] - b.grid[i - 1]);
    return area;
}

inline nlohmann::ordered_json beanplot_json(const BeanplotData& b) {
    nlohmann::ordered_json j;
    j["label"] = b.label;
    j["n"] = b.values.size();
    j["mean"] = b.mean;
    j["point_mass"] = b.point_mass;
    j["bandwidth"] = b.bandwidth;
    j["values"] = b.values;
    j["grid"] = b.grid;
    j["density"] = b.density;
    return j;
}

// ---------------------------------------------------------------------------
// Scatter, variance profile, bimodality

enum class PolaritySign { negative, positive, unknown };

inline const char* to_string(PolaritySign s) {
    switch (s) {
    case PolaritySign::negative: return "negative";
    case PolaritySign::positive: return "positive";
    case PolaritySign::unknown: return "unknown";
    }
    return "?";
}

struct ScatterRow {
    std::string user_id;
    double p = 0.0;
    double c = 0.0;
    PolaritySign sign = PolaritySign::unknown;
};

/// Users with both p and c defined. A score of exactly 0 carries no sign.
inline std::vector<ScatterRow> scatter(const std::vector<polarity::PolaritySummary>& summaries) {
    std::vector<ScatterRow> rows;
    for (const auto& s : summaries) {
        if (!s.p || !s.c) continue;
        ScatterRow r{s.user_id, *s.p, *s.c, PolaritySign::unknown};
        if (s.user_polarity) {
            if (*s.user_polarity < 0) r.sign = PolaritySign::negative;
            else if (*s.user_polarity > 0) r.sign = PolaritySign::positive;
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

inline std::string export_scatter(const std::vector<ScatterRow>& rows, std::string_view header = {}) {
    std::string out(header);
    out += "user_id,p,c,user_polarity_sign\n";
    for (const auto& r : rows)
        out += r.user_id + "," + format_double(r.p) + "," + format_double(r.c) + "," + to_string(r.sign) + "\n";
    return out;
}

/// r(p, c) over users with both defined.
inline std::optional<double> polarity_correlation(const std::vector<polarity::PolaritySummary>& summaries) {
    std::vector<double> p, c;
    for (const auto& s : summaries)
        if (s.p && s.c) {
            p.push_back(*s.p);
            c.push_back(*s.c);
        }
    if (p.size() < 2) return std::nullopt;
    return pearson(p, c);
}

struct VarianceBin {
    double lo = 0.0, hi = 0.0;
    std::size_t count = 0;
    std::optional<double> mean_variance;
};

/// Mean variance per polarity bin over [0,1]: production variance against
/// p, or consumption variance against c.
inline std::vector<VarianceBin> variance_profile(const std::vector<polarity::PolaritySummary>& summaries,
                                                 bool production, std::size_t bins = 10) {
    std::vector<VarianceBin> out(bins);
    std::vector<double> sums(bins, 0.0);
    for (std::size_t i = 0; i < bins; ++i) {
        out[i].lo = static_cast<double>(i) / static_cast<double>(bins);
        out[i].hi = static_cast<double>(i + 1) / static_cast<double>(bins);
    }
    for (const auto& s : summaries) {
        const auto& x = production ? s.p : s.c;
        const auto& v = production ? s.var_p : s.var_c;
        if (!x || !v) continue;
        auto b = static_cast<std::size_t>(*x * static_cast<double>(bins));
        if (b >= bins) b = bins - 1;
        ++out[b].count;
        sums[b] += *v;
    }
    for (std::size_t i = 0; i < bins; ++i)
        if (out[i].count) out[i].mean_variance = sums[i] / static_cast<double>(out[i].count);
    return out;
}

inline std::vector<std::size_t> histogram(std::span<const double> values, std::size_t bins = 20) {
    std::vector<std::size_t> h(bins, 0);
    for (double x : values) {
        auto b = static_cast<std::size_t>(std::clamp(x, 0.0, 1.0) * static_cast<double>(bins));
        if (b >= bins) b = bins - 1;
        ++h[b];
    }
    return h;
}

/// Sarle's bimodality coefficient (g^2 + 1) / (kappa + 3(n-1)^2 / ((n-2)(n-3)))
/// with sample skewness g and excess kurtosis kappa; values above 5/9
/// suggest bimodality.
inline std::optional<double> bimodality_coefficient(std::span<const double> xs) {
    const double n = static_cast<double>(xs.size());
    if (xs.size() < 4) return std::nullopt;
    const double m = mean(xs);
    double m2 = 0, m3 = 0, m4 = 0;
    for (double x : xs) {
        const double d = x - m;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (m2 == 0.0) return std::nullopt;
    const double g = std::sqrt(n * (n - 1)) / (n - 2) * m3 / std::pow(m2, 1.5);
    const double k = (n - 1) / ((n - 2) * (n - 3)) * ((n + 1) * (m4 / (m2 * m2) - 3.0) + 6.0);
    return (g * g + 1.0) / (k + 3.0 * (n - 1) * (n - 1) / ((n - 2) * (n - 3)));
}

} // namespace echograph::stats
