#pragma once

// Independent reference implementations used to check the library. They are
// deliberately naive: dense matrices, exhaustive enumeration, long double
// accumulation, direct numeric integration.

#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "echograph/graph.hpp"

namespace oracle {

using Edge = std::pair<int, int>;

struct RandomGraph {
    int n = 0;
    std::vector<Edge> edges; // may contain duplicates and self-loops
};

inline std::string node_name(int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "n%04d", i);
    return buf;
}

inline RandomGraph random_graph(std::mt19937_64& gen, int max_nodes, double max_density) {
    RandomGraph g;
    g.n = std::uniform_int_distribution<int>(1, max_nodes)(gen);
    const double density = std::uniform_real_distribution<double>(0.0, max_density)(gen);
    std::bernoulli_distribution keep(density);
    std::bernoulli_distribution dup(0.05);
    for (int u = 0; u < g.n; ++u)
        for (int v = 0; v < g.n; ++v)
            if (keep(gen)) {
                g.edges.emplace_back(u, v);
                if (dup(gen)) g.edges.emplace_back(u, v);
            }
    return g;
}

inline echograph::FollowGraph build(const RandomGraph& r) {
    echograph::GraphBuilder b;
    for (int i = 0; i < r.n; ++i) b.add_node(node_name(i));
    for (auto [u, v] : r.edges) b.add_edge(node_name(u), node_name(v));
    return b.build();
}

/// Dense adjacency without self-loops or multi-edges; node_name order matches
/// the library's lexicographic node order.
inline std::vector<std::vector<char>> dense_adjacency(const RandomGraph& r) {
    std::vector<std::vector<char>> a(r.n, std::vector<char>(r.n, 0));
    for (auto [u, v] : r.edges)
        if (u != v) a[u][v] = 1;
    return a;
}

/// x_{t+1} = (1-d)/n + d * (M x_t + dangling/n), iterated to machine precision.
inline std::vector<double> dense_pagerank(const RandomGraph& r, double d = 0.85) {
    const int n = r.n;
    const auto a = dense_adjacency(r);
    std::vector<long double> x(n, 1.0L / n), next(n);
    std::vector<int> outdeg(n, 0);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) outdeg[u] += a[u][v];
    for (int it = 0; it < 100000; ++it) {
        long double dangling = 0;
        for (int u = 0; u < n; ++u)
            if (outdeg[u] == 0) dangling += x[u];
        for (int v = 0; v < n; ++v) {
            long double in = 0;
            for (int u = 0; u < n; ++u)
                if (a[u][v]) in += x[u] / outdeg[u];
            next[v] = (1.0L - d) / n + d * (in + dangling / n);
        }
        long double change = 0;
        for (int v = 0; v < n; ++v) change += std::fabs(next[v] - x[v]);
        x.swap(next);
        if (change < 1e-15L) break;
    }
    return {x.begin(), x.end()};
}

/// Closed pairs over all pairs of undirected neighbours, by enumeration.
inline std::vector<double> brute_clustering(const RandomGraph& r) {
    const int n = r.n;
    const auto a = dense_adjacency(r);
    std::vector<double> cc(n, 0.0);
    auto linked = [&](int i, int j) { return a[i][j] || a[j][i]; };
    for (int u = 0; u < n; ++u) {
        std::vector<int> nb;
        for (int v = 0; v < n; ++v)
            if (v != u && linked(u, v)) nb.push_back(v);
        const auto d = static_cast<long long>(nb.size());
        if (d < 2) continue;
        long long closed = 0;
        for (std::size_t i = 0; i < nb.size(); ++i)
            for (std::size_t j = i + 1; j < nb.size(); ++j)
                if (linked(nb[i], nb[j])) ++closed;
        cc[u] = 2.0 * static_cast<double>(closed) / static_cast<double>(d * (d - 1));
    }
    return cc;
}

struct Welch {
    double t, df;
};

inline Welch brute_welch(const std::vector<double>& a, const std::vector<double>& b) {
    auto moments = [](const std::vector<double>& x, long double& m, long double& v) {
        long double s = 0;
        for (double xi : x) s += xi;
        m = s / x.size();
        long double ss = 0;
        for (double xi : x) ss += (xi - m) * (xi - m);
        v = ss / (x.size() - 1);
    };
    long double ma, va, mb, vb;
    moments(a, ma, va);
    moments(b, mb, vb);
    const long double qa = va / a.size(), qb = vb / b.size();
    const long double t = (ma - mb) / std::sqrt(qa + qb);
    const long double df = (qa + qb) * (qa + qb) / (qa * qa / (a.size() - 1) + qb * qb / (b.size() - 1));
    return {static_cast<double>(t), static_cast<double>(df)};
}

inline double brute_pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<long double>(x.size());
    long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const long double mx = sx / n, my = sy / n;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

/// Two-sided Student-t tail probability by composite Simpson integration of
/// the density over [0, |t|].
inline double simpson_t_two_sided(double t, double df, int panels = 200000) {
    const double logc = std::lgamma((df + 1) / 2) - std::lgamma(df / 2) - 0.5 * std::log(df * M_PI);
    auto f = [&](double x) { return std::exp(logc - (df + 1) / 2 * std::log1p(x * x / df)); };
    const double b = std::fabs(t);
    if (b == 0.0) return 1.0;
    const double h = b / panels;
    long double s = f(0) + f(b);
    for (int i = 1; i < panels; ++i) s += (i % 2 ? 4 : 2) * f(i * h);
    const double central = static_cast<double>(s * h / 3);
    return 1.0 - 2.0 * central;
}

} // namespace oracle
