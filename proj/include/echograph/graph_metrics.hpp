#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "echograph/error.hpp"
#include "echograph/format.hpp"
#include "echograph/graph.hpp"
#include "echograph/parallel.hpp"

namespace echograph::metrics {

/// One value per node index.
struct NodeMetricVector {
    std::string name;
    std::vector<double> values;
};

struct PageRankOptions {
    double damping = 0.85;
    double tolerance = 1e-10; // L1 change between iterates
    int max_iterations = 200;
    unsigned threads = 1;
};

struct PageRankResult {
    NodeMetricVector scores;
    int iterations = 0;
    bool converged = false;
    double last_delta = 0.0;
};

/// Power iteration with rank flowing along follow edges (follower -> followee).
/// Nodes without followees spread their mass uniformly. Each iterate is
/// computed by pulling over in-neighbors, so per-node sums have a fixed
/// order and the result is independent of the thread count.
inline PageRankResult pagerank(const FollowGraph& g, const PageRankOptions& opt = {}) {
    const std::size_t n = g.node_count();
    if (n == 0) throw ValidationError("pagerank: empty graph");
    if (!(opt.damping > 0.0 && opt.damping < 1.0)) throw ValidationError("pagerank: damping must be in (0,1)");
    if (!(opt.tolerance > 0.0)) throw ValidationError("pagerank: tolerance must be positive");
    if (opt.max_iterations < 1) throw ValidationError("pagerank: max_iterations must be >= 1");

    const double nd = static_cast<double>(n);
    std::vector<double> rank(n, 1.0 / nd), next(n, 0.0), share(n, 0.0);
    PageRankResult result;
    result.scores.name = "pagerank";

    for (int iter = 1; iter <= opt.max_iterations; ++iter) {
        double dangling = 0.0;
        for (NodeIndex u = 0; u < n; ++u) {
            const auto out = g.out_degree(u);
            if (out == 0) {
                dangling += rank[u];
                share[u] = 0.0;
            } else {
                share[u] = rank[u] / static_cast<double>(out);
            }
        }
        const double base = (1.0 - opt.damping) / nd + opt.damping * dangling / nd;
        parallel_for(n, opt.threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t v = begin; v < end; ++v) {
                double incoming = 0.0;
                for (NodeIndex u : g.in_neighbors(static_cast<NodeIndex>(v))) incoming += share[u];
                next[v] = base + opt.damping * incoming;
            }
        });
        double total = 0.0;
        for (double x : next) total += x;
        double delta = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            next[v] /= total;
            delta += std::fabs(next[v] - rank[v]);
        }
        rank.swap(next);
        result.iterations = iter;
        result.last_delta = delta;
        if (delta < opt.tolerance) {
            result.converged = true;
            break;
        }
    }
    result.scores.values = std::move(rank);
    return result;
}

/// Number of triangles through u in the undirected projection, counted
/// with sorted-list intersections.
inline std::size_t triangles_at(const std::vector<std::vector<NodeIndex>>& adj, NodeIndex u) {
    std::size_t closed = 0;
    const auto& nu = adj[u];
    for (NodeIndex v : nu) {
        const auto& nv = adj[v];
        auto a = nu.begin();
        auto b = nv.begin();
        while (a != nu.end() && b != nv.end()) {
            if (*a < *b)
                ++a;
            else if (*b < *a)
                ++b;
            else {
                ++closed;
                ++a;
                ++b;
            }
        }
    }
    return closed / 2; // each triangle {u,v,w} is seen from v and from w
}

inline std::vector<std::vector<NodeIndex>> undirected_adjacency(const FollowGraph& g) {
    std::vector<std::vector<NodeIndex>> adj(g.node_count());
    for (NodeIndex u = 0; u < g.node_count(); ++u) adj[u] = g.undirected_neighbors(u);
    return adj;
}

/// cc(u) = 2T / (d(d-1)) on the undirected projection; 0 when d < 2.
inline NodeMetricVector clustering_coefficient(const FollowGraph& g, unsigned threads = 1) {
    const auto adj = undirected_adjacency(g);
    NodeMetricVector cc{"clustering_coefficient", std::vector<double>(g.node_count(), 0.0)};
    parallel_for(g.node_count(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t u = begin; u < end; ++u) {
            const double d = static_cast<double>(adj[u].size());
            if (adj[u].size() < 2) continue;
            const double t = static_cast<double>(triangles_at(adj, static_cast<NodeIndex>(u)));
            cc.values[u] = 2.0 * t / (d * (d - 1.0));
        }
    });
    return cc;
}

struct DegreeVectors {
    NodeMetricVector in{"in_degree", {}};
    NodeMetricVector out{"out_degree", {}};
    /// Distinct neighbors in either direction.
    NodeMetricVector undirected{"degree", {}};
};

inline DegreeVectors degrees(const FollowGraph& g) {
    DegreeVectors d;
    const auto n = g.node_count();
    d.in.values.resize(n);
    d.out.values.resize(n);
    d.undirected.values.resize(n);
    for (NodeIndex u = 0; u < n; ++u) {
        d.in.values[u] = static_cast<double>(g.in_degree(u));
        d.out.values[u] = static_cast<double>(g.out_degree(u));
        auto out = g.out_neighbors(u);
        auto in = g.in_neighbors(u);
        std::size_t common = 0;
        auto a = out.begin();
        auto b = in.begin();
        while (a != out.end() && b != in.end()) {
            if (*a < *b)
                ++a;
            else if (*b < *a)
                ++b;
            else {
                ++common;
                ++a;
                ++b;
            }
        }
        d.undirected.values[u] = static_cast<double>(out.size() + in.size() - common);
    }
    return d;
}

/// "user_id,metric,value" rows, nodes in index order, metrics in argument order.
inline std::string export_metrics(const FollowGraph& g, const std::vector<const NodeMetricVector*>& metrics,
                                  std::string_view header = {}) {
    std::string out(header);
    out += "user_id,metric,value\n";
    for (NodeIndex u = 0; u < g.node_count(); ++u)
        for (const auto* m : metrics) out += g.id(u) + "," + m->name + "," + format_double(m->values[u]) + "\n";
    return out;
}

} // namespace echograph::metrics
