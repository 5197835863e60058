#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "echograph/error.hpp"
#include "echograph/format.hpp"

namespace echograph {

using NodeIndex = std::uint32_t;

/// Immutable directed follow graph. An edge u -> v means u follows v.
///
/// Nodes are densely indexed in lexicographic order of their ids, so the
/// index assignment depends only on the node set. Both adjacency views are
/// CSR arrays with ascending neighbor lists and contain no self-loops or
/// duplicate edges.
class FollowGraph {
public:
    FollowGraph() : out_offsets_{0}, in_offsets_{0} {}

    std::size_t node_count() const { return ids_.size(); }
    std::size_t edge_count() const { return out_targets_.size(); }

    /// Followees of u.
    std::span<const NodeIndex> out_neighbors(NodeIndex u) const {
        return {out_targets_.data() + out_offsets_[u], out_targets_.data() + out_offsets_[u + 1]};
    }
    /// Followers of u.
    std::span<const NodeIndex> in_neighbors(NodeIndex u) const {
        return {in_sources_.data() + in_offsets_[u], in_sources_.data() + in_offsets_[u + 1]};
    }
    std::size_t out_degree(NodeIndex u) const { return out_offsets_[u + 1] - out_offsets_[u]; }
    std::size_t in_degree(NodeIndex u) const { return in_offsets_[u + 1] - in_offsets_[u]; }

    const std::string& id(NodeIndex u) const { return ids_[u]; }
    const std::vector<std::string>& ids() const { return ids_; }

    std::optional<NodeIndex> index_of(std::string_view id) const {
        auto it = index_.find(std::string(id));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    bool contains(std::string_view id) const { return index_of(id).has_value(); }

    /// Sorted union of followers and followees (the undirected projection).
    std::vector<NodeIndex> undirected_neighbors(NodeIndex u) const {
        auto out = out_neighbors(u);
        auto in = in_neighbors(u);
        std::vector<NodeIndex> merged;
        merged.reserve(out.size() + in.size());
        std::set_union(out.begin(), out.end(), in.begin(), in.end(), std::back_inserter(merged));
        return merged;
    }

    /// Edges in (follower index, followee index) order.
    std::vector<std::pair<NodeIndex, NodeIndex>> edges() const {
        std::vector<std::pair<NodeIndex, NodeIndex>> out;
        out.reserve(edge_count());
        for (NodeIndex u = 0; u < node_count(); ++u)
            for (NodeIndex v : out_neighbors(u)) out.emplace_back(u, v);
        return out;
    }

    /// Subgraph on the given ids (unknown ids are ignored).
    FollowGraph induced(const std::unordered_set<std::string>& keep) const;

    bool operator==(const FollowGraph& other) const {
        return ids_ == other.ids_ && out_offsets_ == other.out_offsets_ &&
               out_targets_ == other.out_targets_ && in_offsets_ == other.in_offsets_ &&
               in_sources_ == other.in_sources_;
    }

private:
    friend class GraphBuilder;

    std::vector<std::string> ids_;
    std::unordered_map<std::string, NodeIndex> index_;
    std::vector<std::size_t> out_offsets_;
    std::vector<NodeIndex> out_targets_;
    std::vector<std::size_t> in_offsets_;
    std::vector<NodeIndex> in_sources_;
};

/// Accumulates (follower, followee) pairs and freezes them into a FollowGraph.
class GraphBuilder {
public:
    /// Returns false when the edge was a self-loop and got dropped.
    bool add_edge(std::string_view follower, std::string_view followee) {
        if (follower == followee) {
            ++self_loops_;
            add_node(follower);
            return false;
        }
        edges_.emplace_back(intern(follower), intern(followee));
        return true;
    }

    /// Registers a node that may have no edges.
    void add_node(std::string_view id) { intern(id); }

    std::size_t self_loops_dropped() const { return self_loops_; }

    FollowGraph build() const {
        const std::size_t n = names_.size();
        std::vector<NodeIndex> order(n);
        for (NodeIndex i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](NodeIndex a, NodeIndex b) { return names_[a] < names_[b]; });
        std::vector<NodeIndex> remap(n);
        FollowGraph g;
        g.ids_.resize(n);
        for (NodeIndex rank = 0; rank < n; ++rank) {
            remap[order[rank]] = rank;
            g.ids_[rank] = names_[order[rank]];
            g.index_.emplace(g.ids_[rank], rank);
        }

        std::vector<std::pair<NodeIndex, NodeIndex>> edges;
        edges.reserve(edges_.size());
        for (auto [u, v] : edges_) edges.emplace_back(remap[u], remap[v]);
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

        g.out_offsets_.assign(n + 1, 0);
        g.in_offsets_.assign(n + 1, 0);
        for (auto [u, v] : edges) {
            ++g.out_offsets_[u + 1];
            ++g.in_offsets_[v + 1];
        }
        for (std::size_t i = 0; i < n; ++i) {
            g.out_offsets_[i + 1] += g.out_offsets_[i];
            g.in_offsets_[i + 1] += g.in_offsets_[i];
        }
        g.out_targets_.resize(edges.size());
        g.in_sources_.resize(edges.size());
        std::vector<std::size_t> in_cursor(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
        std::size_t k = 0;
        // Edges are sorted by (u, v): out lists come out ascending, and since
        // u increases monotonically each in list is filled in ascending order too.
        for (auto [u, v] : edges) {
            g.out_targets_[k++] = v;
            g.in_sources_[in_cursor[v]++] = u;
        }
        return g;
    }

private:
    NodeIndex intern(std::string_view id) {
        auto [it, inserted] = lookup_.try_emplace(std::string(id), static_cast<NodeIndex>(names_.size()));
        if (inserted) names_.emplace_back(id);
        return it->second;
    }

    std::vector<std::string> names_;
    std::unordered_map<std::string, NodeIndex> lookup_;
    std::vector<std::pair<NodeIndex, NodeIndex>> edges_;
    std::size_t self_loops_ = 0;
};

inline FollowGraph FollowGraph::induced(const std::unordered_set<std::string>& keep) const {
    GraphBuilder b;
    for (NodeIndex u = 0; u < node_count(); ++u) {
        if (!keep.count(ids_[u])) continue;
        b.add_node(ids_[u]);
        for (NodeIndex v : out_neighbors(u))
            if (keep.count(ids_[v])) b.add_edge(ids_[u], ids_[v]);
    }
    return b.build();
}

struct EdgeListStats {
    std::size_t records = 0;
    std::size_t self_loops_dropped = 0;
    std::size_t duplicates_collapsed = 0;
};

/// Reads "follower<TAB>followee" lines; '#' comments and blank lines skipped.
inline FollowGraph read_edge_list(std::istream& in, const std::string& source = "edges",
                                  EdgeListStats* stats = nullptr,
                                  const std::vector<std::string>& extra_nodes = {}) {
    GraphBuilder b;
    for (const auto& id : extra_nodes) b.add_node(id);
    std::string line;
    std::size_t lineno = 0;
    std::size_t records = 0;
    std::size_t kept = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (is_skippable_line(line)) continue;
        auto fields = split(line, '\t');
        if (fields.size() != 2) throw ParseError(source, lineno, "expected follower<TAB>followee");
        auto follower = trim(fields[0]);
        auto followee = trim(fields[1]);
        if (follower.empty() || followee.empty()) throw ParseError(source, lineno, "empty node id");
        ++records;
        if (b.add_edge(follower, followee)) ++kept;
    }
    FollowGraph g = b.build();
    if (stats) {
        stats->records = records;
        stats->self_loops_dropped = b.self_loops_dropped();
        stats->duplicates_collapsed = kept - g.edge_count();
    }
    return g;
}

/// Canonical edge list: edges sorted by (follower index, followee index).
inline std::string write_edge_list(const FollowGraph& g, std::string_view header = {}) {
    std::string out(header);
    for (auto [u, v] : g.edges()) {
        out += g.id(u);
        out += '\t';
        out += g.id(v);
        out += '\n';
    }
    return out;
}

} // namespace echograph
