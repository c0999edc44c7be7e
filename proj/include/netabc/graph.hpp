#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "netabc/rng.hpp"

namespace netabc {

using node_t = std::int32_t;
using Edge = std::pair<node_t, node_t>;

/// Immutable undirected simple graph in compressed adjacency form.
/// Neighbor lists are sorted; node ids are dense 0..node_count()-1.
class Network {
public:
    Network() = default;

    /// Builds from an edge list. Self-loops and duplicate edges are rejected
    /// with InvalidParameter; use load_edge_list() for tolerant parsing.
    static Network from_edges(node_t node_count, std::span<const Edge> edges);

    node_t node_count() const { return static_cast<node_t>(offsets_.empty() ? 0 : offsets_.size() - 1); }
    std::size_t edge_count() const { return targets_.size() / 2; }

    std::span<const node_t> neighbors(node_t i) const;
    std::size_t degree(node_t i) const;

    bool has_edge(node_t i, node_t j) const;

    /// Edges with u < v, ascending.
    std::vector<Edge> edges() const;

    // Unchecked accessors for simulation inner loops.
    std::span<const node_t> adj(node_t i) const
    {
        return {targets_.data() + offsets_[i], targets_.data() + offsets_[i + 1]};
    }
    std::size_t deg(node_t i) const { return offsets_[i + 1] - offsets_[i]; }

    bool valid(node_t i) const { return i >= 0 && i < node_count(); }

private:
    std::vector<std::size_t> offsets_;
    std::vector<node_t> targets_;
};

/// All-pairs hop distances. Pairs in different components hold `unreachable`.
class PathTable {
public:
    using hops_t = std::uint16_t;
    static constexpr hops_t unreachable = std::numeric_limits<hops_t>::max();

    PathTable() = default;
    PathTable(node_t n, std::vector<hops_t> table, int rho_max)
        : n_(n), table_(std::move(table)), rho_max_(rho_max) {}

    node_t node_count() const { return n_; }
    int rho_max() const { return rho_max_; }

    hops_t raw(node_t i, node_t j) const { return table_[static_cast<std::size_t>(i) * n_ + j]; }
    bool reachable(node_t i, node_t j) const { return raw(i, j) != unreachable; }

    /// Hop distance; throws UnreachableError for disconnected pairs.
    int hops(node_t i, node_t j) const;

    std::span<const hops_t> row(node_t i) const
    {
        return {table_.data() + static_cast<std::size_t>(i) * n_, static_cast<std::size_t>(n_)};
    }

private:
    node_t n_ = 0;
    std::vector<hops_t> table_;
    int rho_max_ = 0;
};

/// BFS from every node.
PathTable all_pairs_shortest_paths(const Network& net);

/// Barabasi-Albert growth from m isolated seed nodes with linear
/// preferential attachment; m*(n-m) edges.
Network generate_ba(node_t n, int m, Rng& rng);

/// G(n, p): every dyad carries an independent Bernoulli(p) edge.
Network generate_er(node_t n, double p, Rng& rng);

struct LoadedNetwork {
    Network network;
    std::vector<std::int64_t> labels;   // dense id -> original label
    std::size_t dropped_self_loops = 0;
    std::size_t dropped_duplicates = 0;

    std::size_t dropped() const { return dropped_self_loops + dropped_duplicates; }
};

/// Parses "u v" lines; '#' lines and blank lines are skipped. Labels are
/// compacted to dense ids in order of first appearance.
LoadedNetwork load_edge_list(std::istream& in);
LoadedNetwork load_edge_list_file(const std::string& path);

/// Writes one "u v" line per edge (u < v). With `labels`, ids are mapped back.
void write_edge_list(std::ostream& out, const Network& net, std::span<const std::int64_t> labels = {});

/// Number of connected components and the size of the largest one.
struct ComponentInfo {
    std::size_t components = 0;
    std::size_t largest = 0;
};
ComponentInfo components(const Network& net);

} // namespace netabc
