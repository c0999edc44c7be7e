#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "netabc/graph.hpp"
#include "netabc/summaries.hpp"

namespace netabc {

/// How the per-step pairwise hop sums of d_N are combined.
///  - verbatim: raw double sum over both sets.
///  - pair_mean: each step's sum divided by |G1_t| * |G2_t| (experimental).
enum class GraphDistanceMode { verbatim, pair_mean };

const char* to_string(GraphDistanceMode mode);
GraphDistanceMode parse_graph_distance_mode(std::string_view name);

struct DiscrepancyTerm {
    std::string name;
    double value = 0.0;
};

struct Discrepancy {
    double value = 0.0;
    std::vector<DiscrepancyTerm> components;

    double component(std::string_view name) const;
};

double euclid(std::span<const double> a, std::span<const double> b);

/// (1 / (T - t0)) * sum_t sum_{i in G1_t} sum_{j in G2_t} rho(i,j) / rho_max.
/// Throws UnreachableError when a pair spans two components.
double graph_distance(std::span<const std::vector<node_t>> g1, std::span<const std::vector<node_t>> g2,
                      const PathTable& paths, const ObservationWindow& window,
                      GraphDistanceMode mode = GraphDistanceMode::verbatim);

Discrepancy discrepancy_simple(const SummaryBundle& x1, const SummaryBundle& x2, const PathTable& paths,
                               GraphDistanceMode mode = GraphDistanceMode::verbatim);
Discrepancy discrepancy_complex(const SummaryBundle& x1, const SummaryBundle& x2, const PathTable& paths,
                                GraphDistanceMode mode = GraphDistanceMode::verbatim);
Discrepancy discrepancy(const SummaryBundle& x1, const SummaryBundle& x2, const PathTable& paths,
                        GraphDistanceMode mode = GraphDistanceMode::verbatim);

/// Discrepancy against one fixed observed bundle. Per-step hop sums from
/// every node to the observed sets are tabulated once, so each evaluation is
/// linear in the simulated set sizes. Results are identical to discrepancy().
class DiscrepancyTarget {
public:
    DiscrepancyTarget(SummaryBundle observed, const PathTable& paths,
                      GraphDistanceMode mode = GraphDistanceMode::verbatim);

    const SummaryBundle& observed() const { return observed_; }
    const ObservationWindow& window() const { return observed_.window; }
    GraphDistanceMode mode() const { return mode_; }

    Discrepancy evaluate(const SummaryBundle& simulated) const;
    Discrepancy evaluate(const EpidemicEvents& simulated) const;

private:
    struct SetTable {
        // Row t * n + i: hop sum from i to the observed set at step t0 + t,
        // and the number of observed nodes unreachable from i.
        std::vector<std::uint64_t> hop_sum;
        std::vector<std::uint32_t> unreachable;
        std::vector<std::size_t> size;
    };
    SetTable tabulate(const std::vector<std::vector<node_t>>& sets, const PathTable& paths) const;
    double set_distance(const SetTable& table, std::span<const std::vector<node_t>> sets) const;

    SummaryBundle observed_;
    GraphDistanceMode mode_;
    int rho_max_ = 0;
    SetTable infected_;
    SetTable exposed_;
};

} // namespace netabc
