#pragma once

#include <vector>

#include "netabc/contagion.hpp"

namespace netabc {

struct ObservationWindow {
    int t0 = 0;
    int t_max = 0;

    void validate() const;
    std::size_t steps() const { return static_cast<std::size_t>(t_max - t0 + 1); }
    bool operator==(const ObservationWindow&) const = default;
};

/// Summary statistics of one epidemic over an observation window. Element k
/// of every sequence refers to step t0 + k. `e`, `ce` and `H` stay empty for
/// simple contagion.
struct SummaryBundle {
    ContagionKind kind = ContagionKind::simple;
    ObservationWindow window;
    node_t node_count = 0;
    std::vector<double> s;    // infected proportion
    std::vector<double> e;    // exposed proportion
    std::vector<double> ce;   // first-time-exposed proportion
    std::vector<std::vector<node_t>> G;   // infected node sets
    std::vector<std::vector<node_t>> H;   // exposed node sets
};

SummaryBundle summarize_simple(const EpidemicTrace& trace, const ObservationWindow& window, const Network& net);
SummaryBundle summarize_complex(const EpidemicTrace& trace, const ObservationWindow& window, const Network& net);
SummaryBundle summarize(const EpidemicTrace& trace, const ObservationWindow& window, const Network& net);

/// Same statistics computed straight from simulation event times.
SummaryBundle summarize(const EpidemicEvents& events, const ObservationWindow& window);

/// Slices a trace to [t0, T]. Nodes exposed before t0 are kept in
/// `prior_exposed` so first-exposure statistics stay comparable with those
/// of a full simulated trace.
EpidemicTrace observe(const EpidemicTrace& trace, const ObservationWindow& window);

} // namespace netabc
