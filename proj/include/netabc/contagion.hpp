#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "netabc/graph.hpp"
#include "netabc/rng.hpp"

namespace netabc {

enum class ContagionKind { simple, complex };

const char* to_string(ContagionKind kind);
ContagionKind parse_contagion_kind(std::string_view name);

struct SimpleParams {
    double theta = 0.0;
    node_t seed_node = 0;
};

struct ComplexParams {
    double beta = 0.0;
    double gamma = 0.0;
    node_t seed_node = 0;
};

/// Modified logistic sigmoid mapping infected-neighbor counts to per-exposure
/// infection probabilities.
struct SigmoidConfig {
    double eps_low = 0.001;
    double eps_high = 0.25;
    double g = 1.0;

    void validate() const;
};

/// Element k-1 counts exposures received while the node had exactly k
/// infected neighbors.
using ExposureSummary = std::vector<std::uint32_t>;

struct NodeExposures {
    node_t node;
    ExposureSummary counts;
};

struct TraceStep {
    int t = 0;
    std::vector<node_t> infected;   // sorted
    std::vector<node_t> exposed;    // sorted, complex only
    std::vector<NodeExposures> exposures;   // one entry per exposed node, complex only
};

/// Per-step node-state record. A full simulation covers t = 0..t_max; an
/// observed dataset may start later, in which case `prior_exposed` lists the
/// nodes exposed at some step before the first recorded one.
struct EpidemicTrace {
    ContagionKind kind = ContagionKind::simple;
    node_t node_count = 0;
    std::vector<TraceStep> steps;
    std::vector<node_t> prior_exposed;
    // Complex contagion whose seed wave was empty (round(gamma * F) == 0).
    bool seed_only = false;

    int first_step() const { return steps.empty() ? 0 : steps.front().t; }
    int last_step() const { return steps.empty() ? -1 : steps.back().t; }
    const TraceStep& at(int t) const;
};

/// Compact outcome of one simulation: the step each node was infected and
/// first exposed. States are absorbing (S -> E -> I), so these two times
/// determine every per-step set.
struct EpidemicEvents {
    static constexpr int never = std::numeric_limits<int>::max();

    ContagionKind kind = ContagionKind::simple;
    int t_max = 0;
    std::vector<int> infection_time;
    std::vector<int> exposure_time;   // complex only; `never` if not exposed
    bool seed_only = false;

    node_t node_count() const { return static_cast<node_t>(infection_time.size()); }
    bool infected_at(node_t i, int t) const { return infection_time[i] <= t; }
    // Exposed in the end-of-step snapshot at t; nodes exposed and infected
    // within the same step are never observed as exposed.
    bool exposed_at(node_t i, int t) const
    {
        return exposure_time[i] <= t && t < infection_time[i];
    }
};

/// Exposure summaries of exposed nodes after each step, t = 0..t_max.
using ExposureLog = std::vector<std::vector<NodeExposures>>;

/// Per-exposure infection probability with k infected neighbors out of F.
double p_infect(int k, int degree, double gamma, const SigmoidConfig& cfg);

/// Probability that a node with exposure history `summary` was infected at
/// the last exposure and not before.
double infection_at_last_exposure_prob(std::span<const std::uint32_t> summary, int degree, double gamma,
                                       const SigmoidConfig& cfg);

/// Seed node plus round(gamma * F_seed) distinct uniformly chosen neighbors.
/// Returned sorted.
std::vector<node_t> seed_complex(const Network& net, node_t seed_node, double gamma, Rng& rng);

EpidemicEvents simulate_simple_events(const Network& net, const SimpleParams& params, int t_max, Rng& rng);

EpidemicEvents simulate_complex_events(const Network& net, const ComplexParams& params, const SigmoidConfig& cfg,
                                       int t_max, Rng& rng, ExposureLog* log = nullptr);

EpidemicTrace simulate_simple(const Network& net, const SimpleParams& params, int t_max, Rng& rng);

EpidemicTrace simulate_complex(const Network& net, const ComplexParams& params, const SigmoidConfig& cfg, int t_max,
                               Rng& rng);

/// Expands event times (and an optional exposure log) to per-step sets.
EpidemicTrace to_trace(const EpidemicEvents& events, const ExposureLog* log = nullptr);

} // namespace netabc
