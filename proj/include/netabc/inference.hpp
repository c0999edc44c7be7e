#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netabc/contagion.hpp"
#include "netabc/discrepancy.hpp"
#include "netabc/graph.hpp"
#include "netabc/rng.hpp"
#include "netabc/summaries.hpp"

namespace netabc {

/// Parameter point: (theta) for simple contagion, (beta, gamma) for complex,
/// plus the seed node.
struct Phi {
    std::vector<double> continuous;
    node_t seed_node = 0;

    bool operator==(const Phi&) const = default;
};

struct PriorSpec {
    std::vector<node_t> seed_support;   // sorted, nonempty
    std::size_t dimension = 1;

    /// Uniform prior over the nodes infected at the first observed step.
    static PriorSpec from_observed(const SummaryBundle& observed);

    void validate() const;
    bool contains(const Phi& phi) const;
};

/// Symmetric positive definite scale matrix of the Gaussian kernel,
/// row-major dimension x dimension.
struct KernelScale {
    std::size_t dimension = 1;
    std::vector<double> covariance;
    bool floored = false;   // some variance was raised to the floor

    double at(std::size_t r, std::size_t c) const { return covariance[r * dimension + c]; }
};

struct SabcConfig {
    std::size_t particles = 1000;
    int max_steps = 200;
    double acceptance_cutoff = 1e-4;
    double velocity = 0.3;   // annealing speed v
    double initial_quantile = 0.5;   // q0
    // Resample the population by exp(-d/eps) weights whenever the effective
    // sample size fraction falls below this value; 0 disables.
    double resample_threshold = 0.0;
    int rate_window = 10;
    std::uint64_t seed = 1;
    unsigned threads = 0;   // 0: hardware concurrency

    void validate() const;
};

struct StepDiagnostics {
    int step = 0;
    double tolerance = 0.0;   // epsilon used for this step's acceptance test
    double acceptance_rate = 0.0;
    std::size_t failed_simulations = 0;
    std::size_t truncation_rejections = 0;
    std::size_t support_rejections = 0;
    bool covariance_fallback = false;
    bool scale_floored = false;
    bool resampled = false;
};

struct PosteriorSample {
    std::vector<Phi> particles;
    std::vector<double> distances;
    double initial_tolerance = 0.0;
    double final_tolerance = 0.0;
    std::vector<StepDiagnostics> steps;
    bool stopped_by_cutoff = false;
    SabcConfig config;
    std::uint64_t observed_digest = 0;

    std::vector<double> tolerance_trajectory() const;
    std::vector<double> acceptance_trajectory() const;
};

/// Simulate-and-compare callback. Returns the discrepancy of a fresh
/// simulation at `phi`; may throw or return a non-finite value on failure.
struct AbcModel {
    const Network* network = nullptr;
    std::size_t dimension = 1;
    std::function<double(const Phi&, Rng&)> distance;
};

/// Standard epidemic model: simulate, summarize over the observed window and
/// score against `target`.
AbcModel make_epidemic_model(const Network& net, ContagionKind kind, const DiscrepancyTarget& target,
                             const SigmoidConfig& sigmoid = {});

Phi prior_sample(const PriorSpec& spec, Rng& rng);

/// Neighbors of `current` with probabilities proportional to 1/degree.
std::vector<std::pair<node_t, double>> kernel_node_probabilities(node_t current, const Network& net);
node_t kernel_node(node_t current, const Network& net, Rng& rng);
/// K(to | from) for the inverse-degree neighbor kernel; 0 if not adjacent.
double kernel_node_density(node_t from, node_t to, const Network& net);

/// Gaussian perturbation truncated to [0,1]^d by redrawing; nullopt after
/// `max_redraws` failed draws. A non positive definite scale falls back to
/// its diagonal; `fell_back` reports that.
std::optional<std::vector<double>> kernel_continuous(std::span<const double> current, const KernelScale& scale,
                                                     Rng& rng, int max_redraws = 100, bool* fell_back = nullptr);

/// Unbiased sample covariance of the continuous parts; variances below
/// `floor` are raised to it.
KernelScale estimate_kernel_scale(std::span<const Phi> population, double floor = 1e-8);

PosteriorSample sabc_run(const AbcModel& model, const PriorSpec& spec, const SabcConfig& cfg,
                         std::uint64_t observed_digest = 0);

/// Digest identifying an observed bundle in run provenance.
std::uint64_t digest(const SummaryBundle& bundle);

} // namespace netabc
