#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netabc/contagion.hpp"
#include "netabc/discrepancy.hpp"
#include "netabc/estimation.hpp"
#include "netabc/graph.hpp"
#include "netabc/inference.hpp"
#include "netabc/io.hpp"
#include "netabc/summaries.hpp"

namespace netabc {

struct NetworkSpec {
    std::string generator = "ba";   // ba | er | file
    node_t n = 100;
    int m = 4;
    double p = 0.05;
    std::string path;
};

/// One experiment, read from an INI-style file:
///
///   [experiment] seed, replicates, model, graph_distance, estimator, delta_t
///   [network]    generator, n, m, p, path
///   [truth]      theta, beta, gamma, seed_node (an id or "random")
///   [window]     t0, t_max
///   [sabc]       particles, steps, cutoff, velocity, initial_quantile,
///                resample_threshold, rate_window, threads
///   [sigmoid]    eps_low, eps_high, g
struct ExperimentConfig {
    NetworkSpec network;
    ContagionKind kind = ContagionKind::simple;
    double theta = 0.3;
    double beta = 0.7;
    double gamma = 0.3;
    std::optional<node_t> seed_node;   // empty: uniform per replicate
    ObservationWindow window{20, 70};
    SabcConfig sabc;
    GraphDistanceMode distance_mode = GraphDistanceMode::verbatim;
    EstimatorKind estimator = EstimatorKind::full;
    SigmoidConfig sigmoid;
    int replicates = 1;
    std::vector<int> delta_t;
    std::uint64_t seed = 1;

    /// Sets "section.key" from its text form; unknown keys are rejected.
    void set(std::string_view key, std::string_view value);
    void validate() const;
    /// Stable text listing every field; the digest hashes it.
    std::string canonical() const;
    std::uint64_t digest() const;
    Provenance provenance() const { return {seed, digest()}; }
};

ExperimentConfig parse_experiment_config(std::istream& in);
ExperimentConfig load_experiment_config(const std::string& path);

/// Named substreams of the master seed.
Rng network_rng(std::uint64_t master_seed);
Rng epidemic_rng(std::uint64_t master_seed, int replicate);
std::uint64_t inference_seed(std::uint64_t master_seed, int replicate);

LoadedNetwork build_network(const NetworkSpec& spec, std::uint64_t master_seed);

Phi true_parameters(const ExperimentConfig& cfg, node_t seed_node);

/// Full simulated epidemic (t = 0..window.t_max) for one replicate.
struct ObservedDataset {
    node_t seed_node = 0;
    EpidemicTrace trace;
};
ObservedDataset generate_observed(const ExperimentConfig& cfg, const Network& net, int replicate);

struct InferenceResult {
    SummaryBundle observed;
    PosteriorSample posterior;
    BayesEstimate estimate;
};

InferenceResult run_inference(const Network& net, const PathTable& paths, const EpidemicTrace& observed,
                              const ObservationWindow& window, const SabcConfig& sabc,
                              GraphDistanceMode mode = GraphDistanceMode::verbatim,
                              const SigmoidConfig& sigmoid = {}, EstimatorKind estimator = EstimatorKind::full);

std::vector<double> posterior_mean(const PosteriorSample& sample);
std::vector<double> posterior_sd(const PosteriorSample& sample);

struct ReplicateRow {
    int replicate = 0;
    node_t true_seed = 0;
    std::uint64_t inference_seed = 0;
    bool ok = false;
    std::string error;
    BayesEstimate estimate;
    int seed_error_hops = -1;
    std::vector<double> mean;
    std::vector<double> sd;
    double mass_within_one_hop = 0.0;
    PosteriorSample posterior;
};

struct SweepEntry {
    int delta_t = 0;
    bool ok = false;
    std::string error;
    std::vector<double> mean;
    std::vector<double> sd;
    BayesEstimate estimate;
    PosteriorSample posterior;
};

struct Histogram {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<std::size_t> counts;
};

struct StudyReport {
    ContagionKind kind = ContagionKind::simple;
    Provenance provenance;
    int replicate = 0;   // sensitivity only: replicate whose dataset was swept
    node_t true_seed = 0;   // sensitivity only
    std::vector<ReplicateRow> rows;
    std::vector<SweepEntry> sweep;
    std::vector<Histogram> estimate_histograms;   // one per continuous parameter
    std::vector<std::size_t> seed_distance_histogram;   // hops from the true seed

    std::size_t failures() const;
};

/// Fresh observed dataset, SABC run and Bayes estimate per replicate. A
/// failed replicate is recorded with ok = false and the study continues.
StudyReport run_replicate_study(const ExperimentConfig& cfg, const Network& net, const PathTable& paths,
                                int histogram_bins = 20);

/// Inference on the first delta_t steps after t0 of one observed dataset,
/// for every entry of cfg.delta_t. All entries share the inference seed.
StudyReport run_sensitivity(const ExperimentConfig& cfg, const Network& net, const PathTable& paths,
                            int replicate = 0);

json to_json(const StudyReport& report);

} // namespace netabc
