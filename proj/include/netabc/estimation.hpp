#pragma once

#include <span>
#include <vector>

#include "netabc/graph.hpp"
#include "netabc/inference.hpp"

namespace netabc {

/// Euclidean distance between continuous parts plus raw hop distance
/// between seed nodes.
double loss(const Phi& a, const Phi& b, const PathTable& paths);

/// Mean loss of `candidate` against the sample.
double expected_loss(std::span<const Phi> samples, const Phi& candidate, const PathTable& paths);

/// Minimizer of the sum of Euclidean distances (Weiszfeld iteration with the
/// Vardi-Zhang step at sample points). One-dimensional input returns the
/// median, with the midpoint of the two middle values for even counts.
std::vector<double> geometric_median(std::span<const std::vector<double>> points, double tolerance = 1e-9,
                                     int max_iterations = 10000);

enum class EstimatorKind {
    full,     // minimize over the whole parameter space
    medoid,   // minimize over the sampled points only
};

struct BayesEstimate {
    Phi phi;
    double expected_loss = 0.0;
};

/// Bayes estimator under the additive loss. The continuous and node terms
/// are minimized independently; node ties go to the smallest id.
BayesEstimate bayes_estimate(std::span<const Phi> samples, const Network& net, const PathTable& paths,
                             EstimatorKind kind = EstimatorKind::full);

struct DistanceMarginal {
    node_t reference = 0;
    std::vector<double> mass;   // posterior mass on seed nodes at hop distance d
    std::vector<std::size_t> node_count;   // network nodes at hop distance d

    /// Mass per node at distance d (0 for empty shells).
    std::vector<double> average() const;
    double mass_within(int hops) const;
};

DistanceMarginal distance_marginal(std::span<const Phi> samples, node_t reference, const PathTable& paths);

} // namespace netabc
