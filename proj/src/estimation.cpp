#include "netabc/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "netabc/errors.hpp"

namespace netabc {

namespace {

double euclidean(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size())
        throw InvalidParameter("parameter points differ in dimension");
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        acc += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(acc);
}

} // namespace

double loss(const Phi& a, const Phi& b, const PathTable& paths)
{
    return euclidean(a.continuous, b.continuous) + paths.hops(a.seed_node, b.seed_node);
}

double expected_loss(std::span<const Phi> samples, const Phi& candidate, const PathTable& paths)
{
    if (samples.empty())
        throw InvalidParameter("empty posterior sample");
    double total = 0.0;
    for (const auto& phi : samples)
        total += loss(phi, candidate, paths);
    return total / static_cast<double>(samples.size());
}

std::vector<double> geometric_median(std::span<const std::vector<double>> points, double tolerance,
                                     int max_iterations)
{
    if (points.empty())
        throw InvalidParameter("geometric median of an empty set");
    const std::size_t d = points.front().size();

    if (d == 1) {
        std::vector<double> xs;
        xs.reserve(points.size());
        for (const auto& p : points)
            xs.push_back(p[0]);
        std::sort(xs.begin(), xs.end());
        const std::size_t m = xs.size() / 2;
        return {xs.size() % 2 ? xs[m] : 0.5 * (xs[m - 1] + xs[m])};
    }

    std::vector<double> y(d, 0.0);
    for (const auto& p : points)
        for (std::size_t k = 0; k < d; ++k)
            y[k] += p[k];
    for (auto& v : y)
        v /= static_cast<double>(points.size());

    std::vector<double> weighted(d), pull(d), next(d);
    for (int iter = 0; iter < max_iterations; ++iter) {
        std::fill(weighted.begin(), weighted.end(), 0.0);
        std::fill(pull.begin(), pull.end(), 0.0);
        double inv_sum = 0.0;
        double coincident = 0.0;
        for (const auto& p : points) {
            double dist = euclidean(p, y);
            if (dist == 0.0) {
                coincident += 1.0;
                continue;
            }
            inv_sum += 1.0 / dist;
            for (std::size_t k = 0; k < d; ++k) {
                weighted[k] += p[k] / dist;
                pull[k] += (p[k] - y[k]) / dist;
            }
        }
        if (inv_sum == 0.0)
            return y;   // every point coincides with y

        double r = 0.0;
        for (double v : pull)
            r += v * v;
        r = std::sqrt(r);
        if (coincident > 0.0 && r <= coincident)
            return y;   // y is a sample point satisfying the optimality condition

        const double blend = coincident > 0.0 ? coincident / r : 0.0;
        for (std::size_t k = 0; k < d; ++k)
            next[k] = (1.0 - blend) * (weighted[k] / inv_sum) + blend * y[k];

        const double step = euclidean(next, y);
        y.swap(next);
        if (step < tolerance)
            break;
    }
    return y;
}

BayesEstimate bayes_estimate(std::span<const Phi> samples, const Network& net, const PathTable& paths,
                             EstimatorKind kind)
{
    if (samples.empty())
        throw InvalidParameter("empty posterior sample");
    if (net.node_count() != paths.node_count())
        throw InvalidParameter("path table does not belong to this network");

    // Node term: weighted 1-median over distinct sampled seeds.
    std::map<node_t, std::size_t> seed_counts;
    for (const auto& phi : samples) {
        if (!net.valid(phi.seed_node))
            throw InvalidParameter("sampled seed node outside the network");
        ++seed_counts[phi.seed_node];
    }
    std::vector<node_t> candidates;
    if (kind == EstimatorKind::full) {
        for (node_t v = 0; v < net.node_count(); ++v)
            candidates.push_back(v);
    } else {
        for (const auto& [v, count] : seed_counts)
            candidates.push_back(v);
    }

    node_t best_node = -1;
    std::uint64_t best_sum = std::numeric_limits<std::uint64_t>::max();
    for (node_t v : candidates) {
        auto row = paths.row(v);
        std::uint64_t sum = 0;
        bool ok = true;
        for (const auto& [u, count] : seed_counts) {
            if (row[u] == PathTable::unreachable) {
                ok = false;
                break;
            }
            sum += static_cast<std::uint64_t>(row[u]) * count;
        }
        if (ok && sum < best_sum) {
            best_sum = sum;
            best_node = v;
        }
    }
    if (best_node < 0)
        throw UnreachableError("no node reaches every sampled seed node");

    // Continuous term.
    std::vector<std::vector<double>> points;
    points.reserve(samples.size());
    for (const auto& phi : samples)
        points.push_back(phi.continuous);

    std::vector<double> center;
    if (kind == EstimatorKind::full) {
        center = geometric_median(points);
    } else {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : points) {
            double sum = 0.0;
            for (const auto& q : points)
                sum += euclidean(p, q);
            if (sum < best) {
                best = sum;
                center = p;
            }
        }
    }

    BayesEstimate est;
    est.phi = Phi{std::move(center), best_node};
    est.expected_loss = expected_loss(samples, est.phi, paths);
    return est;
}

std::vector<double> DistanceMarginal::average() const
{
    std::vector<double> out(mass.size(), 0.0);
    for (std::size_t d = 0; d < mass.size(); ++d)
        if (node_count[d] > 0)
            out[d] = mass[d] / static_cast<double>(node_count[d]);
    return out;
}

double DistanceMarginal::mass_within(int hops) const
{
    double total = 0.0;
    for (std::size_t d = 0; d < mass.size() && static_cast<int>(d) <= hops; ++d)
        total += mass[d];
    return total;
}

DistanceMarginal distance_marginal(std::span<const Phi> samples, node_t reference, const PathTable& paths)
{
    if (reference < 0 || reference >= paths.node_count())
        throw InvalidParameter("reference node outside the network");
    if (samples.empty())
        throw InvalidParameter("empty posterior sample");

    DistanceMarginal out;
    out.reference = reference;
    const auto bins = static_cast<std::size_t>(paths.rho_max()) + 1;
    out.mass.assign(bins, 0.0);
    out.node_count.assign(bins, 0);

    auto row = paths.row(reference);
    for (auto d : row)
        if (d != PathTable::unreachable)
            ++out.node_count[d];

    std::vector<std::size_t> hits(bins, 0);
    for (const auto& phi : samples)
        ++hits[static_cast<std::size_t>(paths.hops(phi.seed_node, reference))];
    for (std::size_t d = 0; d < bins; ++d)
        out.mass[d] = static_cast<double>(hits[d]) / static_cast<double>(samples.size());
    return out;
}

} // namespace netabc
