#include "netabc/inference.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>

#include "netabc/errors.hpp"
#include "netabc/parallel.hpp"

namespace netabc {

/*------------------------------------------------------------------*/
/* Priors                                                           */
/*------------------------------------------------------------------*/

PriorSpec PriorSpec::from_observed(const SummaryBundle& observed)
{
    if (observed.G.empty())
        throw InvalidParameter("observed data has no steps");
    PriorSpec spec;
    spec.seed_support = observed.G.front();
    spec.dimension = observed.kind == ContagionKind::simple ? 1 : 2;
    spec.validate();
    return spec;
}

void PriorSpec::validate() const
{
    if (seed_support.empty())
        throw InvalidParameter("seed-node prior support is empty");
    if (!std::is_sorted(seed_support.begin(), seed_support.end()))
        throw InvalidParameter("seed-node prior support must be sorted");
    if (dimension < 1 || dimension > 2)
        throw InvalidParameter("continuous parameter dimension must be 1 or 2");
}

bool PriorSpec::contains(const Phi& phi) const
{
    if (phi.continuous.size() != dimension)
        return false;
    for (double x : phi.continuous)
        if (!(x >= 0.0 && x <= 1.0))
            return false;
    return std::binary_search(seed_support.begin(), seed_support.end(), phi.seed_node);
}

Phi prior_sample(const PriorSpec& spec, Rng& rng)
{
    spec.validate();
    Phi phi;
    std::uniform_int_distribution<std::size_t> pick(0, spec.seed_support.size() - 1);
    phi.seed_node = spec.seed_support[pick(rng)];
    phi.continuous.resize(spec.dimension);
    for (auto& x : phi.continuous)
        x = uniform01(rng);
    return phi;
}

void SabcConfig::validate() const
{
    if (particles < 2)
        throw InvalidParameter("SABC needs at least 2 particles");
    if (max_steps < 0)
        throw InvalidParameter("max_steps must be nonnegative");
    if (!(acceptance_cutoff > 0.0 && acceptance_cutoff < 1.0))
        throw InvalidParameter("acceptance-rate cutoff must lie in (0,1)");
    if (!(velocity > 0.0 && velocity <= 1.0))
        throw InvalidParameter("annealing velocity must lie in (0,1]");
    if (!(initial_quantile > 0.0 && initial_quantile <= 1.0))
        throw InvalidParameter("initial tolerance quantile must lie in (0,1]");
    if (!(resample_threshold >= 0.0 && resample_threshold <= 1.0))
        throw InvalidParameter("resample threshold must lie in [0,1]");
    if (rate_window < 1)
        throw InvalidParameter("acceptance-rate window must be positive");
}

/*------------------------------------------------------------------*/
/* Perturbation kernels                                             */
/*------------------------------------------------------------------*/

std::vector<std::pair<node_t, double>> kernel_node_probabilities(node_t current, const Network& net)
{
    auto nb = net.neighbors(current);
    if (nb.empty())
        throw InvalidParameter("node " + std::to_string(current) + " has no neighbors to move to");
    std::vector<std::pair<node_t, double>> out;
    out.reserve(nb.size());
    double total = 0.0;
    for (node_t j : nb)
        total += 1.0 / static_cast<double>(net.deg(j));
    for (node_t j : nb)
        out.emplace_back(j, (1.0 / static_cast<double>(net.deg(j))) / total);
    return out;
}

node_t kernel_node(node_t current, const Network& net, Rng& rng)
{
    auto nb = net.neighbors(current);
    if (nb.empty())
        throw InvalidParameter("node " + std::to_string(current) + " has no neighbors to move to");
    double total = 0.0;
    for (node_t j : nb)
        total += 1.0 / static_cast<double>(net.deg(j));
    double u = uniform01(rng) * total;
    for (node_t j : nb) {
        u -= 1.0 / static_cast<double>(net.deg(j));
        if (u < 0.0)
            return j;
    }
    return nb.back();
}

double kernel_node_density(node_t from, node_t to, const Network& net)
{
    if (!net.has_edge(from, to))
        return 0.0;
    double total = 0.0;
    for (node_t j : net.adj(from))
        total += 1.0 / static_cast<double>(net.deg(j));
    return (1.0 / static_cast<double>(net.deg(to))) / total;
}

namespace {

// Lower Cholesky factor; false if the matrix is not positive definite.
bool cholesky(const KernelScale& scale, std::vector<double>& lower)
{
    const std::size_t d = scale.dimension;
    lower.assign(d * d, 0.0);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c <= r; ++c) {
            double acc = scale.at(r, c);
            for (std::size_t k = 0; k < c; ++k)
                acc -= lower[r * d + k] * lower[c * d + k];
            if (r == c) {
                if (!(acc > 0.0) || !std::isfinite(acc))
                    return false;
                lower[r * d + r] = std::sqrt(acc);
            } else {
                lower[r * d + c] = acc / lower[c * d + c];
            }
        }
    }
    return true;
}

} // namespace

std::optional<std::vector<double>> kernel_continuous(std::span<const double> current, const KernelScale& scale,
                                                     Rng& rng, int max_redraws, bool* fell_back)
{
    const std::size_t d = scale.dimension;
    if (current.size() != d || scale.covariance.size() != d * d)
        throw InvalidParameter("kernel scale dimension does not match the parameter");

    std::vector<double> lower;
    bool fallback = !cholesky(scale, lower);
    if (fallback) {
        lower.assign(d * d, 0.0);
        for (std::size_t k = 0; k < d; ++k) {
            double var = scale.at(k, k);
            if (!(var > 0.0) || !std::isfinite(var))
                throw InvalidParameter("kernel variance must be positive");
            lower[k * d + k] = std::sqrt(var);
        }
    }
    if (fell_back)
        *fell_back = fallback;

    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> z(d), out(d);
    for (int attempt = 0; attempt <= max_redraws; ++attempt) {
        for (auto& v : z)
            v = normal(rng);
        bool inside = true;
        for (std::size_t r = 0; r < d; ++r) {
            double x = current[r];
            for (std::size_t c = 0; c <= r; ++c)
                x += lower[r * d + c] * z[c];
            out[r] = x;
            inside = inside && x >= 0.0 && x <= 1.0;
        }
        if (inside)
            return out;
    }
    return std::nullopt;
}

KernelScale estimate_kernel_scale(std::span<const Phi> population, double floor)
{
    if (population.size() < 2)
        throw InvalidParameter("kernel scale needs at least two particles");
    const std::size_t d = population.front().continuous.size();
    const auto z = static_cast<double>(population.size());

    std::vector<double> mean(d, 0.0);
    for (const auto& phi : population)
        for (std::size_t k = 0; k < d; ++k)
            mean[k] += phi.continuous[k];
    for (auto& m : mean)
        m /= z;

    KernelScale scale;
    scale.dimension = d;
    scale.covariance.assign(d * d, 0.0);
    for (const auto& phi : population)
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c)
                scale.covariance[r * d + c] += (phi.continuous[r] - mean[r]) * (phi.continuous[c] - mean[c]);
    for (auto& v : scale.covariance)
        v /= z - 1.0;
    for (std::size_t k = 0; k < d; ++k) {
        double& var = scale.covariance[k * d + k];
        if (!(var >= floor)) {
            var = floor;
            scale.floored = true;
        }
    }
    return scale;
}

/*------------------------------------------------------------------*/
/* Model assembly                                                   */
/*------------------------------------------------------------------*/

AbcModel make_epidemic_model(const Network& net, ContagionKind kind, const DiscrepancyTarget& target,
                             const SigmoidConfig& sigmoid)
{
    if (target.observed().kind != kind)
        throw InvalidParameter("observed data was summarized for a different contagion model");
    AbcModel model;
    model.network = &net;
    model.dimension = kind == ContagionKind::simple ? 1 : 2;
    const int horizon = target.window().t_max;
    if (kind == ContagionKind::simple) {
        model.distance = [&net, &target, horizon](const Phi& phi, Rng& rng) {
            auto events = simulate_simple_events(net, {phi.continuous[0], phi.seed_node}, horizon, rng);
            return target.evaluate(events).value;
        };
    } else {
        model.distance = [&net, &target, sigmoid, horizon](const Phi& phi, Rng& rng) {
            auto events = simulate_complex_events(net, {phi.continuous[0], phi.continuous[1], phi.seed_node}, sigmoid,
                                                  horizon, rng);
            return target.evaluate(events).value;
        };
    }
    return model;
}

std::uint64_t digest(const SummaryBundle& b)
{
    std::uint64_t h = fnv1a(to_string(b.kind));
    auto mix = [&h](const void* data, std::size_t size) {
        h = fnv1a(std::string_view(static_cast<const char*>(data), size), h);
    };
    mix(&b.window.t0, sizeof b.window.t0);
    mix(&b.window.t_max, sizeof b.window.t_max);
    mix(&b.node_count, sizeof b.node_count);
    for (const auto* seq : {&b.s, &b.e, &b.ce})
        mix(seq->data(), seq->size() * sizeof(double));
    for (const auto* sets : {&b.G, &b.H})
        for (const auto& set : *sets) {
            auto size = set.size();
            mix(&size, sizeof size);
            mix(set.data(), set.size() * sizeof(node_t));
        }
    return h;
}

/*------------------------------------------------------------------*/
/* Simulated-annealing ABC                                          */
/*------------------------------------------------------------------*/

std::vector<double> PosteriorSample::tolerance_trajectory() const
{
    std::vector<double> out;
    for (const auto& s : steps)
        out.push_back(s.tolerance);
    return out;
}

std::vector<double> PosteriorSample::acceptance_trajectory() const
{
    std::vector<double> out;
    for (const auto& s : steps)
        out.push_back(s.acceptance_rate);
    return out;
}

namespace {

constexpr double infinity = std::numeric_limits<double>::infinity();
constexpr std::uint64_t resample_stream = 0x7265'7361'6d70'6c65ULL;

double safe_distance(const AbcModel& model, const Phi& phi, Rng& rng)
{
    try {
        double d = model.distance(phi, rng);
        return std::isfinite(d) && d >= 0.0 ? d : infinity;
    } catch (const std::exception&) {
        return infinity;
    }
}

double quantile(std::vector<double> values, double q)
{
    std::erase_if(values, [](double v) { return !std::isfinite(v); });
    if (values.empty())
        throw std::runtime_error("every initial simulation failed; cannot set a tolerance");
    std::sort(values.begin(), values.end());
    // Lower empirical quantile: smallest value with at least q of the mass at or below it.
    auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
    rank = std::clamp<std::size_t>(rank, 1, values.size());
    return values[rank - 1];
}

struct Proposal {
    bool accepted = false;
    bool failed = false;
    bool truncated = false;
    bool off_support = false;
    bool fell_back = false;
};

} // namespace

PosteriorSample sabc_run(const AbcModel& model, const PriorSpec& spec, const SabcConfig& cfg,
                         std::uint64_t observed_digest)
{
    cfg.validate();
    spec.validate();
    if (!model.network || !model.distance)
        throw InvalidParameter("ABC model is incomplete");
    if (spec.dimension != model.dimension)
        throw InvalidParameter("prior dimension does not match the model");
    for (node_t v : spec.seed_support)
        if (!model.network->valid(v))
            throw InvalidParameter("prior support contains a node outside the network");

    const Network& net = *model.network;
    const std::size_t z = cfg.particles;

    PosteriorSample out;
    out.config = cfg;
    out.observed_digest = observed_digest;
    out.particles.resize(z);
    out.distances.resize(z);

    parallel_for(z, cfg.threads, [&](std::size_t i) {
        Rng rng = make_rng(cfg.seed, {0, i});
        out.particles[i] = prior_sample(spec, rng);
        out.distances[i] = safe_distance(model, out.particles[i], rng);
    });

    double eps = std::max(quantile(out.distances, cfg.initial_quantile), 1e-12);
    out.initial_tolerance = eps;
    const bool move_nodes = spec.seed_support.size() > 1;

    std::vector<Proposal> results(z);
    for (int step = 1; step <= cfg.max_steps; ++step) {
        const KernelScale scale = estimate_kernel_scale(out.particles);

        parallel_for(z, cfg.threads, [&](std::size_t i) {
            Rng rng = make_rng(cfg.seed, {static_cast<std::uint64_t>(step), i});
            Proposal& res = results[i];
            res = {};
            const Phi& current = out.particles[i];

            auto moved = kernel_continuous(current.continuous, scale, rng, 100, &res.fell_back);
            if (!moved) {
                res.truncated = true;
                return;
            }
            Phi proposal{std::move(*moved), current.seed_node};
            double hastings = 1.0;
            if (move_nodes && net.deg(current.seed_node) > 0) {
                proposal.seed_node = kernel_node(current.seed_node, net, rng);
                if (!spec.contains(proposal)) {
                    res.off_support = true;
                    return;
                }
                hastings = kernel_node_density(proposal.seed_node, current.seed_node, net) /
                           kernel_node_density(current.seed_node, proposal.seed_node, net);
            }

            double d = safe_distance(model, proposal, rng);
            if (!std::isfinite(d)) {
                res.failed = true;
                return;
            }
            double ratio = std::exp(-(d - out.distances[i]) / eps) * hastings;
            if (uniform01(rng) < std::min(1.0, ratio)) {
                res.accepted = true;
                out.particles[i] = std::move(proposal);
                out.distances[i] = d;
            }
        });

        StepDiagnostics diag;
        diag.step = step;
        diag.tolerance = eps;
        diag.scale_floored = scale.floored;
        std::size_t accepted = 0;
        for (const auto& r : results) {
            accepted += r.accepted;
            diag.failed_simulations += r.failed;
            diag.truncation_rejections += r.truncated;
            diag.support_rejections += r.off_support;
            diag.covariance_fallback = diag.covariance_fallback || r.fell_back;
        }
        diag.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(z);

        if (cfg.resample_threshold > 0.0) {
            const double d_min = *std::min_element(out.distances.begin(), out.distances.end());
            std::vector<double> w(z);
            double sum = 0.0, sum_sq = 0.0;
            for (std::size_t i = 0; i < z; ++i) {
                w[i] = std::isfinite(out.distances[i]) ? std::exp(-(out.distances[i] - d_min) / eps) : 0.0;
                sum += w[i];
                sum_sq += w[i] * w[i];
            }
            const double ess_fraction = sum * sum / sum_sq / static_cast<double>(z);
            if (ess_fraction < cfg.resample_threshold) {
                Rng rng = make_rng(cfg.seed, {static_cast<std::uint64_t>(step), resample_stream});
                std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
                std::vector<Phi> particles(z);
                std::vector<double> distances(z);
                for (std::size_t i = 0; i < z; ++i) {
                    auto k = pick(rng);
                    particles[i] = out.particles[k];
                    distances[i] = out.distances[k];
                }
                out.particles = std::move(particles);
                out.distances = std::move(distances);
                diag.resampled = true;
            }
        }
        out.steps.push_back(diag);

        eps *= 1.0 - cfg.velocity * diag.acceptance_rate;

        const auto window = static_cast<std::size_t>(cfg.rate_window);
        if (out.steps.size() < window)
            continue;
        double recent = 0.0;
        for (std::size_t k = out.steps.size() - window; k < out.steps.size(); ++k)
            recent += out.steps[k].acceptance_rate;
        if (recent / static_cast<double>(window) < cfg.acceptance_cutoff) {
            out.stopped_by_cutoff = true;
            break;
        }
    }
    out.final_tolerance = eps;
    return out;
}

} // namespace netabc
