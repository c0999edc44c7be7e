#include "netabc/contagion.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>

#include "netabc/errors.hpp"

namespace netabc {

const char* to_string(ContagionKind kind) { return kind == ContagionKind::simple ? "simple" : "complex"; }

ContagionKind parse_contagion_kind(std::string_view name)
{
    if (name == "simple")
        return ContagionKind::simple;
    if (name == "complex")
        return ContagionKind::complex;
    throw InvalidParameter("unknown contagion model '" + std::string(name) + "'");
}

void SigmoidConfig::validate() const
{
    if (!(0.0 < eps_low && eps_low < eps_high && eps_high < 1.0))
        throw InvalidParameter("sigmoid requires 0 < eps_low < eps_high < 1");
    if (!std::isfinite(g))
        throw InvalidParameter("sigmoid shape must be finite");
}

const TraceStep& EpidemicTrace::at(int t) const
{
    if (steps.empty() || t < first_step() || t > last_step())
        throw std::out_of_range("step " + std::to_string(t) + " not covered by trace");
    return steps[static_cast<std::size_t>(t - first_step())];
}

double p_infect(int k, int degree, double gamma, const SigmoidConfig& cfg)
{
    if (degree < 1 || k < 1)
        throw InvalidParameter("p_infect requires k >= 1 and degree >= 1");
    if (k > degree)
        throw InvalidParameter("infected-neighbor count exceeds degree");
    const double f = degree;
    return cfg.eps_low + (cfg.eps_high - cfg.eps_low) / (1.0 + std::exp(-cfg.g * f * (k / f - gamma)));
}

double infection_at_last_exposure_prob(std::span<const std::uint32_t> summary, int degree, double gamma,
                                       const SigmoidConfig& cfg)
{
    if (summary.empty())
        throw InvalidParameter("exposure summary is empty");
    if (summary.back() < 1)
        throw InvalidParameter("last exposure count must be at least 1");

    const int last = static_cast<int>(summary.size());
    double prob = 1.0;
    for (int k = 1; k < last; ++k)
        prob *= std::pow(1.0 - p_infect(k, degree, gamma, cfg), summary[k - 1]);
    const double p_last = p_infect(last, degree, gamma, cfg);
    return prob * std::pow(1.0 - p_last, summary.back() - 1.0) * p_last;
}

namespace {

void check_common(const Network& net, node_t seed, int t_max)
{
    if (!net.valid(seed))
        throw InvalidParameter("seed node " + std::to_string(seed) + " not in network");
    if (t_max < 0)
        throw InvalidParameter("final step must be nonnegative");
}

void check_unit(double value, const char* name)
{
    if (!(value >= 0.0 && value <= 1.0))
        throw InvalidParameter(std::string(name) + " must lie in [0,1]");
}

std::size_t uniform_index(std::size_t size, Rng& rng)
{
    return std::uniform_int_distribution<std::size_t>(0, size - 1)(rng);
}

} // namespace

std::vector<node_t> seed_complex(const Network& net, node_t seed_node, double gamma, Rng& rng)
{
    if (!net.valid(seed_node))
        throw InvalidParameter("seed node " + std::to_string(seed_node) + " not in network");
    check_unit(gamma, "gamma");

    auto nb = net.adj(seed_node);
    auto wave = static_cast<std::size_t>(std::lround(gamma * static_cast<double>(nb.size())));
    wave = std::min(wave, nb.size());

    // Partial Fisher-Yates over a copy of the neighbor list.
    std::vector<node_t> pool(nb.begin(), nb.end());
    for (std::size_t i = 0; i < wave; ++i) {
        std::size_t j = i + uniform_index(pool.size() - i, rng);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(wave);
    pool.push_back(seed_node);
    std::sort(pool.begin(), pool.end());
    return pool;
}

EpidemicEvents simulate_simple_events(const Network& net, const SimpleParams& params, int t_max, Rng& rng)
{
    check_common(net, params.seed_node, t_max);
    check_unit(params.theta, "theta");

    const node_t n = net.node_count();
    EpidemicEvents ev;
    ev.kind = ContagionKind::simple;
    ev.t_max = t_max;
    ev.infection_time.assign(static_cast<std::size_t>(n), EpidemicEvents::never);

    std::vector<node_t> infected{params.seed_node};
    std::vector<node_t> fresh;
    ev.infection_time[params.seed_node] = 0;

    std::bernoulli_distribution success(params.theta);
    for (int t = 0; t < t_max; ++t) {
        fresh.clear();
        if (params.theta > 0.0 && static_cast<node_t>(infected.size()) < n) {
            for (node_t u : infected) {
                auto nb = net.adj(u);
                if (nb.empty())
                    continue;
                node_t v = nb[uniform_index(nb.size(), rng)];
                if (ev.infection_time[v] <= t)
                    continue;
                if (success(rng) && ev.infection_time[v] == EpidemicEvents::never) {
                    ev.infection_time[v] = t + 1;
                    fresh.push_back(v);
                }
            }
        }
        if (!fresh.empty()) {
            std::sort(fresh.begin(), fresh.end());
            auto mid = infected.insert(infected.end(), fresh.begin(), fresh.end());
            std::inplace_merge(infected.begin(), mid, infected.end());
        }
    }
    return ev;
}

EpidemicEvents simulate_complex_events(const Network& net, const ComplexParams& params, const SigmoidConfig& cfg,
                                       int t_max, Rng& rng, ExposureLog* log)
{
    check_common(net, params.seed_node, t_max);
    check_unit(params.beta, "beta");
    check_unit(params.gamma, "gamma");
    cfg.validate();

    const node_t n = net.node_count();
    EpidemicEvents ev;
    ev.kind = ContagionKind::complex;
    ev.t_max = t_max;
    ev.infection_time.assign(static_cast<std::size_t>(n), EpidemicEvents::never);
    ev.exposure_time.assign(static_cast<std::size_t>(n), EpidemicEvents::never);

    std::vector<node_t> infected = seed_complex(net, params.seed_node, params.gamma, rng);
    ev.seed_only = infected.size() == 1 && net.deg(params.seed_node) > 0;

    std::vector<int> infected_neighbors(static_cast<std::size_t>(n), 0);
    for (node_t u : infected) {
        ev.infection_time[u] = 0;
        for (node_t v : net.adj(u))
            ++infected_neighbors[v];
    }

    std::vector<ExposureSummary> summary(static_cast<std::size_t>(n));
    std::vector<node_t> exposed;   // currently exposed, unsorted
    std::vector<node_t> fresh;

    auto snapshot = [&] {
        if (!log)
            return;
        std::vector<node_t> ids(exposed);
        std::sort(ids.begin(), ids.end());
        auto& row = log->emplace_back();
        row.reserve(ids.size());
        for (node_t i : ids)
            row.push_back({i, summary[i]});
    };
    if (log) {
        log->clear();
        log->reserve(static_cast<std::size_t>(t_max) + 1);
    }
    snapshot();

    std::bernoulli_distribution exposure(params.beta);
    for (int t = 0; t < t_max; ++t) {
        fresh.clear();
        if (params.beta > 0.0 && static_cast<node_t>(infected.size()) < n) {
            // Infected-neighbor counts stay frozen at their step-start values
            // until the step's infections are applied below.
            for (node_t u : infected) {
                auto nb = net.adj(u);
                if (nb.empty())
                    continue;
                node_t v = nb[uniform_index(nb.size(), rng)];
                if (ev.infection_time[v] != EpidemicEvents::never)
                    continue;   // infected, or already infected during this step
                if (!exposure(rng))
                    continue;

                const int k = infected_neighbors[v];
                auto& counts = summary[v];
                if (counts.size() < static_cast<std::size_t>(k))
                    counts.resize(static_cast<std::size_t>(k), 0);
                ++counts[static_cast<std::size_t>(k - 1)];
                if (ev.exposure_time[v] == EpidemicEvents::never) {
                    ev.exposure_time[v] = t + 1;
                    exposed.push_back(v);
                }

                const double p = p_infect(k, static_cast<int>(net.deg(v)), params.gamma, cfg);
                if (uniform01(rng) < p) {
                    ev.infection_time[v] = t + 1;
                    fresh.push_back(v);
                }
            }
        }
        if (!fresh.empty()) {
            std::sort(fresh.begin(), fresh.end());
            for (node_t v : fresh) {
                for (node_t w : net.adj(v))
                    ++infected_neighbors[w];
                summary[v].clear();
                summary[v].shrink_to_fit();
            }
            std::erase_if(exposed, [&](node_t v) { return ev.infection_time[v] != EpidemicEvents::never; });
            auto mid = infected.insert(infected.end(), fresh.begin(), fresh.end());
            std::inplace_merge(infected.begin(), mid, infected.end());
        }
        snapshot();
    }
    return ev;
}

EpidemicTrace to_trace(const EpidemicEvents& events, const ExposureLog* log)
{
    EpidemicTrace trace;
    trace.kind = events.kind;
    trace.node_count = events.node_count();
    trace.seed_only = events.seed_only;
    trace.steps.resize(static_cast<std::size_t>(events.t_max) + 1);

    const bool complex = events.kind == ContagionKind::complex;
    for (int t = 0; t <= events.t_max; ++t) {
        auto& step = trace.steps[static_cast<std::size_t>(t)];
        step.t = t;
        for (node_t i = 0; i < trace.node_count; ++i) {
            if (events.infected_at(i, t))
                step.infected.push_back(i);
            else if (complex && events.exposed_at(i, t))
                step.exposed.push_back(i);
        }
        if (complex && log)
            step.exposures = (*log)[static_cast<std::size_t>(t)];
    }
    return trace;
}

EpidemicTrace simulate_simple(const Network& net, const SimpleParams& params, int t_max, Rng& rng)
{
    return to_trace(simulate_simple_events(net, params, t_max, rng));
}

EpidemicTrace simulate_complex(const Network& net, const ComplexParams& params, const SigmoidConfig& cfg, int t_max,
                               Rng& rng)
{
    ExposureLog log;
    auto events = simulate_complex_events(net, params, cfg, t_max, rng, &log);
    return to_trace(events, &log);
}

} // namespace netabc
