#include "netabc/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "netabc/errors.hpp"

namespace netabc {

namespace {

std::string trim(std::string_view s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_value(std::string_view key, std::string_view raw)
{
    const std::string text = trim(raw);
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
        throw InvalidParameter("bad value '" + text + "' for " + std::string(key));
    return value;
}

std::string fmt(double v)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

const char* to_string(EstimatorKind kind) { return kind == EstimatorKind::full ? "full" : "medoid"; }

} // namespace

void ExperimentConfig::set(std::string_view key, std::string_view raw)
{
    const std::string value = trim(raw);
    if (key == "experiment.seed")
        seed = parse_value<std::uint64_t>(key, value);
    else if (key == "experiment.replicates")
        replicates = parse_value<int>(key, value);
    else if (key == "experiment.model")
        kind = parse_contagion_kind(value);
    else if (key == "experiment.graph_distance")
        distance_mode = parse_graph_distance_mode(value);
    else if (key == "experiment.estimator") {
        if (value == "full")
            estimator = EstimatorKind::full;
        else if (value == "medoid")
            estimator = EstimatorKind::medoid;
        else
            throw InvalidParameter("unknown estimator '" + value + "'");
    } else if (key == "experiment.delta_t") {
        delta_t.clear();
        std::istringstream in(value);
        std::string item;
        while (std::getline(in, item, ','))
            delta_t.push_back(parse_value<int>(key, item));
    } else if (key == "network.generator")
        network.generator = value;
    else if (key == "network.n")
        network.n = parse_value<node_t>(key, value);
    else if (key == "network.m")
        network.m = parse_value<int>(key, value);
    else if (key == "network.p")
        network.p = parse_value<double>(key, value);
    else if (key == "network.path")
        network.path = value;
    else if (key == "truth.theta")
        theta = parse_value<double>(key, value);
    else if (key == "truth.beta")
        beta = parse_value<double>(key, value);
    else if (key == "truth.gamma")
        gamma = parse_value<double>(key, value);
    else if (key == "truth.seed_node") {
        if (value == "random")
            seed_node.reset();
        else
            seed_node = parse_value<node_t>(key, value);
    } else if (key == "window.t0")
        window.t0 = parse_value<int>(key, value);
    else if (key == "window.t_max")
        window.t_max = parse_value<int>(key, value);
    else if (key == "sabc.particles")
        sabc.particles = parse_value<std::size_t>(key, value);
    else if (key == "sabc.steps")
        sabc.max_steps = parse_value<int>(key, value);
    else if (key == "sabc.cutoff")
        sabc.acceptance_cutoff = parse_value<double>(key, value);
    else if (key == "sabc.velocity")
        sabc.velocity = parse_value<double>(key, value);
    else if (key == "sabc.initial_quantile")
        sabc.initial_quantile = parse_value<double>(key, value);
    else if (key == "sabc.resample_threshold")
        sabc.resample_threshold = parse_value<double>(key, value);
    else if (key == "sabc.rate_window")
        sabc.rate_window = parse_value<int>(key, value);
    else if (key == "sabc.threads")
        sabc.threads = parse_value<unsigned>(key, value);
    else if (key == "sigmoid.eps_low")
        sigmoid.eps_low = parse_value<double>(key, value);
    else if (key == "sigmoid.eps_high")
        sigmoid.eps_high = parse_value<double>(key, value);
    else if (key == "sigmoid.g")
        sigmoid.g = parse_value<double>(key, value);
    else
        throw InvalidParameter("unknown config key '" + std::string(key) + "'");
}

void ExperimentConfig::validate() const
{
    window.validate();
    sabc.validate();
    sigmoid.validate();
    if (replicates < 1)
        throw InvalidParameter("replicates must be at least 1");
    if (network.generator == "ba") {
        if (network.m < 1 || network.n <= network.m)
            throw InvalidParameter("BA network needs 1 <= m < n");
    } else if (network.generator == "er") {
        if (network.n < 1 || !(network.p >= 0.0 && network.p <= 1.0))
            throw InvalidParameter("ER network needs n >= 1 and p in [0,1]");
    } else if (network.generator == "file") {
        if (network.path.empty())
            throw InvalidParameter("file network needs a path");
    } else {
        throw InvalidParameter("unknown network generator '" + network.generator + "'");
    }
    auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (kind == ContagionKind::simple && !unit(theta))
        throw InvalidParameter("theta must lie in [0,1]");
    if (kind == ContagionKind::complex && !(unit(beta) && unit(gamma)))
        throw InvalidParameter("beta and gamma must lie in [0,1]");
    if (seed_node && *seed_node < 0)
        throw InvalidParameter("seed node must be nonnegative");
    for (int dt : delta_t)
        if (dt < 1 || dt > window.t_max - window.t0)
            throw InvalidParameter("delta_t " + std::to_string(dt) + " outside the observation window");
}

std::string ExperimentConfig::canonical() const
{
    std::ostringstream out;
    out << "experiment.seed=" << seed << '\n'
        << "experiment.replicates=" << replicates << '\n'
        << "experiment.model=" << to_string(kind) << '\n'
        << "experiment.graph_distance=" << to_string(distance_mode) << '\n'
        << "experiment.estimator=" << to_string(estimator) << '\n'
        << "experiment.delta_t=";
    for (std::size_t i = 0; i < delta_t.size(); ++i)
        out << (i ? "," : "") << delta_t[i];
    out << '\n'
        << "network.generator=" << network.generator << '\n'
        << "network.n=" << network.n << '\n'
        << "network.m=" << network.m << '\n'
        << "network.p=" << fmt(network.p) << '\n'
        << "network.path=" << network.path << '\n'
        << "truth.theta=" << fmt(theta) << '\n'
        << "truth.beta=" << fmt(beta) << '\n'
        << "truth.gamma=" << fmt(gamma) << '\n'
        << "truth.seed_node=" << (seed_node ? std::to_string(*seed_node) : "random") << '\n'
        << "window.t0=" << window.t0 << '\n'
        << "window.t_max=" << window.t_max << '\n'
        << "sabc.particles=" << sabc.particles << '\n'
        << "sabc.steps=" << sabc.max_steps << '\n'
        << "sabc.cutoff=" << fmt(sabc.acceptance_cutoff) << '\n'
        << "sabc.velocity=" << fmt(sabc.velocity) << '\n'
        << "sabc.initial_quantile=" << fmt(sabc.initial_quantile) << '\n'
        << "sabc.resample_threshold=" << fmt(sabc.resample_threshold) << '\n'
        << "sabc.rate_window=" << sabc.rate_window << '\n'
        << "sigmoid.eps_low=" << fmt(sigmoid.eps_low) << '\n'
        << "sigmoid.eps_high=" << fmt(sigmoid.eps_high) << '\n'
        << "sigmoid.g=" << fmt(sigmoid.g) << '\n';
    // sabc.threads is left out: results do not depend on it.
    return out.str();
}

std::uint64_t ExperimentConfig::digest() const { return fnv1a(canonical()); }

ExperimentConfig parse_experiment_config(std::istream& in)
{
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ParseError(e.line(), e.message());
    }
    ExperimentConfig cfg;
    for (const auto& [section, body] : tree) {
        if (body.empty())
            throw InvalidParameter("config key '" + section + "' outside a section");
        for (const auto& [key, leaf] : body)
            cfg.set(section + "." + key, leaf.data());
    }
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InvalidParameter("cannot open config " + path);
    return parse_experiment_config(in);
}

Rng network_rng(std::uint64_t master_seed) { return make_rng(master_seed, {stream_tag("network")}); }

Rng epidemic_rng(std::uint64_t master_seed, int replicate)
{
    return make_rng(master_seed, {stream_tag("epidemic"), static_cast<std::uint64_t>(replicate)});
}

std::uint64_t inference_seed(std::uint64_t master_seed, int replicate)
{
    auto rng = make_rng(master_seed, {stream_tag("inference"), static_cast<std::uint64_t>(replicate)});
    return rng();
}

LoadedNetwork build_network(const NetworkSpec& spec, std::uint64_t master_seed)
{
    if (spec.generator == "file")
        return load_edge_list_file(spec.path);
    LoadedNetwork out;
    auto rng = network_rng(master_seed);
    if (spec.generator == "ba")
        out.network = generate_ba(spec.n, spec.m, rng);
    else if (spec.generator == "er")
        out.network = generate_er(spec.n, spec.p, rng);
    else
        throw InvalidParameter("unknown network generator '" + spec.generator + "'");
    return out;
}

Phi true_parameters(const ExperimentConfig& cfg, node_t seed_node)
{
    if (cfg.kind == ContagionKind::simple)
        return Phi{{cfg.theta}, seed_node};
    return Phi{{cfg.beta, cfg.gamma}, seed_node};
}

ObservedDataset generate_observed(const ExperimentConfig& cfg, const Network& net, int replicate)
{
    auto rng = epidemic_rng(cfg.seed, replicate);
    ObservedDataset out;
    if (cfg.seed_node) {
        if (!net.valid(*cfg.seed_node))
            throw InvalidParameter("seed node outside the network");
        out.seed_node = *cfg.seed_node;
    } else {
        out.seed_node = std::uniform_int_distribution<node_t>(0, net.node_count() - 1)(rng);
    }
    if (cfg.kind == ContagionKind::simple)
        out.trace = simulate_simple(net, SimpleParams{cfg.theta, out.seed_node}, cfg.window.t_max, rng);
    else
        out.trace = simulate_complex(net, ComplexParams{cfg.beta, cfg.gamma, out.seed_node}, cfg.sigmoid,
                                     cfg.window.t_max, rng);
    return out;
}

InferenceResult run_inference(const Network& net, const PathTable& paths, const EpidemicTrace& observed,
                              const ObservationWindow& window, const SabcConfig& sabc, GraphDistanceMode mode,
                              const SigmoidConfig& sigmoid, EstimatorKind estimator)
{
    InferenceResult out;
    out.observed = summarize(observed, window, net);
    auto spec = PriorSpec::from_observed(out.observed);
    DiscrepancyTarget target(out.observed, paths, mode);
    auto model = make_epidemic_model(net, observed.kind, target, sigmoid);
    out.posterior = sabc_run(model, spec, sabc, digest(out.observed));
    out.estimate = bayes_estimate(out.posterior.particles, net, paths, estimator);
    return out;
}

std::vector<double> posterior_mean(const PosteriorSample& sample)
{
    if (sample.particles.empty())
        throw InvalidParameter("empty posterior sample");
    const std::size_t d = sample.particles.front().continuous.size();
    std::vector<double> mean(d, 0.0);
    for (const auto& phi : sample.particles)
        for (std::size_t k = 0; k < d; ++k)
            mean[k] += phi.continuous[k];
    for (auto& v : mean)
        v /= static_cast<double>(sample.particles.size());
    return mean;
}

std::vector<double> posterior_sd(const PosteriorSample& sample)
{
    auto mean = posterior_mean(sample);
    std::vector<double> var(mean.size(), 0.0);
    for (const auto& phi : sample.particles)
        for (std::size_t k = 0; k < mean.size(); ++k)
            var[k] += (phi.continuous[k] - mean[k]) * (phi.continuous[k] - mean[k]);
    const double denom = sample.particles.size() > 1 ? static_cast<double>(sample.particles.size() - 1) : 1.0;
    for (auto& v : var)
        v = std::sqrt(v / denom);
    return var;
}

std::size_t StudyReport::failures() const
{
    std::size_t n = 0;
    for (const auto& r : rows)
        n += !r.ok;
    for (const auto& s : sweep)
        n += !s.ok;
    return n;
}

StudyReport run_replicate_study(const ExperimentConfig& cfg, const Network& net, const PathTable& paths,
                                int histogram_bins)
{
    cfg.validate();
    if (histogram_bins < 1)
        throw InvalidParameter("histogram needs at least one bin");

    StudyReport report;
    report.kind = cfg.kind;
    report.provenance = cfg.provenance();
    const std::size_t dim = cfg.kind == ContagionKind::simple ? 1 : 2;

    for (int r = 0; r < cfg.replicates; ++r) {
        ReplicateRow row;
        row.replicate = r;
        row.inference_seed = inference_seed(cfg.seed, r);
        try {
            auto data = generate_observed(cfg, net, r);
            row.true_seed = data.seed_node;
            auto sabc = cfg.sabc;
            sabc.seed = row.inference_seed;
            auto result = run_inference(net, paths, data.trace, cfg.window, sabc, cfg.distance_mode, cfg.sigmoid,
                                        cfg.estimator);
            row.estimate = result.estimate;
            row.seed_error_hops = paths.hops(row.estimate.phi.seed_node, row.true_seed);
            row.mean = posterior_mean(result.posterior);
            row.sd = posterior_sd(result.posterior);
            row.mass_within_one_hop =
                distance_marginal(result.posterior.particles, row.true_seed, paths).mass_within(1);
            row.posterior = std::move(result.posterior);
            row.ok = true;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        report.rows.push_back(std::move(row));
    }

    report.estimate_histograms.assign(dim, Histogram{0.0, 1.0, std::vector<std::size_t>(histogram_bins, 0)});
    report.seed_distance_histogram.assign(static_cast<std::size_t>(paths.rho_max()) + 1, 0);
    for (const auto& row : report.rows) {
        if (!row.ok)
            continue;
        for (std::size_t k = 0; k < dim; ++k) {
            auto& h = report.estimate_histograms[k];
            auto bin = static_cast<int>(std::floor(row.estimate.phi.continuous[k] * histogram_bins));
            ++h.counts[std::clamp(bin, 0, histogram_bins - 1)];
        }
        ++report.seed_distance_histogram[static_cast<std::size_t>(row.seed_error_hops)];
    }
    return report;
}

StudyReport run_sensitivity(const ExperimentConfig& cfg, const Network& net, const PathTable& paths, int replicate)
{
    cfg.validate();
    if (cfg.delta_t.empty())
        throw InvalidParameter("sensitivity study needs a delta_t list");

    StudyReport report;
    report.kind = cfg.kind;
    report.provenance = cfg.provenance();
    report.replicate = replicate;
    auto data = generate_observed(cfg, net, replicate);
    report.true_seed = data.seed_node;

    auto sabc = cfg.sabc;
    sabc.seed = inference_seed(cfg.seed, replicate);
    for (int dt : cfg.delta_t) {
        SweepEntry entry;
        entry.delta_t = dt;
        try {
            ObservationWindow w{cfg.window.t0, cfg.window.t0 + dt};
            auto result =
                run_inference(net, paths, data.trace, w, sabc, cfg.distance_mode, cfg.sigmoid, cfg.estimator);
            entry.mean = posterior_mean(result.posterior);
            entry.sd = posterior_sd(result.posterior);
            entry.estimate = result.estimate;
            entry.posterior = std::move(result.posterior);
            entry.ok = true;
        } catch (const std::exception& e) {
            entry.error = e.what();
        }
        report.sweep.push_back(std::move(entry));
    }
    return report;
}

json to_json(const StudyReport& report)
{
    json j;
    j["model"] = to_string(report.kind);
    j["provenance"] = report.provenance.to_json();
    j["failures"] = report.failures();
    if (!report.rows.empty()) {
        json rows = json::array();
        for (const auto& r : report.rows) {
            json row{{"replicate", r.replicate}, {"true_seed", r.true_seed}, {"ok", r.ok},
                     {"inference_seed", r.inference_seed}};
            if (r.ok) {
                row["estimate"] = to_json(r.estimate.phi, report.kind);
                row["expected_loss"] = r.estimate.expected_loss;
                row["seed_error_hops"] = r.seed_error_hops;
                row["posterior_mean"] = r.mean;
                row["posterior_sd"] = r.sd;
                row["mass_within_one_hop"] = r.mass_within_one_hop;
                row["sabc_steps"] = r.posterior.steps.size();
            } else {
                row["error"] = r.error;
            }
            rows.push_back(std::move(row));
        }
        j["replicates"] = std::move(rows);
        json hist = json::array();
        for (const auto& h : report.estimate_histograms)
            hist.push_back({{"lo", h.lo}, {"hi", h.hi}, {"counts", h.counts}});
        j["estimate_histograms"] = std::move(hist);
        j["seed_distance_histogram"] = report.seed_distance_histogram;
    }
    if (!report.sweep.empty()) {
        j["replicate"] = report.replicate;
        j["true_seed"] = report.true_seed;
        json sweep = json::array();
        for (const auto& s : report.sweep) {
            json e{{"delta_t", s.delta_t}, {"ok", s.ok}};
            if (s.ok) {
                e["posterior_mean"] = s.mean;
                e["posterior_sd"] = s.sd;
                e["estimate"] = to_json(s.estimate.phi, report.kind);
                e["expected_loss"] = s.estimate.expected_loss;
            } else {
                e["error"] = s.error;
            }
            sweep.push_back(std::move(e));
        }
        j["sweep"] = std::move(sweep);
    }
    return j;
}

} // namespace netabc
