// netabc: dataset generation, inference and study drivers.
//
// Exit codes: 0 success, 2 invalid configuration, 3 runtime failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "netabc/errors.hpp"
#include "netabc/experiment.hpp"
#include "netabc/io.hpp"

namespace fs = std::filesystem;
using namespace netabc;

namespace {

constexpr int exit_invalid = 2;
constexpr int exit_runtime = 3;

void require_file(const std::string& path)
{
    if (!fs::is_regular_file(path))
        throw InvalidParameter("no such file: " + path);
}

std::ofstream open_out(const fs::path& path)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    return out;
}

void write_json(const fs::path& path, const json& j)
{
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

// Digest over the canonical "key=value" text of a command's arguments.
struct ArgDigest {
    std::ostringstream text;

    template <class T>
    ArgDigest& add(const char* key, const T& value)
    {
        text << key << '=' << value << '\n';
        return *this;
    }
    std::uint64_t value() const { return fnv1a(text.str()); }
};

Network load_net(const std::string& path)
{
    require_file(path);
    return load_edge_list_file(path).network;
}

struct GenNetArgs {
    std::string model = "ba";
    node_t n = 100;
    int m = 4;
    double p = 0.05;
    std::uint64_t seed = 1;
    std::string out;
};

void cmd_gen_net(const GenNetArgs& a)
{
    NetworkSpec spec{a.model, a.n, a.m, a.p, {}};
    if (a.model != "ba" && a.model != "er")
        throw InvalidParameter("model must be ba or er");
    auto net = build_network(spec, a.seed).network;
    ArgDigest d;
    d.add("command", "gen-net").add("model", a.model).add("n", a.n).add("m", a.m).add("p", a.p);
    auto out = open_out(a.out);
    out << "# netabc gen-net rng_seed=" << a.seed << " config_digest=" << hex_digest(d.value()) << '\n';
    write_edge_list(out, net);
}

struct SimulateArgs {
    std::string model = "simple";
    double theta = 0.3;
    double beta = 0.7;
    double gamma = 0.3;
    node_t seed_node = 0;
    int t_max = 70;
    std::uint64_t seed = 1;
    std::string net;
    std::string out;
};

void cmd_simulate(const SimulateArgs& a)
{
    auto kind = parse_contagion_kind(a.model);
    auto net = load_net(a.net);
    if (!net.valid(a.seed_node))
        throw InvalidParameter("seed node outside the network");
    if (a.t_max < 0)
        throw InvalidParameter("t-max must be nonnegative");

    ArgDigest d;
    d.add("command", "simulate").add("model", a.model).add("seed_node", a.seed_node).add("t_max", a.t_max);
    auto rng = epidemic_rng(a.seed, 0);
    EpidemicTrace trace;
    if (kind == ContagionKind::simple) {
        if (!(a.theta >= 0.0 && a.theta <= 1.0))
            throw InvalidParameter("theta must lie in [0,1]");
        d.add("theta", a.theta);
        trace = simulate_simple(net, SimpleParams{a.theta, a.seed_node}, a.t_max, rng);
    } else {
        if (!(a.beta >= 0.0 && a.beta <= 1.0 && a.gamma >= 0.0 && a.gamma <= 1.0))
            throw InvalidParameter("beta and gamma must lie in [0,1]");
        d.add("beta", a.beta).add("gamma", a.gamma);
        trace = simulate_complex(net, ComplexParams{a.beta, a.gamma, a.seed_node}, SigmoidConfig{}, a.t_max, rng);
    }
    auto out = open_out(a.out);
    write_trace(out, trace, Provenance{a.seed, d.value()});
}

struct ObserveArgs {
    std::string trace;
    std::string net;
    int t0 = 20;
    int t_max = 70;
    std::string out;
    std::string summary;
};

void cmd_observe(const ObserveArgs& a)
{
    require_file(a.trace);
    std::optional<node_t> n;
    Network net;
    if (!a.net.empty()) {
        net = load_net(a.net);
        n = net.node_count();
    }
    auto trace = read_trace_file(a.trace, n);
    ObservationWindow w{a.t0, a.t_max};
    w.validate();
    if (w.t0 < trace.first_step() || w.t_max > trace.last_step())
        throw InvalidParameter("window exceeds the trace");
    auto observed = observe(trace, w);

    ArgDigest d;
    d.add("command", "observe").add("t0", a.t0).add("t_max", a.t_max);
    auto out = open_out(a.out);
    write_trace(out, observed, Provenance{0, d.value()});
    if (!a.summary.empty()) {
        if (a.net.empty())
            throw InvalidParameter("--summary needs --net");
        auto j = to_json(summarize(observed, w, net));
        j["provenance"] = Provenance{0, d.value()}.to_json();
        write_json(a.summary, j);
    }
}

struct InferArgs {
    std::string model;
    std::string net;
    std::string observed;
    std::optional<int> t0;
    std::optional<int> t_max;
    SabcConfig sabc;
    std::string distance = "verbatim";
    std::string out;
};

void cmd_infer(InferArgs a)
{
    auto net = load_net(a.net);
    require_file(a.observed);
    auto trace = read_trace_file(a.observed, net.node_count());
    if (trace.node_count != net.node_count())
        throw InvalidParameter("observed trace does not match the network size");
    if (!a.model.empty() && parse_contagion_kind(a.model) != trace.kind)
        throw InvalidParameter("observed trace was produced by the other contagion model");
    ObservationWindow w{a.t0.value_or(trace.first_step()), a.t_max.value_or(trace.last_step())};
    w.validate();
    if (w.t0 < trace.first_step() || w.t_max > trace.last_step())
        throw InvalidParameter("window exceeds the observed trace");
    auto mode = parse_graph_distance_mode(a.distance);
    a.sabc.validate();

    ArgDigest d;
    d.add("command", "infer").add("model", to_string(trace.kind)).add("t0", w.t0).add("t_max", w.t_max);
    d.add("particles", a.sabc.particles).add("steps", a.sabc.max_steps).add("cutoff", a.sabc.acceptance_cutoff);
    d.add("velocity", a.sabc.velocity).add("graph_distance", to_string(mode));
    Provenance prov{a.sabc.seed, d.value()};

    auto paths = all_pairs_shortest_paths(net);
    auto result = run_inference(net, paths, trace, w, a.sabc, mode);
    fs::path dir(a.out);
    fs::create_directories(dir);
    {
        auto out = open_out(dir / "posterior.csv");
        write_posterior_csv(out, result.posterior, trace.kind, prov);
    }
    auto diag = diagnostics_json(result.posterior, prov);
    diag["graph_distance"] = to_string(mode);
    diag["window"] = {{"t0", w.t0}, {"t_max", w.t_max}};
    write_json(dir / "diagnostics.json", diag);
}

struct EstimateArgs {
    std::string posterior;
    std::string net;
    std::string out;
    std::optional<node_t> true_seed;
    bool medoid = false;
};

void cmd_estimate(const EstimateArgs& a)
{
    auto net = load_net(a.net);
    require_file(a.posterior);
    auto table = read_posterior_csv_file(a.posterior);
    for (const auto& phi : table.particles)
        if (!net.valid(phi.seed_node))
            throw InvalidParameter("posterior seed node outside the network");
    auto paths = all_pairs_shortest_paths(net);
    auto est = bayes_estimate(table.particles, net, paths, a.medoid ? EstimatorKind::medoid : EstimatorKind::full);

    json j;
    j["estimate"] = to_json(est.phi, table.kind);
    j["expected_loss"] = est.expected_loss;
    j["estimator"] = a.medoid ? "medoid" : "full";
    j["samples"] = table.particles.size();
    if (a.true_seed) {
        if (!net.valid(*a.true_seed))
            throw InvalidParameter("true seed outside the network");
        j["true_seed"] = *a.true_seed;
        j["seed_error_hops"] = paths.hops(est.phi.seed_node, *a.true_seed);
        j["distance_marginal"] = to_json(distance_marginal(table.particles, *a.true_seed, paths));
    }
    ArgDigest d;
    d.add("command", "estimate").add("estimator", a.medoid ? "medoid" : "full");
    j["provenance"] = Provenance{0, d.value()}.to_json();
    write_json(a.out, j);
}

struct StudyArgs {
    std::string config;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<int> replicates;
    std::optional<std::string> distance;
    std::optional<unsigned> threads;
    int replicate = 0;
    int bins = 20;
    std::string out;
};

ExperimentConfig study_config(const StudyArgs& a)
{
    ExperimentConfig cfg;
    if (!a.config.empty()) {
        require_file(a.config);
        cfg = load_experiment_config(a.config);
    }
    for (const auto& o : a.overrides) {
        auto eq = o.find('=');
        if (eq == std::string::npos)
            throw InvalidParameter("override '" + o + "' is not section.key=value");
        cfg.set(o.substr(0, eq), o.substr(eq + 1));
    }
    if (a.seed)
        cfg.seed = *a.seed;
    if (a.replicates)
        cfg.replicates = *a.replicates;
    if (a.distance)
        cfg.distance_mode = parse_graph_distance_mode(*a.distance);
    if (a.threads)
        cfg.sabc.threads = *a.threads;
    if (cfg.network.generator == "file")
        require_file(cfg.network.path);
    cfg.validate();
    return cfg;
}

void write_study_network(const fs::path& dir, const ExperimentConfig& cfg, const Network& net)
{
    auto out = open_out(dir / "network.txt");
    out << "# netabc network rng_seed=" << cfg.seed << " config_digest=" << hex_digest(cfg.digest()) << '\n';
    write_edge_list(out, net);
}

void cmd_replicate(const StudyArgs& a)
{
    auto cfg = study_config(a);
    auto net = build_network(cfg.network, cfg.seed).network;
    auto paths = all_pairs_shortest_paths(net);
    auto report = run_replicate_study(cfg, net, paths, a.bins);

    fs::path dir(a.out);
    fs::create_directories(dir);
    write_study_network(dir, cfg, net);
    auto j = to_json(report);
    json files = json::array({"network.txt"});
    for (const auto& row : report.rows) {
        if (!row.ok)
            continue;
        char name[64];
        std::snprintf(name, sizeof name, "posterior_r%03d.csv", row.replicate);
        auto out = open_out(dir / name);
        write_posterior_csv(out, row.posterior, cfg.kind, cfg.provenance());
        files.push_back(name);
    }
    j["files"] = std::move(files);
    j["config"] = cfg.canonical();
    write_json(dir / "report.json", j);
    std::cerr << "replicates: " << report.rows.size() << ", failed: " << report.failures() << '\n';
}

void cmd_sensitivity(const StudyArgs& a)
{
    auto cfg = study_config(a);
    if (cfg.delta_t.empty())
        throw InvalidParameter("sensitivity needs experiment.delta_t");
    auto net = build_network(cfg.network, cfg.seed).network;
    auto paths = all_pairs_shortest_paths(net);
    auto report = run_sensitivity(cfg, net, paths, a.replicate);

    fs::path dir(a.out);
    fs::create_directories(dir);
    write_study_network(dir, cfg, net);
    auto j = to_json(report);
    json files = json::array({"network.txt"});
    for (const auto& entry : report.sweep) {
        if (!entry.ok)
            continue;
        auto name = "posterior_dt" + std::to_string(entry.delta_t) + ".csv";
        auto out = open_out(dir / name);
        write_posterior_csv(out, entry.posterior, cfg.kind, cfg.provenance());
        files.push_back(name);
    }
    j["files"] = std::move(files);
    j["config"] = cfg.canonical();
    write_json(dir / "report.json", j);
}

void add_sabc_options(CLI::App* cmd, SabcConfig& sabc)
{
    cmd->add_option("--particles", sabc.particles, "Population size")->capture_default_str();
    cmd->add_option("--steps", sabc.max_steps, "Maximum SABC steps")->capture_default_str();
    cmd->add_option("--cutoff", sabc.acceptance_cutoff, "Stop when the mean acceptance rate drops below this")
        ->capture_default_str();
    cmd->add_option("--velocity", sabc.velocity, "Annealing speed")->capture_default_str();
    cmd->add_option("--initial-quantile", sabc.initial_quantile)->capture_default_str();
    cmd->add_option("--resample-threshold", sabc.resample_threshold, "ESS fraction triggering resampling (0: off)")
        ->capture_default_str();
    cmd->add_option("--threads", sabc.threads, "Worker threads (0: all cores)");
    cmd->add_option("--rng-seed", sabc.seed)->capture_default_str();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Epidemic simulation and SABC inference on networks"};
    app.require_subcommand(1);

    GenNetArgs gen;
    auto* c_gen = app.add_subcommand("gen-net", "Generate a synthetic network");
    c_gen->add_option("--model", gen.model, "ba or er")->capture_default_str();
    c_gen->add_option("--n", gen.n)->capture_default_str();
    c_gen->add_option("--m", gen.m, "BA edges per new node")->capture_default_str();
    c_gen->add_option("--p", gen.p, "ER edge probability")->capture_default_str();
    c_gen->add_option("--rng-seed", gen.seed)->capture_default_str();
    c_gen->add_option("--out", gen.out)->required();

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "Simulate an epidemic and write its trace");
    c_sim->add_option("--model", sim.model, "simple or complex")->capture_default_str();
    c_sim->add_option("--theta", sim.theta)->capture_default_str();
    c_sim->add_option("--beta", sim.beta)->capture_default_str();
    c_sim->add_option("--gamma", sim.gamma)->capture_default_str();
    c_sim->add_option("--seed-node", sim.seed_node)->capture_default_str();
    c_sim->add_option("--t-max", sim.t_max)->capture_default_str();
    c_sim->add_option("--rng-seed", sim.seed)->capture_default_str();
    c_sim->add_option("--net", sim.net)->required();
    c_sim->add_option("--out", sim.out)->required();

    ObserveArgs obs;
    auto* c_obs = app.add_subcommand("observe", "Slice a trace to an observation window");
    c_obs->add_option("--trace", obs.trace)->required();
    c_obs->add_option("--net", obs.net, "Network (needed for traces without a meta record)");
    c_obs->add_option("--t0", obs.t0)->capture_default_str();
    c_obs->add_option("--t-max", obs.t_max)->capture_default_str();
    c_obs->add_option("--out", obs.out)->required();
    c_obs->add_option("--summary", obs.summary, "Also write the summary statistics as JSON");

    InferArgs inf;
    auto* c_inf = app.add_subcommand("infer", "Run SABC on an observed dataset");
    c_inf->add_option("--model", inf.model, "simple or complex (checked against the trace)");
    c_inf->add_option("--net", inf.net)->required();
    c_inf->add_option("--observed", inf.observed)->required();
    c_inf->add_option("--t0", inf.t0);
    c_inf->add_option("--t-max", inf.t_max);
    c_inf->add_option("--graph-distance", inf.distance, "verbatim or pair_mean")->capture_default_str();
    c_inf->add_option("--out", inf.out, "Output directory")->required();
    add_sabc_options(c_inf, inf.sabc);

    EstimateArgs est;
    auto* c_est = app.add_subcommand("estimate", "Bayes estimate from posterior samples");
    c_est->add_option("--posterior", est.posterior)->required();
    c_est->add_option("--net", est.net)->required();
    c_est->add_option("--out", est.out)->required();
    c_est->add_option("--true-seed", est.true_seed);
    c_est->add_flag("--medoid", est.medoid, "Minimize over the sampled points only");

    StudyArgs rep;
    auto* c_rep = app.add_subcommand("replicate", "Replicate study from an experiment config");
    StudyArgs sen;
    auto* c_sen = app.add_subcommand("sensitivity", "Observation-window sweep from an experiment config");
    for (auto [cmd, args] : {std::pair{c_rep, &rep}, std::pair{c_sen, &sen}}) {
        cmd->add_option("--config", args->config, "Experiment config file");
        cmd->add_option("--set", args->overrides, "Override: section.key=value")->take_all();
        cmd->add_option("--rng-seed", args->seed);
        cmd->add_option("--replicates", args->replicates);
        cmd->add_option("--graph-distance", args->distance, "verbatim or pair_mean");
        cmd->add_option("--threads", args->threads);
        cmd->add_option("--out", args->out, "Output directory")->required();
    }
    c_rep->add_option("--bins", rep.bins, "Histogram bins")->capture_default_str();
    c_sen->add_option("--replicate", sen.replicate, "Replicate index of the swept dataset")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : exit_invalid;
    }

    try {
        if (*c_gen)
            cmd_gen_net(gen);
        else if (*c_sim)
            cmd_simulate(sim);
        else if (*c_obs)
            cmd_observe(obs);
        else if (*c_inf)
            cmd_infer(inf);
        else if (*c_est)
            cmd_estimate(est);
        else if (*c_rep)
            cmd_replicate(rep);
        else if (*c_sen)
            cmd_sensitivity(sen);
    } catch (const InvalidParameter& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return exit_invalid;
    } catch (const ParseError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return exit_invalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_runtime;
    }
    return 0;
}
