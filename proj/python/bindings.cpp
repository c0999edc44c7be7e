#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "netabc/contagion.hpp"
#include "netabc/discrepancy.hpp"
#include "netabc/errors.hpp"
#include "netabc/estimation.hpp"
#include "netabc/experiment.hpp"
#include "netabc/graph.hpp"
#include "netabc/inference.hpp"
#include "netabc/io.hpp"
#include "netabc/summaries.hpp"

namespace py = pybind11;
using namespace netabc;

namespace {

std::vector<node_t> to_vector(std::span<const node_t> s) { return {s.begin(), s.end()}; }

py::dict step_dict(const TraceStep& s, ContagionKind kind)
{
    py::dict d;
    d["t"] = s.t;
    d["infected"] = s.infected;
    if (kind == ContagionKind::complex) {
        d["exposed"] = s.exposed;
        py::dict ex;
        for (const auto& ne : s.exposures)
            ex[py::int_(ne.node)] = ne.counts;
        d["exposures"] = ex;
    }
    return d;
}

// Posterior as plain Python data: one dict per particle plus diagnostics.
py::dict posterior_dict(const PosteriorSample& p, ContagionKind kind)
{
    py::list particles;
    for (std::size_t k = 0; k < p.particles.size(); ++k) {
        py::dict row;
        const auto& phi = p.particles[k];
        if (kind == ContagionKind::simple) {
            row["theta"] = phi.continuous[0];
        } else {
            row["beta"] = phi.continuous[0];
            row["gamma"] = phi.continuous[1];
        }
        row["seed_node"] = phi.seed_node;
        row["distance"] = p.distances[k];
        particles.append(row);
    }
    py::dict out;
    out["particles"] = particles;
    out["tolerance"] = p.tolerance_trajectory();
    out["acceptance_rate"] = p.acceptance_trajectory();
    out["stopped_by_cutoff"] = p.stopped_by_cutoff;
    out["steps"] = p.steps.size();
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Network epidemic simulation and simulated-annealing ABC";

    py::register_exception<InvalidParameter>(m, "InvalidParameter", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<UnreachableError>(m, "UnreachableError", PyExc_RuntimeError);

    py::enum_<ContagionKind>(m, "Model").value("simple", ContagionKind::simple).value("complex",
                                                                                      ContagionKind::complex);
    py::enum_<GraphDistanceMode>(m, "GraphDistance")
        .value("verbatim", GraphDistanceMode::verbatim)
        .value("pair_mean", GraphDistanceMode::pair_mean);

    py::class_<Network>(m, "Network")
        .def_static(
            "from_edges",
            [](node_t n, const std::vector<Edge>& edges) { return Network::from_edges(n, edges); }, py::arg("n"),
            py::arg("edges"))
        .def_property_readonly("node_count", &Network::node_count)
        .def_property_readonly("edge_count", &Network::edge_count)
        .def("neighbors", [](const Network& g, node_t i) { return to_vector(g.neighbors(i)); })
        .def("degree", &Network::degree)
        .def("has_edge", &Network::has_edge)
        .def("edges", &Network::edges)
        .def("__repr__", [](const Network& g) {
            return "<Network nodes=" + std::to_string(g.node_count()) + " edges=" + std::to_string(g.edge_count()) +
                   ">";
        });

    m.def(
        "generate_ba",
        [](node_t n, int mm, std::uint64_t seed) {
            auto rng = make_rng(seed);
            return generate_ba(n, mm, rng);
        },
        py::arg("n"), py::arg("m"), py::arg("rng_seed") = 1);
    m.def(
        "generate_er",
        [](node_t n, double p, std::uint64_t seed) {
            auto rng = make_rng(seed);
            return generate_er(n, p, rng);
        },
        py::arg("n"), py::arg("p"), py::arg("rng_seed") = 1);
    m.def(
        "load_edge_list",
        [](const std::string& path) {
            auto loaded = load_edge_list_file(path);
            return py::make_tuple(loaded.network, loaded.labels);
        },
        py::arg("path"), "Returns (network, original labels by dense id).");

    py::class_<PathTable>(m, "PathTable")
        .def(py::init([](const Network& g) { return all_pairs_shortest_paths(g); }), py::arg("network"))
        .def("hops", [](const PathTable& p, node_t i, node_t j) -> py::object {
            if (!p.reachable(i, j))
                return py::none();
            return py::int_(p.hops(i, j));
        })
        .def_property_readonly("rho_max", &PathTable::rho_max);

    py::class_<SigmoidConfig>(m, "SigmoidConfig")
        .def(py::init<>())
        .def_readwrite("eps_low", &SigmoidConfig::eps_low)
        .def_readwrite("eps_high", &SigmoidConfig::eps_high)
        .def_readwrite("g", &SigmoidConfig::g);

    m.def("p_infect", &p_infect, py::arg("k"), py::arg("degree"), py::arg("gamma"),
          py::arg("sigmoid") = SigmoidConfig{});
    m.def(
        "infection_at_last_exposure_prob",
        [](const std::vector<std::uint32_t>& summary, int degree, double gamma, const SigmoidConfig& cfg) {
            return infection_at_last_exposure_prob(summary, degree, gamma, cfg);
        },
        py::arg("summary"), py::arg("degree"), py::arg("gamma"), py::arg("sigmoid") = SigmoidConfig{});

    py::class_<EpidemicTrace>(m, "Trace")
        .def_readonly("model", &EpidemicTrace::kind)
        .def_readonly("node_count", &EpidemicTrace::node_count)
        .def_property_readonly("first_step", &EpidemicTrace::first_step)
        .def_property_readonly("last_step", &EpidemicTrace::last_step)
        .def("infected", [](const EpidemicTrace& t, int step) { return t.at(step).infected; })
        .def("exposed", [](const EpidemicTrace& t, int step) { return t.at(step).exposed; })
        .def("steps",
             [](const EpidemicTrace& t) {
                 py::list out;
                 for (const auto& s : t.steps)
                     out.append(step_dict(s, t.kind));
                 return out;
             })
        .def("observe", [](const EpidemicTrace& t, int t0, int t_max) { return observe(t, {t0, t_max}); })
        .def("to_jsonl",
             [](const EpidemicTrace& t) {
                 std::ostringstream out;
                 write_trace(out, t, std::nullopt);
                 return out.str();
             })
        .def_static(
            "from_jsonl",
            [](const std::string& text, std::optional<node_t> n) {
                std::istringstream in(text);
                return read_trace(in, n);
            },
            py::arg("text"), py::arg("node_count") = py::none());

    m.def(
        "simulate_simple",
        [](const Network& g, double theta, node_t seed_node, int t_max, std::uint64_t seed) {
            auto rng = make_rng(seed);
            return simulate_simple(g, {theta, seed_node}, t_max, rng);
        },
        py::arg("network"), py::arg("theta"), py::arg("seed_node"), py::arg("t_max"), py::arg("rng_seed") = 1);
    m.def(
        "simulate_complex",
        [](const Network& g, double beta, double gamma, node_t seed_node, int t_max, std::uint64_t seed,
           const SigmoidConfig& cfg) {
            auto rng = make_rng(seed);
            return simulate_complex(g, {beta, gamma, seed_node}, cfg, t_max, rng);
        },
        py::arg("network"), py::arg("beta"), py::arg("gamma"), py::arg("seed_node"), py::arg("t_max"),
        py::arg("rng_seed") = 1, py::arg("sigmoid") = SigmoidConfig{});

    m.def(
        "summarize",
        [](const EpidemicTrace& t, const Network& g, int t0, int t_max) {
            auto b = summarize(t, {t0, t_max}, g);
            py::dict d;
            d["s"] = b.s;
            d["G"] = b.G;
            if (b.kind == ContagionKind::complex) {
                d["e"] = b.e;
                d["ce"] = b.ce;
                d["H"] = b.H;
            }
            return d;
        },
        py::arg("trace"), py::arg("network"), py::arg("t0"), py::arg("t_max"));

    m.def(
        "discrepancy",
        [](const EpidemicTrace& a, const EpidemicTrace& b, const Network& g, const PathTable& paths, int t0,
           int t_max, GraphDistanceMode mode) {
            ObservationWindow w{t0, t_max};
            auto d = discrepancy(summarize(a, w, g), summarize(b, w, g), paths, mode);
            py::dict out;
            out["value"] = d.value;
            for (const auto& c : d.components)
                out[py::str(c.name)] = c.value;
            return out;
        },
        py::arg("a"), py::arg("b"), py::arg("network"), py::arg("paths"), py::arg("t0"), py::arg("t_max"),
        py::arg("graph_distance") = GraphDistanceMode::verbatim);

    m.def(
        "infer",
        [](const Network& g, const EpidemicTrace& observed, int t0, int t_max, std::size_t particles, int steps,
           std::uint64_t seed, GraphDistanceMode mode, double cutoff, unsigned threads) {
            SabcConfig cfg;
            cfg.particles = particles;
            cfg.max_steps = steps;
            cfg.seed = seed;
            cfg.acceptance_cutoff = cutoff;
            cfg.threads = threads;
            auto paths = all_pairs_shortest_paths(g);
            InferenceResult res;
            {
                py::gil_scoped_release release;
                res = run_inference(g, paths, observed, {t0, t_max}, cfg, mode);
            }
            auto out = posterior_dict(res.posterior, observed.kind);
            py::dict est;
            const auto& phi = res.estimate.phi;
            if (observed.kind == ContagionKind::simple) {
                est["theta"] = phi.continuous[0];
            } else {
                est["beta"] = phi.continuous[0];
                est["gamma"] = phi.continuous[1];
            }
            est["seed_node"] = phi.seed_node;
            est["expected_loss"] = res.estimate.expected_loss;
            out["estimate"] = est;
            return out;
        },
        py::arg("network"), py::arg("observed"), py::arg("t0"), py::arg("t_max"), py::arg("particles") = 1000,
        py::arg("steps") = 200, py::arg("rng_seed") = 1, py::arg("graph_distance") = GraphDistanceMode::verbatim,
        py::arg("cutoff") = 1e-4, py::arg("threads") = 0);

    m.def(
        "bayes_estimate",
        [](const std::vector<std::vector<double>>& continuous, const std::vector<node_t>& seeds, const Network& g,
           bool medoid) {
            if (continuous.size() != seeds.size())
                throw InvalidParameter("continuous values and seed nodes differ in length");
            std::vector<Phi> samples;
            for (std::size_t k = 0; k < seeds.size(); ++k)
                samples.push_back({continuous[k], seeds[k]});
            auto paths = all_pairs_shortest_paths(g);
            auto est = bayes_estimate(samples, g, paths, medoid ? EstimatorKind::medoid : EstimatorKind::full);
            return py::make_tuple(est.phi.continuous, est.phi.seed_node, est.expected_loss);
        },
        py::arg("continuous"), py::arg("seed_nodes"), py::arg("network"), py::arg("medoid") = false,
        "Returns (continuous estimate, seed node, expected loss).");
}
