#include "netabc/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "netabc/errors.hpp"

namespace netabc {

namespace {

std::string format_double(double v)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ','))
        out.push_back(cell);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

template <class T>
T parse_number(const std::string& text, std::size_t line)
{
    T value{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    while (first < last && *first == ' ')
        ++first;
    while (last > first && (last[-1] == ' ' || last[-1] == '\r'))
        --last;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw ParseError(line, "bad number '" + text + "'");
    return value;
}

std::vector<node_t> sorted_ids(const json& arr, node_t node_count, std::size_t line)
{
    if (!arr.is_array())
        throw ParseError(line, "expected an array of node ids");
    std::vector<node_t> ids;
    ids.reserve(arr.size());
    for (const auto& v : arr) {
        if (!v.is_number_integer())
            throw ParseError(line, "node id is not an integer");
        auto id = v.get<std::int64_t>();
        if (id < 0 || id >= node_count)
            throw ParseError(line, "node id " + std::to_string(id) + " out of range");
        ids.push_back(static_cast<node_t>(id));
    }
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
        throw ParseError(line, "duplicate node id");
    return ids;
}

} // namespace

json Provenance::to_json() const
{
    return {{"rng_seed", rng_seed}, {"config_digest", hex_digest(config_digest)}};
}

std::string hex_digest(std::uint64_t value)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

json step_to_json(const TraceStep& step, ContagionKind kind)
{
    json j;
    j["t"] = step.t;
    j["infected"] = step.infected;
    if (kind == ContagionKind::complex) {
        j["exposed"] = step.exposed;
        json ex = json::object();
        for (const auto& ne : step.exposures)
            ex[std::to_string(ne.node)] = ne.counts;
        j["exposures"] = std::move(ex);
    }
    return j;
}

void write_trace(std::ostream& out, const EpidemicTrace& trace, const std::optional<Provenance>& provenance)
{
    json meta;
    meta["model"] = to_string(trace.kind);
    meta["node_count"] = trace.node_count;
    meta["first_step"] = trace.first_step();
    if (trace.kind == ContagionKind::complex) {
        meta["prior_exposed"] = trace.prior_exposed;
        meta["seed_only"] = trace.seed_only;
    }
    if (provenance) {
        meta["rng_seed"] = provenance->rng_seed;
        meta["config_digest"] = hex_digest(provenance->config_digest);
    }
    out << json{{"meta", meta}}.dump() << '\n';
    for (const auto& step : trace.steps)
        out << step_to_json(step, trace.kind).dump() << '\n';
}

EpidemicTrace read_trace(std::istream& in, std::optional<node_t> node_count)
{
    EpidemicTrace trace;
    std::optional<ContagionKind> kind;
    std::vector<std::pair<std::size_t, json>> records;
    json prior_exposed;

    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (text.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ParseError(line, e.what());
        }
        if (!j.is_object())
            throw ParseError(line, "expected a JSON object");
        if (j.contains("meta")) {
            if (!records.empty())
                throw ParseError(line, "meta record after trace steps");
            const auto& meta = j["meta"];
            try {
                if (meta.contains("model"))
                    kind = parse_contagion_kind(meta["model"].get<std::string>());
                if (meta.contains("node_count"))
                    node_count = meta["node_count"].get<node_t>();
                if (meta.contains("prior_exposed"))
                    prior_exposed = meta["prior_exposed"];
                trace.seed_only = meta.value("seed_only", false);
            } catch (const json::exception& e) {
                throw ParseError(line, e.what());
            } catch (const InvalidParameter& e) {
                throw ParseError(line, e.what());
            }
            continue;
        }
        records.emplace_back(line, std::move(j));
    }

    if (!node_count || *node_count < 1)
        throw ParseError(line, "trace has no node count; supply the network");
    trace.node_count = *node_count;
    if (!kind) {
        bool any_exposed = std::any_of(records.begin(), records.end(),
                                       [](const auto& r) { return r.second.contains("exposed"); });
        kind = any_exposed ? ContagionKind::complex : ContagionKind::simple;
    }
    trace.kind = *kind;
    if (!prior_exposed.is_null())
        trace.prior_exposed = sorted_ids(prior_exposed, trace.node_count, 1);

    for (auto& [ln, j] : records) {
        TraceStep step;
        try {
            step.t = j.at("t").get<int>();
            step.infected = sorted_ids(j.at("infected"), trace.node_count, ln);
            if (trace.kind == ContagionKind::complex) {
                step.exposed = sorted_ids(j.value("exposed", json::array()), trace.node_count, ln);
                const json exposures = j.value("exposures", json::object());
                for (const auto& [key, counts] : exposures.items()) {
                    NodeExposures ne;
                    ne.node = parse_number<node_t>(key, ln);
                    ne.counts = counts.get<ExposureSummary>();
                    step.exposures.push_back(std::move(ne));
                }
                std::sort(step.exposures.begin(), step.exposures.end(),
                          [](const auto& a, const auto& b) { return a.node < b.node; });
            }
        } catch (const json::exception& e) {
            throw ParseError(ln, e.what());
        }
        if (!trace.steps.empty() && step.t != trace.steps.back().t + 1)
            throw ParseError(ln, "trace steps are not consecutive");
        trace.steps.push_back(std::move(step));
    }
    if (trace.steps.empty())
        throw ParseError(line, "trace has no steps");
    return trace;
}

EpidemicTrace read_trace_file(const std::string& path, std::optional<node_t> node_count)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    return read_trace(in, node_count);
}

json to_json(const SummaryBundle& bundle)
{
    json j;
    j["model"] = to_string(bundle.kind);
    j["t0"] = bundle.window.t0;
    j["t_max"] = bundle.window.t_max;
    j["node_count"] = bundle.node_count;
    j["s"] = bundle.s;
    j["G"] = bundle.G;
    if (bundle.kind == ContagionKind::complex) {
        j["e"] = bundle.e;
        j["ce"] = bundle.ce;
        j["H"] = bundle.H;
    }
    return j;
}

void write_posterior_csv(std::ostream& out, const PosteriorSample& sample, ContagionKind kind,
                         const Provenance& provenance)
{
    out << "# rng_seed=" << provenance.rng_seed << " config_digest=" << hex_digest(provenance.config_digest)
        << " observed_digest=" << hex_digest(sample.observed_digest) << '\n';
    out << (kind == ContagionKind::simple ? "theta" : "beta,gamma") << ",seed_node,distance\n";
    const std::size_t dim = kind == ContagionKind::simple ? 1 : 2;
    for (std::size_t i = 0; i < sample.particles.size(); ++i) {
        const auto& phi = sample.particles[i];
        if (phi.continuous.size() != dim)
            throw InvalidParameter("particle dimension does not match the model");
        for (double v : phi.continuous)
            out << format_double(v) << ',';
        out << phi.seed_node << ',' << format_double(sample.distances[i]) << '\n';
    }
}

PosteriorTable read_posterior_csv(std::istream& in)
{
    PosteriorTable table;
    std::string text;
    std::size_t line = 0;
    bool have_header = false;
    std::size_t dim = 1;
    while (std::getline(in, text)) {
        ++line;
        if (!text.empty() && text.back() == '\r')
            text.pop_back();
        if (text.empty() || text[0] == '#')
            continue;
        auto cells = split_csv(text);
        if (!have_header) {
            if (cells == std::vector<std::string>{"theta", "seed_node", "distance"}) {
                table.kind = ContagionKind::simple;
                dim = 1;
            } else if (cells == std::vector<std::string>{"beta", "gamma", "seed_node", "distance"}) {
                table.kind = ContagionKind::complex;
                dim = 2;
            } else {
                throw ParseError(line, "unrecognized posterior header");
            }
            have_header = true;
            continue;
        }
        if (cells.size() != dim + 2)
            throw ParseError(line, "expected " + std::to_string(dim + 2) + " columns");
        Phi phi;
        for (std::size_t k = 0; k < dim; ++k)
            phi.continuous.push_back(parse_number<double>(cells[k], line));
        phi.seed_node = parse_number<node_t>(cells[dim], line);
        table.particles.push_back(std::move(phi));
        table.distances.push_back(parse_number<double>(cells[dim + 1], line));
    }
    if (!have_header)
        throw ParseError(line, "missing posterior header");
    if (table.particles.empty())
        throw ParseError(line, "posterior has no samples");
    return table;
}

PosteriorTable read_posterior_csv_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    return read_posterior_csv(in);
}

json diagnostics_json(const PosteriorSample& sample, const Provenance& provenance)
{
    const auto& c = sample.config;
    json j;
    j["provenance"] = provenance.to_json();
    j["observed_digest"] = hex_digest(sample.observed_digest);
    j["config"] = {{"particles", c.particles},
                   {"max_steps", c.max_steps},
                   {"acceptance_cutoff", c.acceptance_cutoff},
                   {"velocity", c.velocity},
                   {"initial_quantile", c.initial_quantile},
                   {"resample_threshold", c.resample_threshold},
                   {"rate_window", c.rate_window},
                   {"seed", c.seed}};
    j["initial_tolerance"] = sample.initial_tolerance;
    j["final_tolerance"] = sample.final_tolerance;
    j["steps"] = sample.steps.size();
    j["stopped_by_cutoff"] = sample.stopped_by_cutoff;
    j["tolerance"] = sample.tolerance_trajectory();
    j["acceptance_rate"] = sample.acceptance_trajectory();
    json per_step = json::array();
    for (const auto& s : sample.steps) {
        per_step.push_back({{"step", s.step},
                            {"failed_simulations", s.failed_simulations},
                            {"truncation_rejections", s.truncation_rejections},
                            {"support_rejections", s.support_rejections},
                            {"covariance_fallback", s.covariance_fallback},
                            {"scale_floored", s.scale_floored},
                            {"resampled", s.resampled}});
    }
    j["step_details"] = std::move(per_step);
    return j;
}

json to_json(const Phi& phi, ContagionKind kind)
{
    json j;
    if (kind == ContagionKind::simple) {
        j["theta"] = phi.continuous.at(0);
    } else {
        j["beta"] = phi.continuous.at(0);
        j["gamma"] = phi.continuous.at(1);
    }
    j["seed_node"] = phi.seed_node;
    return j;
}

json to_json(const DistanceMarginal& marginal)
{
    return {{"reference", marginal.reference},
            {"mass", marginal.mass},
            {"node_count", marginal.node_count},
            {"average", marginal.average()}};
}

} // namespace netabc
