#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "netabc/contagion.hpp"
#include "netabc/estimation.hpp"
#include "netabc/inference.hpp"
#include "netabc/summaries.hpp"

namespace netabc {

using json = nlohmann::ordered_json;

/// Provenance stamped on every artifact.
struct Provenance {
    std::uint64_t rng_seed = 0;
    std::uint64_t config_digest = 0;

    json to_json() const;
};

std::string hex_digest(std::uint64_t value);

// --- traces: JSON lines, optional leading {"meta": {...}} record ----------

json step_to_json(const TraceStep& step, ContagionKind kind);
void write_trace(std::ostream& out, const EpidemicTrace& trace, const std::optional<Provenance>& provenance = {});

/// Reads a trace. Without a meta record the model is inferred from the
/// presence of "exposed" keys and `node_count` must be supplied.
EpidemicTrace read_trace(std::istream& in, std::optional<node_t> node_count = {});
EpidemicTrace read_trace_file(const std::string& path, std::optional<node_t> node_count = {});

json to_json(const SummaryBundle& bundle);

// --- posterior samples ---------------------------------------------------

void write_posterior_csv(std::ostream& out, const PosteriorSample& sample, ContagionKind kind,
                         const Provenance& provenance);

struct PosteriorTable {
    ContagionKind kind = ContagionKind::simple;
    std::vector<Phi> particles;
    std::vector<double> distances;
};
PosteriorTable read_posterior_csv(std::istream& in);
PosteriorTable read_posterior_csv_file(const std::string& path);

json diagnostics_json(const PosteriorSample& sample, const Provenance& provenance);

json to_json(const Phi& phi, ContagionKind kind);
json to_json(const DistanceMarginal& marginal);

} // namespace netabc
