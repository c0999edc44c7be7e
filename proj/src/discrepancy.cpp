#include "netabc/discrepancy.hpp"

#include <cmath>

#include "netabc/errors.hpp"

namespace netabc {

const char* to_string(GraphDistanceMode mode) { return mode == GraphDistanceMode::verbatim ? "verbatim" : "pair_mean"; }

GraphDistanceMode parse_graph_distance_mode(std::string_view name)
{
    if (name == "verbatim")
        return GraphDistanceMode::verbatim;
    if (name == "pair_mean" || name == "pair-mean")
        return GraphDistanceMode::pair_mean;
    throw InvalidParameter("unknown graph distance mode '" + std::string(name) + "'");
}

double Discrepancy::component(std::string_view name) const
{
    for (const auto& c : components)
        if (c.name == name)
            return c.value;
    throw std::out_of_range("no discrepancy component '" + std::string(name) + "'");
}

double euclid(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size())
        throw InvalidParameter("euclidean distance needs equal-length sequences");
    long double acc = 0.0L;
    for (std::size_t k = 0; k < a.size(); ++k) {
        long double d = static_cast<long double>(a[k]) - b[k];
        acc += d * d;
    }
    return static_cast<double>(std::sqrt(acc));
}

namespace {

// Shared final reduction so the direct and tabulated routes agree bit for bit.
struct StepSums {
    GraphDistanceMode mode;
    std::uint64_t total = 0;
    long double mean_acc = 0.0L;

    void add(std::uint64_t hop_sum, std::size_t size1, std::size_t size2)
    {
        if (mode == GraphDistanceMode::verbatim)
            total += hop_sum;
        else if (size1 > 0 && size2 > 0)
            mean_acc += static_cast<long double>(hop_sum) / (static_cast<long double>(size1) * size2);
    }

    double finish(int rho_max, const ObservationWindow& window) const
    {
        if (rho_max == 0)
            return 0.0;
        const long double scale = static_cast<long double>(rho_max) * (window.t_max - window.t0);
        const long double sum = mode == GraphDistanceMode::verbatim ? static_cast<long double>(total) : mean_acc;
        return static_cast<double>(sum / scale);
    }
};

void check_steps(std::size_t a, std::size_t b, const ObservationWindow& window)
{
    window.validate();
    if (a != window.steps() || b != window.steps())
        throw InvalidParameter("node-set sequences do not cover the observation window");
}

void check_same_window(const SummaryBundle& x1, const SummaryBundle& x2)
{
    if (!(x1.window == x2.window))
        throw InvalidParameter("summary bundles cover different observation windows");
    if (x1.node_count != x2.node_count)
        throw InvalidParameter("summary bundles come from networks of different size");
}

[[noreturn]] void throw_unreachable(node_t i)
{
    throw UnreachableError("node " + std::to_string(i) + " cannot reach part of the compared node set");
}

} // namespace

double graph_distance(std::span<const std::vector<node_t>> g1, std::span<const std::vector<node_t>> g2,
                      const PathTable& paths, const ObservationWindow& window, GraphDistanceMode mode)
{
    check_steps(g1.size(), g2.size(), window);
    StepSums sums{mode};
    for (std::size_t t = 0; t < g1.size(); ++t) {
        std::uint64_t hop_sum = 0;
        for (node_t i : g1[t]) {
            auto row = paths.row(i);
            for (node_t j : g2[t]) {
                auto d = row[j];
                if (d == PathTable::unreachable)
                    throw_unreachable(i);
                hop_sum += d;
            }
        }
        sums.add(hop_sum, g1[t].size(), g2[t].size());
    }
    return sums.finish(paths.rho_max(), window);
}

namespace {

Discrepancy assemble(const SummaryBundle& x1, const SummaryBundle& x2, bool complex, double d_g, double d_h)
{
    Discrepancy d;
    d.components.push_back({"s", euclid(x1.s, x2.s)});
    if (complex) {
        d.components.push_back({"e", euclid(x1.e, x2.e)});
        d.components.push_back({"ce", euclid(x1.ce, x2.ce)});
    }
    d.components.push_back({"G", d_g});
    if (complex)
        d.components.push_back({"H", d_h});
    for (const auto& c : d.components)
        d.value += c.value;
    return d;
}

} // namespace

Discrepancy discrepancy_simple(const SummaryBundle& x1, const SummaryBundle& x2, const PathTable& paths,
                               GraphDistanceMode mode)
{
    check_same_window(x1, x2);
    double d_g = graph_distance(x1.G, x2.G, paths, x1.window, mode);
    return assemble(x1, x2, false, d_g, 0.0);
}

Discrepancy discrepancy_complex(const SummaryBundle& x1, const SummaryBundle& x2, const PathTable& paths,
                                GraphDistanceMode mode)
{
    check_same_window(x1, x2);
    if (x1.kind != ContagionKind::complex || x2.kind != ContagionKind::complex)
        throw InvalidParameter("complex discrepancy needs two complex-contagion bundles");
    double d_g = graph_distance(x1.G, x2.G, paths, x1.window, mode);
    double d_h = graph_distance(x1.H, x2.H, paths, x1.window, mode);
    return assemble(x1, x2, true, d_g, d_h);
}

Discrepancy discrepancy(const SummaryBundle& x1, const SummaryBundle& x2, const PathTable& paths,
                        GraphDistanceMode mode)
{
    return x1.kind == ContagionKind::complex && x2.kind == ContagionKind::complex
               ? discrepancy_complex(x1, x2, paths, mode)
               : discrepancy_simple(x1, x2, paths, mode);
}

/*------------------------------------------------------------------*/
/* DiscrepancyTarget                                                */
/*------------------------------------------------------------------*/

DiscrepancyTarget::DiscrepancyTarget(SummaryBundle observed, const PathTable& paths, GraphDistanceMode mode)
    : observed_(std::move(observed)), mode_(mode), rho_max_(paths.rho_max())
{
    if (observed_.node_count != paths.node_count())
        throw InvalidParameter("observed data and path table disagree on node count");
    check_steps(observed_.G.size(), observed_.s.size(), observed_.window);
    infected_ = tabulate(observed_.G, paths);
    if (observed_.kind == ContagionKind::complex) {
        check_steps(observed_.H.size(), observed_.e.size(), observed_.window);
        exposed_ = tabulate(observed_.H, paths);
    }
}

DiscrepancyTarget::SetTable DiscrepancyTarget::tabulate(const std::vector<std::vector<node_t>>& sets,
                                                        const PathTable& paths) const
{
    const auto n = static_cast<std::size_t>(paths.node_count());
    SetTable table;
    table.hop_sum.assign(sets.size() * n, 0);
    table.unreachable.assign(sets.size() * n, 0);
    for (std::size_t t = 0; t < sets.size(); ++t) {
        table.size.push_back(sets[t].size());
        auto* sum = table.hop_sum.data() + t * n;
        auto* bad = table.unreachable.data() + t * n;
        for (node_t j : sets[t]) {
            auto row = paths.row(j);
            for (std::size_t i = 0; i < n; ++i) {
                if (row[i] == PathTable::unreachable)
                    ++bad[i];
                else
                    sum[i] += row[i];
            }
        }
    }
    return table;
}

double DiscrepancyTarget::set_distance(const SetTable& table, std::span<const std::vector<node_t>> sets) const
{
    check_steps(sets.size(), table.size.size(), observed_.window);
    const auto n = static_cast<std::size_t>(observed_.node_count);
    StepSums sums{mode_};
    for (std::size_t t = 0; t < sets.size(); ++t) {
        const auto* sum = table.hop_sum.data() + t * n;
        const auto* bad = table.unreachable.data() + t * n;
        std::uint64_t hop_sum = 0;
        for (node_t i : sets[t]) {
            if (bad[i])
                throw_unreachable(i);
            hop_sum += sum[i];
        }
        sums.add(hop_sum, sets[t].size(), table.size[t]);
    }
    return sums.finish(rho_max_, observed_.window);
}

Discrepancy DiscrepancyTarget::evaluate(const SummaryBundle& simulated) const
{
    check_same_window(simulated, observed_);
    const bool complex = observed_.kind == ContagionKind::complex;
    if (complex && simulated.kind != ContagionKind::complex)
        throw InvalidParameter("complex observed data needs a complex-contagion simulation");

    double d_g = set_distance(infected_, simulated.G);
    double d_h = complex ? set_distance(exposed_, simulated.H) : 0.0;
    return assemble(simulated, observed_, complex, d_g, d_h);
}

Discrepancy DiscrepancyTarget::evaluate(const EpidemicEvents& simulated) const
{
    return evaluate(summarize(simulated, observed_.window));
}

} // namespace netabc
