#include "netabc/summaries.hpp"

#include <algorithm>
#include <string>

#include "netabc/errors.hpp"

namespace netabc {

void ObservationWindow::validate() const
{
    if (!(0 <= t0 && t0 < t_max))
        throw InvalidParameter("observation window requires 0 <= t0 < T (got t0=" + std::to_string(t0) +
                               ", T=" + std::to_string(t_max) + ")");
}

namespace {

void check_covers(const EpidemicTrace& trace, const ObservationWindow& window)
{
    window.validate();
    if (trace.steps.empty() || window.t0 < trace.first_step() || window.t_max > trace.last_step())
        throw InvalidParameter("window [" + std::to_string(window.t0) + ", " + std::to_string(window.t_max) +
                               "] outside trace range [" + std::to_string(trace.first_step()) + ", " +
                               std::to_string(trace.last_step()) + "]");
    for (std::size_t k = 0; k < trace.steps.size(); ++k)
        if (trace.steps[k].t != trace.first_step() + static_cast<int>(k))
            throw InvalidParameter("trace steps are not consecutive");
}

SummaryBundle make_bundle(ContagionKind kind, const ObservationWindow& window, node_t n)
{
    SummaryBundle b;
    b.kind = kind;
    b.window = window;
    b.node_count = n;
    b.s.reserve(window.steps());
    b.G.reserve(window.steps());
    return b;
}

} // namespace

SummaryBundle summarize_simple(const EpidemicTrace& trace, const ObservationWindow& window, const Network& net)
{
    check_covers(trace, window);
    const node_t n = net.node_count();
    auto b = make_bundle(ContagionKind::simple, window, n);
    for (int t = window.t0; t <= window.t_max; ++t) {
        const auto& step = trace.at(t);
        b.s.push_back(static_cast<double>(step.infected.size()) / n);
        b.G.push_back(step.infected);
    }
    return b;
}

SummaryBundle summarize_complex(const EpidemicTrace& trace, const ObservationWindow& window, const Network& net)
{
    check_covers(trace, window);
    if (trace.kind != ContagionKind::complex)
        throw InvalidParameter("complex summaries need a complex-contagion trace");

    const node_t n = net.node_count();
    auto b = make_bundle(ContagionKind::complex, window, n);
    b.e.reserve(window.steps());
    b.ce.reserve(window.steps());
    b.H.reserve(window.steps());

    std::vector<char> ever(static_cast<std::size_t>(n), 0);
    for (node_t i : trace.prior_exposed)
        ever.at(static_cast<std::size_t>(i)) = 1;

    for (int t = trace.first_step(); t <= window.t_max; ++t) {
        const auto& step = trace.at(t);
        std::size_t first_time = 0;
        for (node_t i : step.exposed)
            if (!ever[i]) {
                ever[i] = 1;
                ++first_time;
            }
        if (t < window.t0)
            continue;
        b.s.push_back(static_cast<double>(step.infected.size()) / n);
        b.e.push_back(static_cast<double>(step.exposed.size()) / n);
        b.ce.push_back(static_cast<double>(first_time) / n);
        b.G.push_back(step.infected);
        b.H.push_back(step.exposed);
    }
    return b;
}

SummaryBundle summarize(const EpidemicTrace& trace, const ObservationWindow& window, const Network& net)
{
    return trace.kind == ContagionKind::simple ? summarize_simple(trace, window, net)
                                               : summarize_complex(trace, window, net);
}

SummaryBundle summarize(const EpidemicEvents& events, const ObservationWindow& window)
{
    window.validate();
    if (window.t_max > events.t_max)
        throw InvalidParameter("window extends past the simulated horizon");

    const node_t n = events.node_count();
    const bool complex = events.kind == ContagionKind::complex;
    auto b = make_bundle(events.kind, window, n);
    for (int t = window.t0; t <= window.t_max; ++t) {
        auto& g = b.G.emplace_back();
        std::vector<node_t>* h = complex ? &b.H.emplace_back() : nullptr;
        std::size_t first_time = 0;
        for (node_t i = 0; i < n; ++i) {
            if (events.infected_at(i, t)) {
                g.push_back(i);
            } else if (complex && events.exposed_at(i, t)) {
                h->push_back(i);
                if (events.exposure_time[i] == t)
                    ++first_time;
            }
        }
        b.s.push_back(static_cast<double>(g.size()) / n);
        if (complex) {
            b.e.push_back(static_cast<double>(h->size()) / n);
            b.ce.push_back(static_cast<double>(first_time) / n);
        }
    }
    return b;
}

EpidemicTrace observe(const EpidemicTrace& trace, const ObservationWindow& window)
{
    check_covers(trace, window);
    EpidemicTrace out;
    out.kind = trace.kind;
    out.node_count = trace.node_count;
    out.seed_only = trace.seed_only;

    std::vector<node_t> prior(trace.prior_exposed);
    for (int t = trace.first_step(); t < window.t0; ++t) {
        const auto& ex = trace.at(t).exposed;
        prior.insert(prior.end(), ex.begin(), ex.end());
    }
    std::sort(prior.begin(), prior.end());
    prior.erase(std::unique(prior.begin(), prior.end()), prior.end());
    out.prior_exposed = std::move(prior);

    auto first = trace.steps.begin() + (window.t0 - trace.first_step());
    out.steps.assign(first, first + static_cast<std::ptrdiff_t>(window.steps()));
    return out;
}

} // namespace netabc
