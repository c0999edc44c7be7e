#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "../support.hpp"
#include "netabc/discrepancy.hpp"
#include "netabc/summaries.hpp"

using namespace netabc;
using namespace netabc::test;

namespace {

struct Fixture {
    Network net;
    PathTable paths;
    std::vector<EpidemicTrace> traces;
};

Fixture fixture(ContagionKind kind)
{
    Fixture f;
    auto rng = make_rng(606);
    f.net = generate_ba(90, 3, rng);
    f.paths = all_pairs_shortest_paths(f.net);
    for (int r = 0; r < 12; ++r) {
        node_t seed = static_cast<node_t>(7 * r % 90);
        if (kind == ContagionKind::simple)
            f.traces.push_back(simulate_simple(f.net, {uniform01(rng), seed}, 40, rng));
        else
            f.traces.push_back(simulate_complex(f.net, {uniform01(rng), uniform01(rng), seed}, {}, 40, rng));
    }
    return f;
}

} // namespace

TEST_CASE("summary bundle invariants")
{
    for (auto kind : {ContagionKind::simple, ContagionKind::complex}) {
        auto f = fixture(kind);
        for (const auto& tr : f.traces) {
            ObservationWindow w{10, 40};
            auto b = summarize(tr, w, f.net);
            REQUIRE(b.s.size() == w.steps());
            double max_e = 0.0, max_s = 0.0, sum_ce = 0.0;
            for (std::size_t k = 0; k < b.s.size(); ++k) {
                CHECK(b.s[k] >= 0.0);
                CHECK(b.s[k] <= 1.0);
                if (k > 0)
                    CHECK(b.s[k] >= b.s[k - 1]);
                CHECK(b.G[k] == tr.at(w.t0 + static_cast<int>(k)).infected);
                CHECK(b.s[k] == static_cast<double>(b.G[k].size()) / f.net.node_count());
                max_s = std::max(max_s, b.s[k]);
                if (kind == ContagionKind::complex) {
                    CHECK(b.e[k] >= 0.0);
                    CHECK(b.e[k] <= 1.0);
                    CHECK(b.ce[k] >= 0.0);
                    CHECK(b.ce[k] <= b.e[k]);
                    CHECK(b.H[k] == tr.at(w.t0 + static_cast<int>(k)).exposed);
                    max_e = std::max(max_e, b.e[k]);
                    sum_ce += b.ce[k];
                }
            }
            if (kind == ContagionKind::complex) {
                CHECK(sum_ce <= max_e + max_s + 1e-12);
                // ce is bounded by the growth of the ever-exposed set.
                std::vector<char> ever(f.net.node_count(), 0);
                std::size_t ever_count = 0;
                for (int t = 0; t <= 40; ++t) {
                    std::size_t before = ever_count;
                    for (node_t i : tr.at(t).exposed)
                        if (!ever[i]) {
                            ever[i] = 1;
                            ++ever_count;
                        }
                    if (t >= w.t0) {
                        double inc = static_cast<double>(ever_count - before) / f.net.node_count();
                        CHECK(b.ce[t - w.t0] <= inc + 1e-15);
                    }
                }
            }
            auto again = summarize(tr, w, f.net);
            CHECK(again.s == b.s);
            CHECK(again.ce == b.ce);
            CHECK(again.G == b.G);
        }
    }
}

TEST_CASE("observe does not mutate its input")
{
    auto f = fixture(ContagionKind::complex);
    for (const auto& tr : f.traces) {
        auto copy = tr;
        auto sliced = observe(tr, {15, 30});
        CHECK(sliced.steps.size() == 16);
        REQUIRE(copy.steps.size() == tr.steps.size());
        for (std::size_t k = 0; k < tr.steps.size(); ++k) {
            CHECK(copy.steps[k].infected == tr.steps[k].infected);
            CHECK(copy.steps[k].exposed == tr.steps[k].exposed);
        }
    }
}

TEST_CASE("discrepancy symmetry, nonnegativity and additivity")
{
    for (auto kind : {ContagionKind::simple, ContagionKind::complex}) {
        auto f = fixture(kind);
        ObservationWindow w{20, 40};
        std::vector<SummaryBundle> bundles;
        for (const auto& tr : f.traces)
            bundles.push_back(summarize(tr, w, f.net));
        for (std::size_t a = 0; a < bundles.size(); ++a)
            for (std::size_t b = 0; b < bundles.size(); ++b)
                for (auto mode : {GraphDistanceMode::verbatim, GraphDistanceMode::pair_mean}) {
                    auto d = discrepancy(bundles[a], bundles[b], f.paths, mode);
                    auto r = discrepancy(bundles[b], bundles[a], f.paths, mode);
                    CHECK(d.value == r.value);
                    CHECK(std::isfinite(d.value));
                    CHECK(d.value >= 0.0);
                    CHECK(d.components.size() == (kind == ContagionKind::simple ? 2u : 5u));
                    long double sum = 0.0L;
                    for (const auto& c : d.components) {
                        CHECK(c.value >= 0.0);
                        sum += c.value;
                    }
                    CHECK(d.value == doctest::Approx(static_cast<double>(sum)).epsilon(1e-14));
                }
    }
}

TEST_CASE("self-distance equals the triple-loop value, not zero")
{
    auto f = fixture(ContagionKind::simple);
    auto fw = floyd_warshall(f.net);
    ObservationWindow w{20, 40};
    for (const auto& tr : f.traces) {
        auto b = summarize(tr, w, f.net);
        double self = graph_distance(b.G, b.G, f.paths, w);
        CHECK(self == doctest::Approx(naive_graph_distance(b.G, b.G, fw, 20, 40, false)).epsilon(1e-12));
        if (b.G.back().size() > 1)
            CHECK(self > 0.0);
    }
}

TEST_CASE("graph distance is invariant under joint scaling of hops and diameter")
{
    auto f = fixture(ContagionKind::simple);
    for (int factor : {2, 3, 7}) {
        std::vector<PathTable::hops_t> scaled;
        for (node_t i = 0; i < f.net.node_count(); ++i)
            for (auto h : f.paths.row(i))
                scaled.push_back(static_cast<PathTable::hops_t>(h * factor));
        PathTable big(f.net.node_count(), scaled, f.paths.rho_max() * factor);
        ObservationWindow w{20, 40};
        for (std::size_t a = 0; a + 1 < f.traces.size(); ++a) {
            auto x = summarize(f.traces[a], w, f.net), y = summarize(f.traces[a + 1], w, f.net);
            CHECK(graph_distance(x.G, y.G, big, w) ==
                  doctest::Approx(graph_distance(x.G, y.G, f.paths, w)).epsilon(1e-14));
        }
    }
}
