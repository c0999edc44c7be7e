#include <doctest.h>

#include "../support.hpp"
#include "netabc/errors.hpp"
#include "netabc/summaries.hpp"

using namespace netabc;
using namespace netabc::test;

namespace {

EpidemicTrace hand_simple()
{
    EpidemicTrace tr;
    tr.kind = ContagionKind::simple;
    tr.node_count = 5;
    tr.steps = {{0, {0}, {}, {}}, {1, {0, 1}, {}, {}}, {2, {0, 1, 2}, {}, {}}, {3, {0, 1, 2, 3}, {}, {}}};
    return tr;
}

// Node 3 exposed at t=1, re-exposed at t=2, infected at t=3. Node 4 exposed
// from t=2 on.
EpidemicTrace hand_complex()
{
    EpidemicTrace tr;
    tr.kind = ContagionKind::complex;
    tr.node_count = 5;
    tr.steps = {
        {0, {0, 1}, {}, {}},
        {1, {0, 1, 2}, {3}, {{3, {0, 1}}}},
        {2, {0, 1, 2}, {3, 4}, {{3, {0, 2}}, {4, {1}}}},
        {3, {0, 1, 2, 3}, {4}, {{4, {1}}}},
    };
    return tr;
}

} // namespace

TEST_CASE("simple summaries on a hand-built trace")
{
    auto net = path_graph(5);
    auto b = summarize(hand_simple(), {1, 3}, net);
    CHECK(b.s == std::vector<double>{0.4, 0.6, 0.8});
    REQUIRE(b.G.size() == 3);
    CHECK(b.G[0] == std::vector<node_t>{0, 1});
    CHECK(b.G[2] == std::vector<node_t>{0, 1, 2, 3});
    CHECK(b.e.empty());
    CHECK(b.H.empty());
}

TEST_CASE("simple summaries: zero rate and full infection")
{
    auto rng = make_rng(1);
    auto net = generate_ba(100, 4, rng);
    auto tr = simulate_simple(net, {0.0, 7}, 30, rng);
    auto b = summarize(tr, {20, 30}, net);
    for (double s : b.s)
        CHECK(s == 0.01);

    auto full = simulate_simple(complete_graph(4), {1.0, 0}, 60, rng);
    auto bf = summarize(full, {50, 60}, complete_graph(4));
    for (double s : bf.s)
        CHECK(s == 1.0);
}

TEST_CASE("complex summaries with re-exposures")
{
    auto net = path_graph(5);
    auto b = summarize(hand_complex(), {0, 3}, net);
    CHECK(b.e == std::vector<double>{0.0, 0.2, 0.4, 0.2});
    CHECK(b.ce == std::vector<double>{0.0, 0.2, 0.2, 0.0});
    CHECK(b.H[2] == std::vector<node_t>{3, 4});
    CHECK(b.s == std::vector<double>{0.4, 0.6, 0.6, 0.8});
}

TEST_CASE("first exposures respect history before the window")
{
    auto net = path_graph(5);
    auto full = hand_complex();
    auto from_full = summarize(full, {2, 3}, net);
    CHECK(from_full.ce == std::vector<double>{0.2, 0.0});

    auto observed = observe(full, {2, 3});
    CHECK(observed.prior_exposed == std::vector<node_t>{3});
    CHECK(summarize(observed, {2, 3}, net).ce == from_full.ce);

    // External data without history: everything exposed at t0 is new.
    observed.prior_exposed.clear();
    CHECK(summarize(observed, {2, 3}, net).ce == std::vector<double>{0.4, 0.0});
}

TEST_CASE("complex summaries: beta zero")
{
    auto rng = make_rng(2);
    auto net = generate_ba(50, 3, rng);
    auto b = summarize(simulate_complex(net, {0.0, 0.3, 0}, {}, 10, rng), {0, 10}, net);
    for (std::size_t k = 1; k < b.e.size(); ++k) {
        CHECK(b.e[k] == 0.0);
        CHECK(b.ce[k] == 0.0);
    }
}

TEST_CASE("event-based summaries equal trace-based ones")
{
    auto rng = make_rng(3);
    auto net = generate_ba(80, 3, rng);
    for (std::uint64_t s = 0; s < 5; ++s) {
        auto a = make_rng(40 + s), c = make_rng(40 + s);
        auto tr = simulate_complex(net, {0.7, 0.3, static_cast<node_t>(s)}, {}, 40, a);
        auto ev = simulate_complex_events(net, {0.7, 0.3, static_cast<node_t>(s)}, {}, 40, c);
        auto x = summarize(tr, {10, 40}, net);
        auto y = summarize(ev, {10, 40});
        CHECK(x.s == y.s);
        CHECK(x.e == y.e);
        CHECK(x.ce == y.ce);
        CHECK(x.G == y.G);
        CHECK(x.H == y.H);
    }
}

TEST_CASE("observe slices windows")
{
    auto rng = make_rng(4);
    auto net = generate_ba(100, 4, rng);
    auto tr = simulate_simple(net, {0.3, 1}, 70, rng);
    CHECK(observe(tr, {20, 70}).steps.size() == 51);
    auto id = observe(tr, {0, 70});
    CHECK(id.steps.size() == tr.steps.size());
    CHECK(id.steps.front().infected == tr.steps.front().infected);
    CHECK(observe(tr, {69, 70}).steps.size() == 2);
    CHECK_THROWS_AS(observe(tr, {20, 71}), InvalidParameter);
    CHECK_THROWS_AS(observe(tr, {30, 30}), InvalidParameter);
}
