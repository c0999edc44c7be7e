#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "../support.hpp"
#include "netabc/estimation.hpp"
#include "netabc/inference.hpp"

using namespace netabc;
using namespace netabc::test;

namespace {

// Small simple-contagion problem with a multi-node seed support.
struct Problem {
    Network net;
    PathTable paths;
    SummaryBundle observed;
    PriorSpec prior;
};

Problem small_problem(std::uint64_t seed)
{
    Problem p;
    auto rng = make_rng(seed);
    p.net = generate_ba(40, 3, rng);
    p.paths = all_pairs_shortest_paths(p.net);
    auto tr = simulate_simple(p.net, {0.8, 5}, 12, rng);
    p.observed = summarize(tr, {3, 12}, p.net);
    p.prior = PriorSpec::from_observed(p.observed);
    return p;
}

double sample_variance(const std::vector<double>& x)
{
    double m = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x)
        ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size() - 1);
}

} // namespace

TEST_CASE("node kernel probabilities sum to one for every node")
{
    auto rng = make_rng(77);
    std::vector<Network> nets{generate_ba(120, 3, rng), generate_er(100, 0.05, rng), star_graph(9), path_graph(6)};
    for (const auto& net : nets)
        for (node_t i = 0; i < net.node_count(); ++i) {
            if (net.degree(i) == 0)
                continue;
            auto probs = kernel_node_probabilities(i, net);
            long double total = 0.0L;
            for (auto [j, pr] : probs) {
                CHECK(net.has_edge(i, j));
                CHECK(pr > 0.0);
                CHECK(pr == doctest::Approx(kernel_node_density(i, j, net)).epsilon(1e-15));
                total += pr;
            }
            CHECK(std::abs(static_cast<double>(total) - 1.0) <= 1e-12);
        }
}

TEST_CASE("every particle stays on the seed support at every step")
{
    auto p = small_problem(9);
    REQUIRE(p.prior.seed_support.size() > 1);
    DiscrepancyTarget target(p.observed, p.paths);
    auto model = make_epidemic_model(p.net, ContagionKind::simple, target);
    SabcConfig cfg;
    cfg.particles = 40;
    cfg.seed = 3;
    cfg.threads = 1;
    // A run truncated after k steps reproduces the first k steps of a longer run.
    for (int k : {0, 1, 2, 4, 8}) {
        cfg.max_steps = k;
        auto out = sabc_run(model, p.prior, cfg);
        for (const auto& phi : out.particles) {
            CHECK(p.prior.contains(phi));
            CHECK(phi.continuous[0] >= 0.0);
            CHECK(phi.continuous[0] <= 1.0);
        }
    }
}

TEST_CASE("SABC output does not depend on the thread count")
{
    auto p = small_problem(10);
    DiscrepancyTarget target(p.observed, p.paths);
    auto model = make_epidemic_model(p.net, ContagionKind::simple, target);
    SabcConfig cfg;
    cfg.particles = 48;
    cfg.max_steps = 6;
    cfg.seed = 11;
    cfg.resample_threshold = 0.5;
    cfg.threads = 1;
    auto one = sabc_run(model, p.prior, cfg);
    for (unsigned threads : {2u, 3u, 8u}) {
        cfg.threads = threads;
        auto many = sabc_run(model, p.prior, cfg);
        CHECK(many.particles == one.particles);
        CHECK(many.distances == one.distances);
        CHECK(many.tolerance_trajectory() == one.tolerance_trajectory());
    }
}

TEST_CASE("tolerance trajectory is finite, positive and nonincreasing")
{
    auto p = small_problem(12);
    DiscrepancyTarget target(p.observed, p.paths);
    auto model = make_epidemic_model(p.net, ContagionKind::simple, target);
    SabcConfig cfg;
    cfg.particles = 40;
    cfg.max_steps = 15;
    cfg.threads = 1;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        cfg.seed = seed;
        auto out = sabc_run(model, p.prior, cfg);
        auto tol = out.tolerance_trajectory();
        auto acc = out.acceptance_trajectory();
        for (std::size_t k = 0; k < tol.size(); ++k) {
            CHECK(std::isfinite(tol[k]));
            CHECK(tol[k] > 0.0);
            if (k > 0)
                CHECK(tol[k] <= tol[k - 1]);
            CHECK(acc[k] >= 0.0);
            CHECK(acc[k] <= 1.0);
        }
        for (double d : out.distances)
            CHECK(std::isfinite(d));
    }
}

TEST_CASE("posterior on a 10-node star contracts below the prior variance")
{
    auto net = star_graph(10);
    auto paths = all_pairs_shortest_paths(net);
    auto rng = make_rng(21);
    auto tr = simulate_simple(net, {0.3, 0}, 12, rng);
    auto observed = summarize(tr, {2, 12}, net);
    DiscrepancyTarget target(observed, paths);
    auto model = make_epidemic_model(net, ContagionKind::simple, target);
    PriorSpec prior{{0}, 1};
    SabcConfig cfg;
    cfg.particles = 200;
    cfg.max_steps = 40;
    cfg.seed = 5;
    cfg.threads = 1;
    auto out = sabc_run(model, prior, cfg);
    std::vector<double> theta;
    for (const auto& phi : out.particles)
        theta.push_back(phi.continuous[0]);
    CHECK(sample_variance(theta) < 1.0 / 12.0);
}

TEST_CASE("Bayes estimate beats every grid candidate")
{
    auto rng = make_rng(31);
    for (int rep = 0; rep < 3; ++rep) {
        auto net = connected_random_graph(9, 0.3, rng);
        auto paths = all_pairs_shortest_paths(net);
        std::vector<Phi> samples;
        for (int k = 0; k < 40; ++k)
            samples.push_back({{uniform01(rng) * uniform01(rng)}, static_cast<node_t>(uniform01(rng) * 9)});
        auto est = bayes_estimate(samples, net, paths);
        const double best = expected_loss(samples, est.phi, paths);
        CHECK(best == doctest::Approx(est.expected_loss).epsilon(1e-12));
        for (node_t v = 0; v < net.node_count(); ++v)
            for (int i = 0; i <= 1000; ++i)
                CHECK(best <= expected_loss(samples, Phi{{i * 1e-3}, v}, paths) + 1e-9);
    }
}

TEST_CASE("Bayes estimate is invariant under sample permutation")
{
    auto rng = make_rng(32);
    auto net = generate_ba(30, 2, rng);
    auto paths = all_pairs_shortest_paths(net);
    std::vector<Phi> samples;
    for (int k = 0; k < 60; ++k)
        samples.push_back({{uniform01(rng), uniform01(rng)}, static_cast<node_t>(uniform01(rng) * 30)});
    auto base = bayes_estimate(samples, net, paths);
    for (int rep = 0; rep < 5; ++rep) {
        std::shuffle(samples.begin(), samples.end(), rng);
        auto est = bayes_estimate(samples, net, paths);
        CHECK(est.phi.seed_node == base.phi.seed_node);
        CHECK(est.phi.continuous[0] == doctest::Approx(base.phi.continuous[0]).epsilon(1e-7));
        CHECK(est.phi.continuous[1] == doctest::Approx(base.phi.continuous[1]).epsilon(1e-7));
    }
}

TEST_CASE("Bayes estimate separates into continuous and node parts")
{
    auto rng = make_rng(33);
    auto net = connected_random_graph(25, 0.25, rng);
    auto paths = all_pairs_shortest_paths(net);
    std::vector<Phi> samples;
    std::vector<std::vector<double>> points;
    for (int k = 0; k < 50; ++k) {
        Phi phi{{uniform01(rng), uniform01(rng)}, static_cast<node_t>(uniform01(rng) * 25)};
        samples.push_back(phi);
        points.push_back(phi.continuous);
    }
    auto est = bayes_estimate(samples, net, paths);
    auto gm = geometric_median(points);
    CHECK(est.phi.continuous[0] == doctest::Approx(gm[0]).epsilon(1e-12));
    CHECK(est.phi.continuous[1] == doctest::Approx(gm[1]).epsilon(1e-12));

    // Changing only the continuous parts leaves the node estimate alone.
    auto moved = samples;
    for (auto& phi : moved)
        phi.continuous = {uniform01(rng), uniform01(rng)};
    CHECK(bayes_estimate(moved, net, paths).phi.seed_node == est.phi.seed_node);
}

TEST_CASE("distance marginal sums to one")
{
    auto rng = make_rng(34);
    auto net = generate_ba(60, 2, rng);
    auto paths = all_pairs_shortest_paths(net);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<Phi> samples;
        std::size_t size = 1 + static_cast<std::size_t>(uniform01(rng) * 300);
        for (std::size_t k = 0; k < size; ++k)
            samples.push_back({{0.5}, static_cast<node_t>(uniform01(rng) * 60)});
        auto m = distance_marginal(samples, static_cast<node_t>(rep), paths);
        double total = std::accumulate(m.mass.begin(), m.mass.end(), 0.0);
        CHECK(std::abs(total - 1.0) <= 1e-9);
        for (std::size_t d = 0; d < m.mass.size(); ++d)
            if (m.node_count[d] == 0)
                CHECK(m.mass[d] == 0.0);
    }
}
