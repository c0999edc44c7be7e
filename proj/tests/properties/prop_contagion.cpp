#include <doctest.h>

#include <algorithm>

#include "../support.hpp"
#include "netabc/contagion.hpp"

using namespace netabc;
using namespace netabc::test;

namespace {

bool subset(const std::vector<node_t>& a, const std::vector<node_t>& b)
{
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<node_t> set_union(const std::vector<node_t>& a, const std::vector<node_t>& b)
{
    std::vector<node_t> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool traces_equal(const EpidemicTrace& a, const EpidemicTrace& b)
{
    if (a.steps.size() != b.steps.size() || a.prior_exposed != b.prior_exposed || a.seed_only != b.seed_only)
        return false;
    for (std::size_t k = 0; k < a.steps.size(); ++k) {
        const auto &x = a.steps[k], &y = b.steps[k];
        if (x.t != y.t || x.infected != y.infected || x.exposed != y.exposed ||
            x.exposures.size() != y.exposures.size())
            return false;
        for (std::size_t j = 0; j < x.exposures.size(); ++j)
            if (x.exposures[j].node != y.exposures[j].node || x.exposures[j].counts != y.exposures[j].counts)
                return false;
    }
    return true;
}

std::vector<Network> test_networks()
{
    auto rng = make_rng(5150);
    return {generate_ba(100, 4, rng), generate_er(80, 0.06, rng), star_graph(12), complete_graph(6)};
}

} // namespace

TEST_CASE("simple contagion: infection is absorbing")
{
    auto nets = test_networks();
    for (std::size_t g = 0; g < nets.size(); ++g)
        for (std::uint64_t r = 0; r < 20; ++r) {
            auto rng = make_rng(r, {g});
            double theta = uniform01(rng);
            auto seed = static_cast<node_t>(r % nets[g].node_count());
            auto tr = simulate_simple(nets[g], {theta, seed}, 40, rng);
            CHECK(tr.steps.front().infected == std::vector<node_t>{seed});
            for (std::size_t t = 1; t < tr.steps.size(); ++t)
                CHECK(subset(tr.steps[t - 1].infected, tr.steps[t].infected));
        }
}

TEST_CASE("complex contagion: state and exposure-summary invariants")
{
    auto nets = test_networks();
    for (std::size_t g = 0; g < nets.size(); ++g) {
        const auto& net = nets[g];
        for (std::uint64_t r = 0; r < 20; ++r) {
            auto rng = make_rng(r, {g, 1});
            ComplexParams params{uniform01(rng), uniform01(rng), static_cast<node_t>((3 * r) % net.node_count())};
            auto tr = simulate_complex(net, params, {}, 40, rng);
            CHECK(std::binary_search(tr.steps.front().infected.begin(), tr.steps.front().infected.end(),
                                     params.seed_node));
            for (std::size_t t = 0; t < tr.steps.size(); ++t) {
                const auto& s = tr.steps[t];
                std::vector<node_t> both;
                std::set_intersection(s.infected.begin(), s.infected.end(), s.exposed.begin(), s.exposed.end(),
                                      std::back_inserter(both));
                CHECK(both.empty());
                REQUIRE(s.exposures.size() == s.exposed.size());
                for (std::size_t k = 0; k < s.exposed.size(); ++k) {
                    const auto& ne = s.exposures[k];
                    CHECK(ne.node == s.exposed[k]);
                    std::uint64_t total = 0;
                    for (auto c : ne.counts)
                        total += c;
                    CHECK(total > 0);
                    CHECK(!ne.counts.empty());
                    CHECK(ne.counts.back() > 0);
                    std::size_t infected_nbrs = 0;
                    for (node_t j : net.neighbors(ne.node))
                        infected_nbrs += std::binary_search(s.infected.begin(), s.infected.end(), j);
                    CHECK(ne.counts.size() <= infected_nbrs);
                    CHECK(infected_nbrs <= net.degree(ne.node));
                }
                if (t > 0) {
                    const auto& p = tr.steps[t - 1];
                    CHECK(subset(p.infected, s.infected));
                    CHECK(subset(set_union(p.infected, p.exposed), set_union(s.infected, s.exposed)));
                }
            }
        }
    }
}

TEST_CASE("simulations are reproducible")
{
    auto nets = test_networks();
    for (std::uint64_t r = 0; r < 10; ++r) {
        auto a = make_rng(r), b = make_rng(r);
        CHECK(traces_equal(simulate_simple(nets[0], {0.4, 3}, 50, a), simulate_simple(nets[0], {0.4, 3}, 50, b)));
        auto c = make_rng(r), d = make_rng(r);
        CHECK(traces_equal(simulate_complex(nets[1], {0.7, 0.3, 2}, {}, 50, c),
                           simulate_complex(nets[1], {0.7, 0.3, 2}, {}, 50, d)));
    }
}

TEST_CASE("p_infect stays strictly inside its bounds")
{
    SigmoidConfig cfg;
    for (int f = 1; f <= 30; ++f)
        for (int k = 1; k <= f; ++k)
            for (double gamma : {0.0, 0.1, 0.3, 0.5, 0.9, 1.0}) {
                double p = p_infect(k, f, gamma, cfg);
                CHECK(p > cfg.eps_low);
                CHECK(p < cfg.eps_high);
            }
}
