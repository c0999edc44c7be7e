#pragma once

// Small fixtures and brute-force oracles shared by the unit and property
// suites. Everything here is deliberately naive.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "netabc/graph.hpp"
#include "netabc/rng.hpp"

namespace netabc::test {

inline Network path_graph(node_t n)
{
    std::vector<Edge> e;
    for (node_t i = 0; i + 1 < n; ++i)
        e.emplace_back(i, i + 1);
    return Network::from_edges(n, e);
}

inline Network star_graph(node_t n)   // center 0
{
    std::vector<Edge> e;
    for (node_t i = 1; i < n; ++i)
        e.emplace_back(0, i);
    return Network::from_edges(n, e);
}

inline Network complete_graph(node_t n)
{
    std::vector<Edge> e;
    for (node_t i = 0; i < n; ++i)
        for (node_t j = i + 1; j < n; ++j)
            e.emplace_back(i, j);
    return Network::from_edges(n, e);
}

// Random graph conditioned on being connected (retries).
inline Network connected_random_graph(node_t n, double p, Rng& rng)
{
    for (;;) {
        std::vector<Edge> e;
        for (node_t i = 0; i < n; ++i)
            for (node_t j = i + 1; j < n; ++j)
                if (uniform01(rng) < p)
                    e.emplace_back(i, j);
        auto net = Network::from_edges(n, e);
        if (components(net).components == 1)
            return net;
    }
}

constexpr int fw_inf = std::numeric_limits<int>::max() / 4;

inline std::vector<std::vector<int>> floyd_warshall(const Network& net)
{
    const node_t n = net.node_count();
    std::vector<std::vector<int>> d(n, std::vector<int>(n, fw_inf));
    for (node_t i = 0; i < n; ++i) {
        d[i][i] = 0;
        for (node_t j : net.neighbors(i))
            d[i][j] = 1;
    }
    for (node_t k = 0; k < n; ++k)
        for (node_t i = 0; i < n; ++i)
            for (node_t j = 0; j < n; ++j)
                if (d[i][k] + d[k][j] < d[i][j])
                    d[i][j] = d[i][k] + d[k][j];
    return d;
}

// Triple loop straight from the definition, in long double.
inline double naive_graph_distance(const std::vector<std::vector<node_t>>& g1,
                                   const std::vector<std::vector<node_t>>& g2,
                                   const std::vector<std::vector<int>>& d, int t0, int t_max, bool pair_mean)
{
    int rho_max = 0;
    for (const auto& row : d)
        for (int v : row)
            if (v < fw_inf && v > rho_max)
                rho_max = v;
    if (rho_max == 0)
        return 0.0;
    long double total = 0.0L;
    for (std::size_t t = 0; t < g1.size(); ++t) {
        long double step = 0.0L;
        for (node_t i : g1[t])
            for (node_t j : g2[t])
                step += static_cast<long double>(d[i][j]) / rho_max;
        if (pair_mean && !g1[t].empty() && !g2[t].empty())
            step /= static_cast<long double>(g1[t].size() * g2[t].size());
        total += step;
    }
    return static_cast<double>(total / (t_max - t0));
}

inline double naive_euclid(const std::vector<double>& a, const std::vector<double>& b)
{
    long double s = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i) {
        long double diff = static_cast<long double>(a[i]) - b[i];
        s += diff * diff;
    }
    return static_cast<double>(std::sqrt(s));
}

// |observed - expected| in units of the binomial standard error.
inline double binomial_z(std::size_t hits, std::size_t trials, double p)
{
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    return std::abs(static_cast<double>(hits) / static_cast<double>(trials) - p) / se;
}

// Two-sample Kolmogorov-Smirnov p-value (asymptotic distribution).
inline double ks_two_sample_p(std::vector<double> a, std::vector<double> b)
{
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x)
            ++i;
        while (j < b.size() && b[j] <= x)
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
    }
    const double ne = static_cast<double>(a.size()) * b.size() / (a.size() + b.size());
    const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
    if (lambda < 0.2)
        return 1.0;
    double q = 0.0;
    for (int k = 1; k <= 100; ++k)
        q += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    return std::clamp(q, 0.0, 1.0);
}

} // namespace netabc::test
