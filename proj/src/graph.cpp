#include "netabc/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <set>
#include <string>
#include <unordered_map>

#include "netabc/errors.hpp"

namespace netabc {

/*------------------------------------------------------------------*/
/* Network                                                          */
/*------------------------------------------------------------------*/

Network Network::from_edges(node_t node_count, std::span<const Edge> edges)
{
    if (node_count < 0)
        throw InvalidParameter("node count must be nonnegative");

    std::vector<std::size_t> degree(static_cast<std::size_t>(node_count), 0);
    for (auto [u, v] : edges) {
        if (u < 0 || v < 0 || u >= node_count || v >= node_count)
            throw InvalidParameter("edge endpoint out of range");
        if (u == v)
            throw InvalidParameter("self-loop on node " + std::to_string(u));
        ++degree[u];
        ++degree[v];
    }

    Network net;
    net.offsets_.assign(static_cast<std::size_t>(node_count) + 1, 0);
    for (node_t i = 0; i < node_count; ++i)
        net.offsets_[i + 1] = net.offsets_[i] + degree[i];
    net.targets_.resize(net.offsets_.back());

    std::vector<std::size_t> fill(net.offsets_.begin(), net.offsets_.end() - 1);
    for (auto [u, v] : edges) {
        net.targets_[fill[u]++] = v;
        net.targets_[fill[v]++] = u;
    }
    for (node_t i = 0; i < node_count; ++i) {
        auto first = net.targets_.begin() + static_cast<std::ptrdiff_t>(net.offsets_[i]);
        auto last = net.targets_.begin() + static_cast<std::ptrdiff_t>(net.offsets_[i + 1]);
        std::sort(first, last);
        if (std::adjacent_find(first, last) != last)
            throw InvalidParameter("duplicate edge at node " + std::to_string(i));
    }
    return net;
}

std::span<const node_t> Network::neighbors(node_t i) const
{
    if (!valid(i))
        throw std::out_of_range("node id " + std::to_string(i) + " out of range");
    return adj(i);
}

std::size_t Network::degree(node_t i) const
{
    if (!valid(i))
        throw std::out_of_range("node id " + std::to_string(i) + " out of range");
    return deg(i);
}

bool Network::has_edge(node_t i, node_t j) const
{
    auto nb = neighbors(i);
    return std::binary_search(nb.begin(), nb.end(), j);
}

std::vector<Edge> Network::edges() const
{
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (node_t u = 0; u < node_count(); ++u)
        for (node_t v : adj(u))
            if (u < v)
                out.emplace_back(u, v);
    return out;
}

/*------------------------------------------------------------------*/
/* Shortest paths                                                   */
/*------------------------------------------------------------------*/

int PathTable::hops(node_t i, node_t j) const
{
    auto d = raw(i, j);
    if (d == unreachable)
        throw UnreachableError("nodes " + std::to_string(i) + " and " + std::to_string(j) +
                               " are in different components");
    return d;
}

PathTable all_pairs_shortest_paths(const Network& net)
{
    const node_t n = net.node_count();
    std::vector<PathTable::hops_t> table(static_cast<std::size_t>(n) * n, PathTable::unreachable);
    std::vector<node_t> queue(static_cast<std::size_t>(n));
    int rho_max = 0;

    for (node_t src = 0; src < n; ++src) {
        auto* row = table.data() + static_cast<std::size_t>(src) * n;
        std::size_t head = 0, tail = 0;
        row[src] = 0;
        queue[tail++] = src;
        while (head < tail) {
            node_t u = queue[head++];
            auto du = row[u];
            for (node_t v : net.adj(u)) {
                if (row[v] == PathTable::unreachable) {
                    row[v] = static_cast<PathTable::hops_t>(du + 1);
                    queue[tail++] = v;
                }
            }
        }
        // BFS order: the last dequeued node is the farthest.
        rho_max = std::max<int>(rho_max, row[queue[tail - 1]]);
    }
    return PathTable(n, std::move(table), rho_max);
}

ComponentInfo components(const Network& net)
{
    const node_t n = net.node_count();
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<node_t> stack;
    ComponentInfo info;
    for (node_t s = 0; s < n; ++s) {
        if (seen[s])
            continue;
        ++info.components;
        std::size_t size = 0;
        seen[s] = 1;
        stack.push_back(s);
        while (!stack.empty()) {
            node_t u = stack.back();
            stack.pop_back();
            ++size;
            for (node_t v : net.adj(u))
                if (!seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
        }
        info.largest = std::max(info.largest, size);
    }
    return info;
}

/*------------------------------------------------------------------*/
/* Generators                                                       */
/*------------------------------------------------------------------*/

Network generate_ba(node_t n, int m, Rng& rng)
{
    if (m < 1 || n <= m)
        throw InvalidParameter("Barabasi-Albert requires n > m >= 1");

    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m) * (n - m));
    // Every edge endpoint appears once; uniform draws from this list are
    // degree-proportional draws over nodes.
    std::vector<node_t> endpoints;
    endpoints.reserve(2 * edges.capacity());

    std::vector<node_t> targets;
    targets.reserve(static_cast<std::size_t>(m));
    for (node_t v = m; v < n; ++v) {
        targets.clear();
        if (endpoints.empty()) {
            // Seed nodes are isolated: fall back to uniform, i.e. all m of them.
            for (node_t u = 0; u < m; ++u)
                targets.push_back(u);
        } else {
            std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
            while (targets.size() < static_cast<std::size_t>(m)) {
                node_t u = endpoints[pick(rng)];
                if (std::find(targets.begin(), targets.end(), u) == targets.end())
                    targets.push_back(u);
            }
        }
        for (node_t u : targets) {
            edges.emplace_back(u, v);
            endpoints.push_back(u);
            endpoints.push_back(v);
        }
    }
    return Network::from_edges(n, edges);
}

Network generate_er(node_t n, double p, Rng& rng)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw InvalidParameter("edge probability must lie in [0,1]");
    if (n < 1)
        throw InvalidParameter("Erdos-Renyi requires n >= 1");

    std::vector<Edge> edges;
    std::bernoulli_distribution coin(p);
    for (node_t u = 0; u < n; ++u)
        for (node_t v = u + 1; v < n; ++v)
            if (coin(rng))
                edges.emplace_back(u, v);
    return Network::from_edges(n, edges);
}

/*------------------------------------------------------------------*/
/* Edge-list I/O                                                    */
/*------------------------------------------------------------------*/

namespace {

bool parse_label(std::string_view token, std::int64_t& out)
{
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    return ec == std::errc() && ptr == token.data() + token.size();
}

std::vector<std::string_view> split_ws(std::string_view line)
{
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        if (i > start)
            tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

} // namespace

LoadedNetwork load_edge_list(std::istream& in)
{
    LoadedNetwork result;
    std::unordered_map<std::int64_t, node_t> ids;
    std::set<Edge> seen;
    std::vector<Edge> edges;

    auto id_of = [&](std::int64_t label) {
        auto [it, inserted] = ids.try_emplace(label, static_cast<node_t>(result.labels.size()));
        if (inserted)
            result.labels.push_back(label);
        return it->second;
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto tokens = split_ws(line);
        if (tokens.empty() || tokens.front().front() == '#')
            continue;
        std::int64_t a = 0, b = 0;
        if (tokens.size() != 2 || !parse_label(tokens[0], a) || !parse_label(tokens[1], b))
            throw ParseError(line_no, "expected two integer node labels, got '" + line + "'");
        node_t u = id_of(a);
        node_t v = id_of(b);
        if (u == v) {
            ++result.dropped_self_loops;
            continue;
        }
        Edge e = std::minmax(u, v);
        if (!seen.insert(e).second) {
            ++result.dropped_duplicates;
            continue;
        }
        edges.push_back(e);
    }
    if (result.labels.empty())
        throw ParseError(line_no, "edge list contains no nodes");

    result.network = Network::from_edges(static_cast<node_t>(result.labels.size()), edges);
    return result;
}

LoadedNetwork load_edge_list_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open edge list '" + path + "'");
    return load_edge_list(in);
}

void write_edge_list(std::ostream& out, const Network& net, std::span<const std::int64_t> labels)
{
    if (!labels.empty() && labels.size() != static_cast<std::size_t>(net.node_count()))
        throw InvalidParameter("label table size does not match node count");
    for (auto [u, v] : net.edges()) {
        if (labels.empty())
            out << u << ' ' << v << '\n';
        else
            out << labels[u] << ' ' << labels[v] << '\n';
    }
}

} // namespace netabc
