#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <tuple>

namespace oracles {

using ubgspan::kInf;

std::vector<std::vector<double>> floyd_warshall(const WeightedGraph& g) {
    std::vector<std::vector<double>> d(g.n, std::vector<double>(g.n, kInf));
    for (int v = 0; v < g.n; ++v) d[v][v] = 0.0;
    for (int u = 0; u < g.n; ++u)
        for (const auto& [v, w] : g.adj[u]) d[u][v] = std::min(d[u][v], w);
    for (int k = 0; k < g.n; ++k)
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j)
                if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
    return d;
}

std::vector<int> union_find_labels(const WeightedGraph& g) {
    std::vector<int> parent(g.n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int u = 0; u < g.n; ++u)
        for (const auto& [v, w] : g.adj[u]) {
            int a = find(u), b = find(v);
            if (a != b) parent[b] = a;
        }
    std::vector<int> label(g.n);
    for (int v = 0; v < g.n; ++v) label[v] = find(v);
    return label;
}

double prim_mst_weight(const WeightedGraph& g) {
    std::vector<char> in(g.n, 0);
    std::vector<double> key(g.n, kInf);
    key[0] = 0.0;
    double total = 0.0;
    for (int step = 0; step < g.n; ++step) {
        int best = -1;
        for (int v = 0; v < g.n; ++v)
            if (!in[v] && (best == -1 || key[v] < key[best])) best = v;
        in[best] = 1;
        total += key[best];
        for (const auto& [v, w] : g.adj[best])
            if (!in[v] && w < key[v]) key[v] = w;
    }
    return total;
}

double brute_force_mst_weight(const WeightedGraph& g) {
    std::vector<std::tuple<int, int, double>> edges;
    for (int u = 0; u < g.n; ++u)
        for (const auto& [v, w] : g.adj[u])
            if (u < v) edges.emplace_back(u, v, w);
    const std::size_t m = edges.size();
    double best = kInf;
    for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
        if (std::popcount(mask) != static_cast<int>(g.n - 1)) continue;
        std::vector<int> parent(g.n);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        double total = 0.0;
        int joins = 0;
        for (std::size_t i = 0; i < m; ++i)
            if (mask >> i & 1) {
                auto [u, v, w] = edges[i];
                int a = find(u), b = find(v);
                if (a != b) {
                    parent[b] = a;
                    ++joins;
                }
                total += w;
            }
        if (joins == g.n - 1) best = std::min(best, total);
    }
    return best;
}

std::vector<Edge> definitional_greedy(const WeightedGraph& g, double t) {
    std::vector<std::tuple<double, int, int>> order;
    for (int u = 0; u < g.n; ++u)
        for (const auto& [v, w] : g.adj[u])
            if (u < v) order.emplace_back(w, u, v);
    std::sort(order.begin(), order.end());
    WeightedGraph partial(g.n);
    std::vector<Edge> kept;
    for (const auto& [w, u, v] : order) {
        auto d = floyd_warshall(partial);
        if (d[u][v] > t * w) {
            partial.add_edge(u, v, w);
            kept.push_back({u, v});
        }
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

double angle_from_coords(const Point& u, const Point& v, const Point& z) {
    double dot = 0.0, nv = 0.0, nz = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        double a = v[i] - u[i], b = z[i] - u[i];
        dot += a * b;
        nv += a * a;
        nz += b * b;
    }
    double c = dot / std::sqrt(nv * nz);
    return std::acos(std::clamp(c, -1.0, 1.0));
}

std::vector<int> bfs_ball(const WeightedGraph& g, int source, int hops) {
    std::vector<int> dist(g.n, -1);
    std::vector<int> q{source};
    dist[source] = 0;
    for (std::size_t head = 0; head < q.size(); ++head) {
        int u = q[head];
        if (dist[u] == hops) continue;
        for (const auto& [v, w] : g.adj[u])
            if (dist[v] == -1) {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
    }
    std::sort(q.begin(), q.end());
    return q;
}

bool is_independent_set(const std::vector<std::vector<int>>& adj,
                        const std::vector<char>& in_set) {
    for (std::size_t v = 0; v < adj.size(); ++v)
        if (in_set[v])
            for (int u : adj[v])
                if (in_set[u]) return false;
    return true;
}

bool is_maximal_independent_set(const std::vector<std::vector<int>>& adj,
                                const std::vector<char>& in_set) {
    if (!is_independent_set(adj, in_set)) return false;
    for (std::size_t v = 0; v < adj.size(); ++v) {
        if (in_set[v]) continue;
        bool blocked = false;
        for (int u : adj[v])
            if (in_set[u]) blocked = true;
        if (!blocked) return false;
    }
    return true;
}

UbgInstance small_instance(int n, double alpha, std::uint64_t seed,
                           double band_p) {
    return ubgspan::generate_instance(
        n, 2, alpha, ubgspan::GenPolicy::bernoulli(band_p), seed);
}

WeightedGraph complete_euclidean(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto coin = [&]() { return (rng() >> 11) * 0x1.0p-53; };
    std::vector<Point> pts(n);
    for (auto& p : pts) p = {coin(), coin()};
    WeightedGraph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            g.add_edge(u, v, ubgspan::euclid(pts[u], pts[v]));
    g.sort_adjacency();
    return g;
}

}  // namespace oracles
