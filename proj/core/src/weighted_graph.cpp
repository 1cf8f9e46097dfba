#include "ubgspan/weighted_graph.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <queue>

namespace ubgspan {

void WeightedGraph::add_edge(int u, int v, double w) {
    if (u < 0 || v < 0 || u >= n || v >= n || u == v)
        throw UsageError("add_edge: bad endpoints");
    if (!(w > 0.0) || !std::isfinite(w))
        throw UsageError("add_edge: weight must be positive and finite");
    adj[u].emplace_back(v, w);
    adj[v].emplace_back(u, w);
}

bool WeightedGraph::has_edge(int u, int v) const {
    for (const auto& [x, w] : adj[u])
        if (x == v) return true;
    return false;
}

double WeightedGraph::weight(int u, int v) const {
    for (const auto& [x, w] : adj[u])
        if (x == v) return w;
    return kInf;
}

std::size_t WeightedGraph::edge_count() const {
    std::size_t twice = 0;
    for (const auto& l : adj) twice += l.size();
    return twice / 2;
}

std::vector<Edge> WeightedGraph::edge_list() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (int u = 0; u < n; ++u)
        for (const auto& [v, w] : adj[u])
            if (u < v) out.push_back({u, v});
    std::sort(out.begin(), out.end());
    return out;
}

void WeightedGraph::sort_adjacency() {
    for (auto& l : adj) std::sort(l.begin(), l.end());
}

WeightedGraph instance_graph(const UbgInstance& inst) {
    return subgraph_of(inst, inst.edges);
}

WeightedGraph subgraph_of(const UbgInstance& inst, const std::vector<Edge>& edges) {
    WeightedGraph g(inst.n());
    for (const Edge& e : edges) g.add_edge(e.u, e.v, inst.edge_length(e));
    g.sort_adjacency();
    return g;
}

ShortestPathResult dijkstra(const WeightedGraph& g, int source,
                            std::optional<double> radius_cutoff) {
    if (source < 0 || source >= g.n) throw UsageError("dijkstra: bad source");
    ShortestPathResult r;
    r.source = source;
    r.dist.assign(g.n, kInf);
    r.parent.assign(g.n, -1);
    r.hops.assign(g.n, -1);

    // (dist, hops, node): hop count and node id break distance ties.
    using Item = std::tuple<double, int, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    std::vector<char> done(g.n, 0);
    r.dist[source] = 0.0;
    r.hops[source] = 0;
    pq.emplace(0.0, 0, source);

    while (!pq.empty()) {
        auto [d, h, u] = pq.top();
        pq.pop();
        if (done[u]) continue;
        if (d != r.dist[u] || h != r.hops[u]) continue;
        done[u] = 1;
        if (radius_cutoff && d > *radius_cutoff) continue;  // no expanding past cutoff
        for (const auto& [v, w] : g.adj[u]) {
            if (done[v]) continue;
            double nd = d + w;
            int nh = h + 1;
            if (nd < r.dist[v] || (nd == r.dist[v] && nh < r.hops[v])) {
                r.dist[v] = nd;
                r.hops[v] = nh;
                r.parent[v] = u;
                pq.emplace(nd, nh, v);
            }
        }
    }

    if (radius_cutoff)
        for (int v = 0; v < g.n; ++v)
            if (r.dist[v] > *radius_cutoff) {
                r.dist[v] = kInf;
                r.parent[v] = -1;
                r.hops[v] = -1;
            }

#ifndef NDEBUG
    if (!radius_cutoff)
        for (int u = 0; u < g.n; ++u)
            for (const auto& [v, w] : g.adj[u])
                assert(!(r.dist[v] > r.dist[u] + w + 1e-12));
#endif
    return r;
}

std::vector<std::vector<int>> connected_components(const WeightedGraph& g) {
    std::vector<std::vector<int>> comps;
    std::vector<char> seen(g.n, 0);
    std::vector<int> stack;
    for (int s = 0; s < g.n; ++s) {
        if (seen[s]) continue;
        comps.emplace_back();
        stack.push_back(s);
        seen[s] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            comps.back().push_back(u);
            for (const auto& [v, w] : g.adj[u])
                if (!seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
        }
        std::sort(comps.back().begin(), comps.back().end());
    }
    return comps;
}

namespace {
struct Dsu {
    std::vector<int> p;
    explicit Dsu(int n) : p(n) {
        for (int i = 0; i < n; ++i) p[i] = i;
    }
    int find(int x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        p[b] = a;
        return true;
    }
};
}  // namespace

double mst_weight(const WeightedGraph& g) {
    std::vector<std::tuple<double, int, int>> edges;
    for (int u = 0; u < g.n; ++u)
        for (const auto& [v, w] : g.adj[u])
            if (u < v) edges.emplace_back(w, u, v);
    std::sort(edges.begin(), edges.end());
    Dsu dsu(g.n);
    double total = 0.0;
    int used = 0;
    for (const auto& [w, u, v] : edges)
        if (dsu.unite(u, v)) {
            total += w;
            ++used;
        }
    if (used != g.n - 1)
        throw UsageError("mst_weight: graph is disconnected");
    return total;
}

StretchResult edge_stretch(const WeightedGraph& g, const WeightedGraph& sub) {
    if (sub.n != g.n) throw UsageError("edge_stretch: node counts differ");
    for (int u = 0; u < sub.n; ++u)
        for (const auto& [v, w] : sub.adj[u])
            if (u < v) {
                double gw = g.weight(u, v);
                if (gw == kInf || std::abs(gw - w) > 1e-12)
                    throw UsageError("edge_stretch: sub edge absent from g");
            }

    StretchResult best;
    best.max_stretch = 0.0;
    bool any = false;
    for (int u = 0; u < g.n; ++u) {
        bool needed = false;
        for (const auto& [v, w] : g.adj[u])
            if (u < v) needed = true;
        if (!needed) continue;
        auto sp = dijkstra(sub, u);
        for (const auto& [v, w] : g.adj[u]) {
            if (u >= v) continue;
            any = true;
            double s = sp.dist[v] / w;
            if (s > best.max_stretch) {
                best.max_stretch = s;
                best.witness = {u, v};
            }
        }
    }
    if (!any) best.max_stretch = 1.0;  // edgeless graph: vacuously a 1-spanner
    return best;
}

}  // namespace ubgspan
