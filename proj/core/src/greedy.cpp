#include "ubgspan/greedy.hpp"

#include <algorithm>
#include <tuple>

namespace ubgspan {

std::vector<Edge> seq_greedy(const WeightedGraph& g, double t,
                             GreedyTrace* trace) {
    if (!(t >= 1.0)) throw UsageError("seq_greedy: t must be >= 1");

    std::vector<std::tuple<double, int, int>> order;
    for (int u = 0; u < g.n; ++u)
        for (const auto& [v, w] : g.adj[u])
            if (u < v) order.emplace_back(w, u, v);
    std::sort(order.begin(), order.end());

    WeightedGraph partial(g.n);
    std::vector<Edge> kept;
    for (const auto& [w, u, v] : order) {
        // Fresh bounded Dijkstra per examined edge.
        auto sp = dijkstra(partial, u, t * w);
        bool add = sp.dist[v] > t * w;  // kInf when beyond cutoff
        if (add) {
            partial.add_edge(u, v, w);
            kept.push_back({u, v});
        }
        if (trace) {
            trace->order.push_back({u, v});
            trace->lengths.push_back(w);
            trace->added.push_back(add ? 1 : 0);
        }
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

}  // namespace ubgspan
