#include "ubgspan/relaxed.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <stdexcept>

#include "ubgspan/greedy.hpp"

namespace ubgspan {

ClusterCover compute_cluster_cover(const WeightedGraph& spanner, double radius) {
    if (!(radius > 0.0)) throw UsageError("compute_cluster_cover: radius <= 0");
    ClusterCover cover;
    cover.radius = radius;
    cover.member_of.assign(spanner.n, -1);
    cover.dist_to_center.assign(spanner.n, 0.0);
    for (int c = 0; c < spanner.n; ++c) {
        if (cover.member_of[c] != -1) continue;
        cover.centers.push_back(c);
        auto sp = dijkstra(spanner, c, radius);
        for (int v = 0; v < spanner.n; ++v)
            if (sp.dist[v] <= radius && cover.member_of[v] == -1) {
                cover.member_of[v] = c;
                cover.dist_to_center[v] = sp.dist[v];
            }
    }
    return cover;
}

bool is_covered_edge(const Edge& e, const UbgInstance& inst,
                     const WeightedGraph& kept, const PhaseParams& params) {
    const double len = inst.edge_length(e);
    auto side = [&](int u, int v) {
        for (const auto& [z, uz] : kept.adj[u]) {
            if (z == v) continue;
            double vz = euclid(inst.points[v], inst.points[z]);
            if (vz > inst.alpha) continue;
            double ang = vz < 1e-15 ? 0.0 : angle_from_distances(len, uz, vz);
            if (ang <= params.theta) return true;
        }
        return false;
    };
    return side(e.u, e.v) || side(e.v, e.u);
}

QuerySelection select_query_edges(const std::vector<Edge>& bin,
                                  const ClusterCover& cover,
                                  const WeightedGraph& kept,
                                  const UbgInstance& inst,
                                  const PhaseParams& params) {
    QuerySelection sel;
    std::map<std::pair<int, int>, QueryEdge> best;
    for (const Edge& e : bin) {
        if (is_covered_edge(e, inst, kept, params)) {
            ++sel.covered_count;
            continue;
        }
        sel.candidates.push_back(e);
        int ca = cover.member_of[e.u], cb = cover.member_of[e.v];
        if (ca == cb)
            throw ModelViolationError(
                "select_query_edges: bin edge inside a single cluster");
        QueryEdge q;
        q.edge = e;
        q.len = inst.edge_length(e);
        if (ca < cb) {
            q.a = ca; q.b = cb; q.x = e.u; q.y = e.v;
        } else {
            q.a = cb; q.b = ca; q.x = e.v; q.y = e.u;
        }
        q.objective = params.t * q.len - cover.dist_to_center[q.x] -
                      cover.dist_to_center[q.y];
        auto [it, fresh] = best.try_emplace({q.a, q.b}, q);
        if (!fresh && (q.objective < it->second.objective ||
                       (q.objective == it->second.objective &&
                        q.edge < it->second.edge)))
            it->second = q;
    }

    std::map<int, std::size_t> per_cluster;
    for (auto& [pair, q] : best) {
        sel.queries.push_back(q);
        ++per_cluster[q.a];
        ++per_cluster[q.b];
    }
    std::sort(sel.queries.begin(), sel.queries.end(),
              [](const QueryEdge& l, const QueryEdge& r) {
                  return l.edge < r.edge;
              });
    for (auto& [c, k] : per_cluster)
        sel.max_cluster_queries = std::max(sel.max_cluster_queries, k);
    return sel;
}

WeightedGraph ClusterGraph::to_graph() const {
    WeightedGraph g(n);
    for (const auto& [a, x, w] : intra) g.add_edge(a, x, w);
    for (const auto& [a, b, w] : inter) g.add_edge(a, b, w);
    g.sort_adjacency();
    return g;
}

ClusterGraph build_cluster_graph(const WeightedGraph& kept,
                                 const ClusterCover& cover, double w_prev) {
    ClusterGraph h;
    h.n = kept.n;
    h.w_prev = w_prev;

    for (int v = 0; v < kept.n; ++v)
        if (cover.member_of[v] != v)
            h.intra.emplace_back(cover.member_of[v], v,
                                 cover.dist_to_center[v]);

    // Inter edges: centers within sp <= W_prev, or clusters joined by a kept
    // edge. Either way the weight sp(a,b) is at most (2 delta + 1) W_prev, so
    // a bounded Dijkstra from each center sees every partner.
    double reach = 2.0 * cover.radius + w_prev + kSpSlack;
    std::map<std::pair<int, int>, double> inter;
    for (int a : cover.centers) {
        auto sp = dijkstra(kept, a, reach);
        for (int b : cover.centers)
            if (a < b && sp.dist[b] <= w_prev)
                inter.try_emplace({a, b}, sp.dist[b]);
        for (int u = 0; u < kept.n; ++u) {
            if (cover.member_of[u] != a || sp.dist[u] == kInf) continue;
            for (const auto& [v, w] : kept.adj[u]) {
                int b = cover.member_of[v];
                if (b == a) continue;
                auto key = a < b ? std::pair{a, b} : std::pair{b, a};
                if (inter.count(key)) continue;
                // Weight needs the exact center-to-center distance.
                double d = sp.dist[b];
                assert(d < kInf);
                inter.emplace(key, d);
            }
        }
    }
    std::map<int, std::size_t> deg;
    for (const auto& [key, w] : inter) {
        h.inter.emplace_back(key.first, key.second, w);
        h.max_inter_degree =
            std::max({h.max_inter_degree, ++deg[key.first], ++deg[key.second]});
    }
    return h;
}

QueryAnswer answer_query(const WeightedGraph& h, const Edge& e, double len,
                         const PhaseParams& params) {
    auto sp = dijkstra(h, e.u, params.t * len + kSpSlack);
    QueryAnswer ans;
    ans.sp_h = sp.dist[e.v];
    ans.add = !(ans.sp_h <= params.t * len - kSpSlack);
    if (!ans.add) {
        ans.hops = sp.hops[e.v];
        // Any qualifying simple path in H has at most 2 intra hops and inter
        // hops of weight > delta W each, hence the constant cap.
        if (ans.hops > params.hop_cap())
            throw std::logic_error("answer_query: hop cap exceeded");
    }
    return ans;
}

bool mutually_redundant(const Edge& e1, const Edge& e2, const WeightedGraph& h,
                        const UbgInstance& inst, double t1) {
    if (e1 == e2) return false;
    double l1 = inst.edge_length(e1), l2 = inst.edge_length(e2);
    double rhs = std::min(t1 * l1 - l2, t1 * l2 - l1);
    if (rhs < 0.0) return false;
    auto su = dijkstra(h, e1.u, rhs);
    auto sv = dijkstra(h, e1.v, rhs);
    double straight = su.dist[e2.u] + sv.dist[e2.v];
    double crossed = su.dist[e2.v] + sv.dist[e2.u];
    return std::min(straight, crossed) <= rhs;
}

RedundancyResult remove_redundant(const std::vector<Edge>& added,
                                  const WeightedGraph& h,
                                  const UbgInstance& inst,
                                  const PhaseParams& params) {
    RedundancyResult res;
    const std::size_t k = added.size();
    std::vector<std::vector<std::size_t>> adj(k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (mutually_redundant(added[i], added[j], h, inst, params.t1)) {
                adj[i].push_back(j);
                adj[j].push_back(i);
                res.redundant_pairs.emplace_back(added[i], added[j]);
            }

    // Greedy MIS by smallest edge id over conflicted additions; edges with no
    // conflicts survive untouched. `added` is sorted, so index order is id order.
    std::vector<char> excluded(k, 0), in_mis(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
        if (adj[i].empty()) {
            res.survivors.push_back(added[i]);
            continue;
        }
        if (excluded[i]) continue;
        in_mis[i] = 1;
        ++res.mis_size;
        res.survivors.push_back(added[i]);
        for (std::size_t j : adj[i]) excluded[j] = 1;
    }
    for (std::size_t i = 0; i < k; ++i)
        if (!adj[i].empty() && !in_mis[i]) res.removed.push_back(added[i]);
    std::sort(res.survivors.begin(), res.survivors.end());
    std::sort(res.removed.begin(), res.removed.end());
    return res;
}

std::vector<Edge> process_short_edges(const UbgInstance& inst,
                                      const std::vector<Edge>& bin0, double t) {
    WeightedGraph g0 = subgraph_of(inst, bin0);
    WeightedGraph g = instance_graph(inst);
    std::vector<Edge> kept;
    for (const auto& comp : connected_components(g0)) {
        if (comp.size() < 2) continue;
        for (std::size_t i = 0; i < comp.size(); ++i)
            for (std::size_t j = i + 1; j < comp.size(); ++j)
                if (!g.has_edge(comp[i], comp[j]))
                    throw ModelViolationError(
                        "process_short_edges: E_0 component is not a clique "
                        "in G (bad instance)");
        // Greedy t-spanner of the component restricted to its E_0 edges.
        WeightedGraph local(g0.n);
        for (int u : comp)
            for (const auto& [v, w] : g0.adj[u])
                if (u < v) local.add_edge(u, v, w);
        auto part = seq_greedy(local, t);
        kept.insert(kept.end(), part.begin(), part.end());
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

RelaxedResult run_relaxed_greedy(const UbgInstance& inst, double t,
                                 bool keep_snapshots) {
    RelaxedResult res;
    res.params = derive_params(t, inst.alpha, std::max(inst.n(), 1));
    const PhaseParams& P = res.params;
    auto bins = bin_edges(inst, P);

    std::vector<Edge> kept = process_short_edges(inst, bins[0], t);
    {
        PhaseMetrics m0;
        m0.index = 0;
        m0.bin_size = bins[0].size();
        m0.queries = bins[0].size();
        m0.added = kept.size();
        res.phases.push_back(m0);
    }

    for (int i = 1; i <= P.m; ++i) {
        if (bins[i].empty()) continue;  // no observable effect; W_i advances
        const double w_prev = P.bin_widths[i - 1];
        WeightedGraph keptg = subgraph_of(inst, kept);

        ClusterCover cover = compute_cluster_cover(keptg, P.delta * w_prev);
        QuerySelection sel =
            select_query_edges(bins[i], cover, keptg, inst, P);
        ClusterGraph hg = build_cluster_graph(keptg, cover, w_prev);
        WeightedGraph h = hg.to_graph();

        std::vector<Edge> added;
        std::vector<QueryAnswer> answers;
        int max_hops = -1;
        for (const QueryEdge& q : sel.queries) {
            QueryAnswer a = answer_query(h, q.edge, q.len, P);
            if (a.add) added.push_back(q.edge);
            else max_hops = std::max(max_hops, a.hops);
            answers.push_back(a);
        }
        std::sort(added.begin(), added.end());
        RedundancyResult red = remove_redundant(added, h, inst, P);

        PhaseMetrics pm;
        pm.index = i;
        pm.w_prev = w_prev;
        pm.bin_size = bins[i].size();
        pm.covered = sel.covered_count;
        pm.candidates = sel.candidates.size();
        pm.queries = sel.queries.size();
        pm.added = added.size();
        pm.removed = red.removed.size();
        pm.clusters = cover.centers.size();
        pm.max_cluster_queries = sel.max_cluster_queries;
        pm.max_inter_degree = hg.max_inter_degree;
        pm.max_answer_hops = max_hops;
        res.phases.push_back(pm);
        res.max_answer_hops = std::max(res.max_answer_hops, max_hops);

        if (keep_snapshots) {
            PhaseSnapshot snap;
            snap.index = i;
            snap.w_prev = w_prev;
            snap.bin = bins[i];
            snap.cover = cover;
            snap.cluster_graph = hg;
            snap.queries = sel.queries;
            snap.answers = answers;
            snap.added = added;
            snap.removed = red.removed;
            snap.redundant_pairs = red.redundant_pairs;
            snap.kept_before = kept;
            res.snapshots.push_back(std::move(snap));
        }

        kept.insert(kept.end(), red.survivors.begin(), red.survivors.end());
        std::sort(kept.begin(), kept.end());
    }

    res.spanner = kept;
    return res;
}

}  // namespace ubgspan
