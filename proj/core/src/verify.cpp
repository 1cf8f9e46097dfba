#include "ubgspan/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

namespace ubgspan {
namespace verify {

namespace {

constexpr double kTol = 1e-9;

std::string edge_str(const Edge& e) {
    return "{" + std::to_string(e.u) + "," + std::to_string(e.v) + "}";
}

}  // namespace

CheckResult check_spanner(const UbgInstance& inst,
                          const std::vector<Edge>& spanner_edges, double t) {
    WeightedGraph g = instance_graph(inst);
    WeightedGraph sub = subgraph_of(inst, spanner_edges);
    StretchResult s = edge_stretch(g, sub);
    CheckResult r;
    r.value = s.max_stretch;
    r.pass = s.max_stretch <= t + kTol;
    r.witness = edge_str(s.witness);
    return r;
}

int check_degree(const std::vector<Edge>& spanner_edges) {
    std::map<int, int> deg;
    int best = 0;
    for (const Edge& e : spanner_edges)
        best = std::max({best, ++deg[e.u], ++deg[e.v]});
    return best;
}

CheckResult weight_ratio(const UbgInstance& inst,
                         const std::vector<Edge>& spanner_edges) {
    CheckResult r;
    WeightedGraph g = instance_graph(inst);
    WeightedGraph sub = subgraph_of(inst, spanner_edges);
    if (connected_components(sub).size() != 1) {
        r.pass = false;
        r.witness = "spanner disconnected";
        r.value = kInf;
        return r;
    }
    double w = 0.0;
    for (const Edge& e : spanner_edges) w += inst.edge_length(e);
    r.value = w / mst_weight(g);
    r.pass = r.value >= 1.0 - kTol;
    return r;
}

double power_cost(const UbgInstance& inst,
                  const std::vector<Edge>& spanner_edges) {
    std::vector<double> maxw(inst.n(), 0.0);
    for (const Edge& e : spanner_edges) {
        double w = inst.edge_length(e);
        maxw[e.u] = std::max(maxw[e.u], w);
        maxw[e.v] = std::max(maxw[e.v], w);
    }
    double total = 0.0;
    for (double w : maxw) total += w;
    return total;
}

double leapfrog_t2_window(const PhaseParams& p) {
    return std::min({(p.t_delta + 1.0) / p.r - 1.0, 2.0 / p.r, p.t / p.r,
                     2.0 / p.beta, p.t * p.alpha + 1.0 / p.beta});
}

std::optional<double> pick_leapfrog_t2(const PhaseParams& p) {
    double hi = leapfrog_t2_window(p);
    if (hi <= 1.0) return std::nullopt;
    return (1.0 + hi) / 2.0;
}

namespace {

// Checks inequality (leapfrog) for one ordered, oriented sequence where
// seq[0] is the designated longest edge. Endpoints: (us[i], vs[i]).
bool leapfrog_holds(const std::vector<std::pair<int, int>>& seq,
                    const std::vector<std::vector<double>>& dist, double t2,
                    double t) {
    const std::size_t s = seq.size();
    double lhs = t2 * dist[seq[0].first][seq[0].second];
    double rhs = 0.0;
    for (std::size_t i = 1; i < s; ++i)
        rhs += dist[seq[i].first][seq[i].second];
    for (std::size_t i = 0; i + 1 < s; ++i)
        rhs += t * dist[seq[i].second][seq[i + 1].first];
    rhs += t * dist[seq[s - 1].second][seq[0].first];
    return lhs < rhs;
}

bool leapfrog_subset(const std::vector<Edge>& subset,
                     const std::vector<std::vector<double>>& dist, double t2,
                     double t, std::string* witness) {
    const std::size_t s = subset.size();
    double longest = 0.0;
    for (const Edge& e : subset)
        longest = std::max(longest, dist[e.u][e.v]);
    for (std::size_t first = 0; first < s; ++first) {
        if (dist[subset[first].u][subset[first].v] < longest) continue;
        std::vector<std::size_t> rest;
        for (std::size_t i = 0; i < s; ++i)
            if (i != first) rest.push_back(i);
        std::sort(rest.begin(), rest.end());
        do {
            // Orient every edge both ways.
            for (unsigned mask = 0; mask < (1u << s); ++mask) {
                std::vector<std::pair<int, int>> seq;
                auto oriented = [&](std::size_t idx, unsigned bit) {
                    const Edge& e = subset[idx];
                    return (mask >> bit) & 1u ? std::pair{e.v, e.u}
                                              : std::pair{e.u, e.v};
                };
                seq.push_back(oriented(first, 0));
                for (std::size_t k = 0; k < rest.size(); ++k)
                    seq.push_back(oriented(rest[k], static_cast<unsigned>(k + 1)));
                if (!leapfrog_holds(seq, dist, t2, t)) {
                    if (witness) {
                        *witness = "subset";
                        for (const auto& [a, b] : seq)
                            *witness += " (" + std::to_string(a) + "," +
                                        std::to_string(b) + ")";
                    }
                    return false;
                }
            }
        } while (std::next_permutation(rest.begin(), rest.end()));
    }
    return true;
}

void leapfrog_subsets_rec(const std::vector<Edge>& band, std::size_t start,
                          std::vector<Edge>& cur, std::size_t want,
                          const std::vector<std::vector<double>>& dist,
                          double t2, double t, bool* ok, std::string* witness) {
    if (!*ok) return;
    if (cur.size() == want) {
        if (!leapfrog_subset(cur, dist, t2, t, witness)) *ok = false;
        return;
    }
    if (band.size() - start < want - cur.size()) return;
    for (std::size_t i = start; i < band.size() && *ok; ++i) {
        cur.push_back(band[i]);
        leapfrog_subsets_rec(band, i + 1, cur, want, dist, t2, t, ok, witness);
        cur.pop_back();
    }
}

}  // namespace

CheckResult check_leapfrog(const UbgInstance& inst,
                           const std::vector<Edge>& edges, double t2, double t,
                           double beta, int max_subset) {
    CheckResult r;
    r.value = t2;
    if (max_subset > 6)
        throw UsageError("check_leapfrog: max_subset capped at 6");

    const int n = inst.n();
    std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            dist[i][j] = dist[j][i] = euclid(inst.points[i], inst.points[j]);

    // Geometric weight bands: lengths up to alpha, then factor-beta steps.
    int bands = static_cast<int>(
                    std::ceil(std::log(1.0 / inst.alpha) / std::log(beta))) +
                1;
    std::vector<std::vector<Edge>> by_band(std::max(bands, 1));
    for (const Edge& e : edges) {
        double len = dist[e.u][e.v];
        int j = 0;
        if (len > inst.alpha)
            j = static_cast<int>(
                std::ceil(std::log(len / inst.alpha) / std::log(beta)));
        j = std::min<int>(j, static_cast<int>(by_band.size()) - 1);
        by_band[j].push_back(e);
    }

    for (std::size_t j = 0; j < by_band.size() && r.pass; ++j)
        for (int s = 2; s <= max_subset && r.pass; ++s) {
            std::vector<Edge> cur;
            bool ok = true;
            leapfrog_subsets_rec(by_band[j], 0, cur, s, dist, t2, t, &ok,
                                 &r.witness);
            if (!ok) {
                r.pass = false;
                r.witness = "band " + std::to_string(j) + " " + r.witness;
            }
        }
    return r;
}

CheckResult check_cluster_cover(const ClusterCover& cover,
                                const WeightedGraph& spanner, double radius) {
    CheckResult r;
    std::set<int> centers(cover.centers.begin(), cover.centers.end());
    for (int v = 0; v < spanner.n; ++v) {
        if (cover.member_of[v] == -1 || !centers.count(cover.member_of[v])) {
            r.pass = false;
            r.witness = "node " + std::to_string(v) + " unassigned";
            return r;
        }
    }
    for (int c : cover.centers) {
        auto sp = dijkstra(spanner, c);
        for (int v = 0; v < spanner.n; ++v) {
            if (cover.member_of[v] == c && !(sp.dist[v] <= radius + kTol)) {
                r.pass = false;
                r.value = sp.dist[v];
                r.witness = "member " + std::to_string(v) +
                            " beyond radius of " + std::to_string(c);
                return r;
            }
            if (v != c && centers.count(v) && sp.dist[v] <= radius) {
                r.pass = false;
                r.value = sp.dist[v];
                r.witness = "centers " + std::to_string(c) + "," +
                            std::to_string(v) + " within radius";
                return r;
            }
        }
    }
    return r;
}

CheckResult check_cluster_graph(const ClusterGraph& h,
                                const WeightedGraph& spanner,
                                const ClusterCover& cover,
                                const PhaseParams& params, int dimension,
                                const std::vector<Edge>& sample_edges,
                                std::size_t max_samples) {
    CheckResult r;
    for (const auto& [a, x, w] : h.intra) {
        if (cover.member_of[x] != a || a == x) {
            r.pass = false;
            r.witness = "intra edge not center-member";
            return r;
        }
        auto sp = dijkstra(spanner, a, w + kTol);
        if (std::abs(sp.dist[x] - w) > kTol) {
            r.pass = false;
            r.witness = "intra weight not sp_G'";
            return r;
        }
    }
    const double bound = (2.0 * params.delta + 1.0) * h.w_prev;
    std::map<int, std::size_t> deg;
    for (const auto& [a, b, w] : h.inter) {
        if (w > bound + kTol) {
            r.pass = false;
            r.value = w;
            r.witness = "inter edge {" + std::to_string(a) + "," +
                        std::to_string(b) + "} over (2d+1)W";
            return r;
        }
        ++deg[a];
        ++deg[b];
        auto sp = dijkstra(spanner, a, w + kTol);
        if (std::abs(sp.dist[b] - w) > kTol) {
            r.pass = false;
            r.witness = "inter weight not sp_G'";
            return r;
        }
    }
    double degree_bound = std::pow(5.0 + 1.0 / params.delta, dimension);
    for (const auto& [c, k] : deg)
        if (static_cast<double>(k) > degree_bound) {
            r.pass = false;
            r.value = static_cast<double>(k);
            r.witness = "inter degree of " + std::to_string(c) +
                        " over (5+1/delta)^d";
            return r;
        }

    // Path-length sandwich on sampled bin edges with both endpoints
    // connected in the partial spanner.
    WeightedGraph hg = h.to_graph();
    const double factor =
        (1.0 + 6.0 * params.delta) / (1.0 - 2.0 * params.delta);
    std::size_t step = std::max<std::size_t>(
        1, sample_edges.size() / std::max<std::size_t>(max_samples, 1));
    std::size_t checked = 0;
    for (std::size_t i = 0; i < sample_edges.size() && checked < max_samples;
         i += step) {
        const Edge& e = sample_edges[i];
        auto l1 = dijkstra(spanner, e.u).dist[e.v];
        if (l1 == kInf) continue;
        auto l2 = dijkstra(hg, e.u).dist[e.v];
        ++checked;
        if (!(l1 - kTol <= l2 && l2 <= factor * l1 + kTol)) {
            r.pass = false;
            r.value = l2;
            r.witness = "sandwich violated on " + edge_str(e) +
                        " (L1=" + std::to_string(l1) + ")";
            return r;
        }
    }
    r.value = static_cast<double>(checked);
    return r;
}

CheckResult check_dj_metric(const std::vector<Edge>& added,
                            const WeightedGraph& h, std::size_t max_triples) {
    CheckResult r;
    const std::size_t k = added.size();
    if (k == 0) return r;

    std::map<int, std::vector<double>> sp;
    for (const Edge& e : added)
        for (int v : {e.u, e.v})
            if (!sp.count(v)) sp[v] = dijkstra(h, v).dist;

    auto dj = [&](const Edge& a, const Edge& b) {
        double straight = sp[a.u][b.u] + sp[a.v][b.v];
        double crossed = sp[a.u][b.v] + sp[a.v][b.u];
        return std::min(straight, crossed);
    };

    std::vector<std::vector<double>> d(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) d[i][j] = dj(added[i], added[j]);

    for (std::size_t i = 0; i < k; ++i) {
        if (d[i][i] != 0.0) {
            r.pass = false;
            r.witness = "identity failed at " + edge_str(added[i]);
            return r;
        }
        for (std::size_t j = i + 1; j < k; ++j)
            if (std::abs(d[i][j] - d[j][i]) > kTol) {
                r.pass = false;
                r.witness = "symmetry failed";
                return r;
            }
    }

    auto check_triple = [&](std::size_t a, std::size_t b, std::size_t c) {
        return d[a][c] <= d[a][b] + d[b][c] + kTol &&
               d[a][b] <= d[a][c] + d[c][b] + kTol &&
               d[b][a] <= d[b][c] + d[c][a] + kTol;
    };

    std::size_t total = k * (k - 1) * (k - 2) / 6;
    if (total <= max_triples) {
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = a + 1; b < k; ++b)
                for (std::size_t c = b + 1; c < k; ++c)
                    if (!check_triple(a, b, c)) {
                        r.pass = false;
                        r.witness = "triangle failed";
                        return r;
                    }
        r.value = static_cast<double>(total);
    } else {
        std::uint64_t state = 0x9e3779b97f4a7c15ull;
        auto next = [&]() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            return state;
        };
        for (std::size_t s = 0; s < max_triples; ++s) {
            std::size_t a = next() % k, b = next() % k, c = next() % k;
            if (a == b || b == c || a == c) continue;
            if (!check_triple(a, b, c)) {
                r.pass = false;
                r.witness = "triangle failed (sampled)";
                return r;
            }
        }
        r.value = static_cast<double>(max_triples);
    }
    return r;
}

CheckResult check_no_redundant_pair(const std::vector<Edge>& survivors,
                                    const WeightedGraph& h,
                                    const UbgInstance& inst, double t1) {
    CheckResult r;
    for (std::size_t i = 0; i < survivors.size(); ++i)
        for (std::size_t j = i + 1; j < survivors.size(); ++j)
            if (mutually_redundant(survivors[i], survivors[j], h, inst, t1)) {
                r.pass = false;
                r.witness = edge_str(survivors[i]) + " and " +
                            edge_str(survivors[j]) + " still redundant";
                return r;
            }
    return r;
}

}  // namespace verify
}  // namespace ubgspan
