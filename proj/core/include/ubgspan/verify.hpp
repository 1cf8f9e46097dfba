#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ubgspan/relaxed.hpp"

namespace ubgspan {
namespace verify {

struct CheckResult {
    bool pass = true;
    double value = 0.0;
    std::string witness;
};

using Report = std::map<std::string, CheckResult>;

// t-spanner certificate: pass iff every instance edge is stretched at most
// t + 1e-9 in the spanner (per-edge check; a per-edge bound extends to all
// pairs by shortest-path decomposition).
CheckResult check_spanner(const UbgInstance& inst,
                          const std::vector<Edge>& spanner_edges, double t);

// Exact maximum degree of the spanner edge set.
int check_degree(const std::vector<Edge>& spanner_edges);

// w(G') / w(MST(G)); fails when the spanner is disconnected (a t-spanner of a
// connected graph must be connected).
CheckResult weight_ratio(const UbgInstance& inst,
                         const std::vector<Edge>& spanner_edges);

// Sum over nodes of the maximum incident edge weight.
double power_cost(const UbgInstance& inst,
                  const std::vector<Edge>& spanner_edges);

// (t2, t)-leapfrog property, checked per weight band F_j (F_0: lengths <=
// alpha, F_j: lengths in (alpha beta^{j-1}, alpha beta^j]) over every ordered
// cyclic subset of size 2..max_subset whose first edge is a longest one.
CheckResult check_leapfrog(const UbgInstance& inst,
                           const std::vector<Edge>& edges, double t2, double t,
                           double beta, int max_subset);

// Upper end of the feasibility window for t2; empty when the min is <= 1.
double leapfrog_t2_window(const PhaseParams& params);
std::optional<double> pick_leapfrog_t2(const PhaseParams& params);

// Re-verifies membership radii and center separation with independent
// Dijkstra runs over the partial spanner.
CheckResult check_cluster_cover(const ClusterCover& cover,
                                const WeightedGraph& spanner, double radius);

// Re-verifies inter-edge weight bound (2 delta + 1) W, the recorded
// inter-degree bound (5 + 1/delta)^d, and the path-length sandwich
// L1 <= L2 <= (1+6 delta)/(1-2 delta) L1 on sampled bin edges.
CheckResult check_cluster_graph(const ClusterGraph& h,
                                const WeightedGraph& spanner,
                                const ClusterCover& cover,
                                const PhaseParams& params, int dimension,
                                const std::vector<Edge>& sample_edges,
                                std::size_t max_samples = 50);

// Metric axioms of the conflict-graph distance d_J over a set of same-phase
// additions: symmetry, identity, and the triangle inequality over all triples
// (sampled deterministically when more than `max_triples` exist).
CheckResult check_dj_metric(const std::vector<Edge>& added,
                            const WeightedGraph& h,
                            std::size_t max_triples = 10000);

// No two surviving same-phase additions may remain mutually redundant.
CheckResult check_no_redundant_pair(const std::vector<Edge>& survivors,
                                    const WeightedGraph& h,
                                    const UbgInstance& inst, double t1);

}  // namespace verify
}  // namespace ubgspan
