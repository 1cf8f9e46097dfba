#pragma once

#include <cstddef>
#include <tuple>
#include <utility>
#include <vector>

#include "ubgspan/params.hpp"
#include "ubgspan/weighted_graph.hpp"

namespace ubgspan {

// Comparison slack: shortest-path comparisons prefer adding an edge when the
// decision is within this margin, so the t-spanner certificate can never fail
// by rounding.
constexpr double kSpSlack = 1e-9;

// Greedy cluster cover of radius delta * W_{i-1} over the partial spanner:
// every node is assigned to a center within graph distance `radius`, and
// distinct centers are separated by more than `radius`.
struct ClusterCover {
    std::vector<int> centers;          // ascending
    std::vector<int> member_of;        // per node: its center id
    std::vector<double> dist_to_center;  // sp_{G'}(center, node)
    double radius = 0.0;
};

// Smallest-id-first greedy cover; claims use full-graph Dijkstra so the
// center-separation invariant holds in G'_{i-1} itself.
ClusterCover compute_cluster_cover(const WeightedGraph& spanner, double radius);

// Covered-edge test of the Czumaj-Zhao condition: {u,v} is covered iff some z
// with a kept edge {u,z} satisfies |vz| <= alpha and angle(vuz) <= theta, or
// symmetrically at v. Angles are recovered from distances alone.
bool is_covered_edge(const Edge& e, const UbgInstance& inst,
                     const WeightedGraph& kept, const PhaseParams& params);

struct QueryEdge {
    Edge edge;        // oriented so edge endpoint `x` lies in cluster a
    int x = 0, y = 0;
    int a = 0, b = 0;  // cluster centers, a < b
    double len = 0.0;
    double objective = 0.0;  // t |xy| - sp(a,x) - sp(b,y)
};

struct QuerySelection {
    std::vector<QueryEdge> queries;   // one per cluster pair, sorted by edge
    std::vector<Edge> candidates;     // non-covered bin edges
    std::size_t covered_count = 0;
    std::size_t max_cluster_queries = 0;  // max queries incident to a cluster
};

// Per nonempty cluster pair, the candidate minimizing
// t |xy| - sp(a,x) - sp(b,y), ties by lexicographic edge. Throws
// ModelViolationError if a bin edge has both endpoints in one cluster.
QuerySelection select_query_edges(const std::vector<Edge>& bin,
                                  const ClusterCover& cover,
                                  const WeightedGraph& kept,
                                  const UbgInstance& inst,
                                  const PhaseParams& params);

// Das-Narasimhan cluster graph H_{i-1}: intra edges center-member, inter
// edges between centers with sp <= W_prev or a kept edge crossing the two
// clusters; all weights are exact sp_{G'}.
struct ClusterGraph {
    int n = 0;
    double w_prev = 0.0;
    std::vector<std::tuple<int, int, double>> intra;  // (center, member, sp)
    std::vector<std::tuple<int, int, double>> inter;  // (a, b, sp), a < b
    std::size_t max_inter_degree = 0;

    WeightedGraph to_graph() const;
};

ClusterGraph build_cluster_graph(const WeightedGraph& kept,
                                 const ClusterCover& cover, double w_prev);

struct QueryAnswer {
    bool add = false;
    double sp_h = kInf;  // shortest xy-path length in H
    int hops = -1;       // hops of that path when finite
};

// Shortest-path query on the cluster graph: add iff sp_H(x,y) exceeds
// t |xy| (with slack in the adding direction). When a qualifying path
// exists, its hop count is certified against 2 + ceil(t r / delta).
QueryAnswer answer_query(const WeightedGraph& h, const Edge& e, double len,
                         const PhaseParams& params);

struct RedundancyResult {
    std::vector<Edge> survivors;
    std::vector<Edge> removed;
    std::vector<std::pair<Edge, Edge>> redundant_pairs;  // conflict graph J
    int mis_size = 0;
};

// Mutual-redundancy elimination: builds the conflict graph over this phase's
// additions and keeps a maximal independent set (greedy by smallest edge id).
RedundancyResult remove_redundant(const std::vector<Edge>& added,
                                  const WeightedGraph& h,
                                  const UbgInstance& inst,
                                  const PhaseParams& params);

// True iff the two additions are mutually redundant through H (both endpoint
// pairings are considered).
bool mutually_redundant(const Edge& e1, const Edge& e2,
                        const WeightedGraph& h, const UbgInstance& inst,
                        double t1);

// Phase-0: per connected component of the E_0 graph (short components span
// less than alpha, so they induce cliques in G), run the sequential greedy on
// the component's E_0 edges.
// Throws ModelViolationError if a component is not a clique in G.
std::vector<Edge> process_short_edges(const UbgInstance& inst,
                                      const std::vector<Edge>& bin0, double t);

struct PhaseMetrics {
    int index = 0;
    double w_prev = 0.0;
    std::size_t bin_size = 0;
    std::size_t covered = 0;
    std::size_t candidates = 0;
    std::size_t queries = 0;
    std::size_t added = 0;
    std::size_t removed = 0;
    std::size_t clusters = 0;
    std::size_t max_cluster_queries = 0;
    std::size_t max_inter_degree = 0;
    int max_answer_hops = -1;  // over answered (non-added) queries
};

// Retained only on request; used by the verification harness.
struct PhaseSnapshot {
    int index = 0;
    double w_prev = 0.0;
    std::vector<Edge> bin;
    ClusterCover cover;
    ClusterGraph cluster_graph;
    std::vector<QueryEdge> queries;
    std::vector<QueryAnswer> answers;
    std::vector<Edge> added;
    std::vector<Edge> removed;
    std::vector<std::pair<Edge, Edge>> redundant_pairs;
    std::vector<Edge> kept_before;  // G'_{i-1} edge set
};

struct RelaxedResult {
    std::vector<Edge> spanner;
    PhaseParams params;
    std::vector<PhaseMetrics> phases;     // phase 0 plus nonempty phases
    std::vector<PhaseSnapshot> snapshots; // nonempty phases, if requested
    int max_answer_hops = -1;
};

// The full m+1 phase relaxed greedy run. Empty bins are skipped; the phase
// index still advances so W_i bookkeeping matches the binning.
RelaxedResult run_relaxed_greedy(const UbgInstance& inst, double t,
                                 bool keep_snapshots = false);

}  // namespace ubgspan
