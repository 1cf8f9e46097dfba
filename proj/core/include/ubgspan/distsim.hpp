#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "ubgspan/relaxed.hpp"

namespace ubgspan {

// Thrown when the simulator exceeds its round safety cap.
struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SimConfig {
    UbgInstance inst;
    double t = 1.5;
    PhaseParams params;
    std::uint64_t seed = 0;       // recorded; the protocol itself is deterministic
    long max_rounds = 5'000'000;  // executed-round safety cap
    bool keep_snapshots = false;
};

// Local subgraph view after `hops` rounds of neighbor-relay flooding. A node
// always knows at least its closed neighborhood (hops = 0).
struct LocalView {
    std::vector<int> nodes;                           // sorted
    std::vector<std::tuple<int, int, double>> edges;  // induced, u < v
};

LocalView gather_khop(const WeightedGraph& g, int node, int hops);

struct MisResult {
    std::vector<char> in_set;
    int iterations = 0;
};

// Round-structured maximal independent set: every undecided node whose rank
// is maximal among undecided neighbors joins, its neighbors withdraw.
// Ranks must be distinct.
MisResult mis_local_maxima(const std::vector<std::vector<int>>& adj,
                           const std::vector<std::uint64_t>& rank);

// Conflict-graph distance between two same-phase additions: the smaller of
// the two endpoint pairings, measured by shortest paths in the cluster graph.
double dj_distance(const Edge& a, const Edge& b, const WeightedGraph& h);

// Retained per nonempty phase when keep_snapshots is set.
struct DistPhaseSnapshot {
    int index = 0;
    double w_prev = 0.0;
    std::vector<Edge> bin;
    ClusterCover cover;
    ClusterGraph cluster_graph;   // union of head-local incidences
    std::vector<Edge> queries;
    std::vector<char> decisions;  // parallel to queries
    std::vector<Edge> added;
    std::vector<Edge> removed;
    std::vector<std::pair<Edge, Edge>> redundant_pairs;
    std::vector<Edge> kept_before;
    int cover_mis_iterations = 0;
    int redundancy_mis_iterations = 0;
};

struct GatherRadii {
    int cover = 0;         // ceil(2 d W / alpha)
    int query_select = 0;  // 1 + cover
    int cluster_graph = 0; // ceil(2 (2d+1) W / alpha)
    int query_answer = 0;  // ceil(2 t r W / alpha)
    int redundancy = 0;    // ceil(2 t1 r W / alpha)
};

GatherRadii gather_radii(const PhaseParams& params, double w_prev);

struct SimTranscript {
    long rounds_total = 0;  // sum over steps, scheduled-silent phases included
    std::map<std::string, long> rounds_by_step;
    long rounds_nonempty_phases = 0;  // empty bins cost 0 in this accounting
    long max_payload_words = 0;
    bool payload_flagged = false;
    long messages_total = 0;
    std::vector<long> round_messages;  // executed rounds only
    long locality_violations = 0;      // record seen beyond its gather radius
    int phases_total = 0;
    int phases_nonempty = 0;
    int max_answer_hops = -1;
    int max_gather_radius = 0;
    int mis_iterations_max = 0;
    std::vector<Edge> spanner;
    std::vector<PhaseMetrics> phase_metrics;  // phase 0 + nonempty phases
    std::vector<DistPhaseSnapshot> snapshots;
};

// Lock-step synchronous execution of the distributed relaxed greedy
// algorithm: all sends of round k are delivered at round k+1, nodes act only
// on delivered records, scheduling within a round is by ascending id.
SimTranscript run_distributed(const SimConfig& cfg);

}  // namespace ubgspan
