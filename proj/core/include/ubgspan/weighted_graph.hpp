#pragma once

#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "ubgspan/geometry.hpp"

namespace ubgspan {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Undirected graph with strictly positive finite edge weights.
struct WeightedGraph {
    int n = 0;
    std::vector<std::vector<std::pair<int, double>>> adj;

    WeightedGraph() = default;
    explicit WeightedGraph(int nodes) : n(nodes), adj(nodes) {}

    void add_edge(int u, int v, double w);
    bool has_edge(int u, int v) const;
    double weight(int u, int v) const;  // kInf if absent
    std::size_t edge_count() const;
    std::vector<Edge> edge_list() const;  // sorted lexicographically
    int degree(int v) const { return static_cast<int>(adj[v].size()); }
    void sort_adjacency();
};

// Builds the weighted graph of an instance (weights = Euclidean lengths).
WeightedGraph instance_graph(const UbgInstance& inst);

// Builds a graph on inst.n() nodes from an edge subset of the instance.
WeightedGraph subgraph_of(const UbgInstance& inst, const std::vector<Edge>& edges);

struct ShortestPathResult {
    int source = 0;
    std::vector<double> dist;   // kInf if unreachable or beyond cutoff
    std::vector<int> parent;    // -1 at source / unreachable
    std::vector<int> hops;      // hop count of the (dist, hops)-minimal path
};

// Exact single-source shortest paths; ties broken first by hop count, then by
// smaller node id, making parents and hop counts deterministic. With a cutoff,
// nodes whose distance exceeds it carry kInf.
ShortestPathResult dijkstra(const WeightedGraph& g, int source,
                            std::optional<double> radius_cutoff = std::nullopt);

std::vector<std::vector<int>> connected_components(const WeightedGraph& g);

// Exact MST weight, deterministic Kruskal order (weight, then lexicographic
// edge). Throws UsageError if g is disconnected.
double mst_weight(const WeightedGraph& g);

struct StretchResult {
    double max_stretch = 1.0;
    Edge witness;
};

// Max over edges {u,v} of g of sp_sub(u,v) / w(u,v), with a witness edge.
// sub must be a spanning subgraph of g over the same nodes.
StretchResult edge_stretch(const WeightedGraph& g, const WeightedGraph& sub);

}  // namespace ubgspan
