#pragma once

#include <vector>

#include "ubgspan/weighted_graph.hpp"

namespace ubgspan {

// Examination trace of the greedy run: edges in the order considered and
// whether each was added.
struct GreedyTrace {
    std::vector<Edge> order;
    std::vector<double> lengths;
    std::vector<char> added;
};

// Classical sequential greedy spanner. Edges are examined in non-decreasing
// length (ties by lexicographic endpoint ids); an edge is added iff the
// current partial spanner has no path of length <= t * w between its
// endpoints. Requires t >= 1.
std::vector<Edge> seq_greedy(const WeightedGraph& g, double t,
                             GreedyTrace* trace = nullptr);

}  // namespace ubgspan
