#pragma once

#include <vector>

#include "ubgspan/geometry.hpp"

namespace ubgspan {

// Phase parameters of the relaxed greedy algorithm. All values are pinned by
// derive_params from (t, alpha, n); validate() checks the mutual constraints:
//   0 < theta < pi/4 and t >= 1/(cos theta - sin theta)
//   0 < delta <= (t - t1)/4, delta < (t-1)/(6+2t), delta < (t1-1)/(6+2t1)
//   t_delta = t1 (1-2 delta)/(1+6 delta) > 1
//   1 < r < (t_delta + 1)/2
//   1 < beta < 2, and beta < 1/(1 - t*alpha) when t*alpha < 1
struct PhaseParams {
    double t = 0.0;
    double t1 = 0.0;
    double delta = 0.0;
    double t_delta = 0.0;
    double r = 0.0;
    double theta = 0.0;
    double beta = 0.0;
    double alpha = 0.0;
    int n = 0;
    int m = 0;                       // bins 0..m
    std::vector<double> bin_widths;  // W_i = r^i * alpha / n, i = 0..m

    // Hop cap for cluster-graph path queries: 2 + ceil(t r / delta).
    int hop_cap() const;
    void validate() const;  // throws std::logic_error with the violated rule
};

PhaseParams derive_params(double t, double alpha, int n);

// Partition of the instance edges into bins E_0..E_m:
// E_0 holds lengths in (0, alpha/n], E_i lengths in (W_{i-1}, W_i].
// Throws UsageError if an edge is longer than 1 or degenerate.
std::vector<std::vector<Edge>> bin_edges(const UbgInstance& inst,
                                         const PhaseParams& params);

// Bin index of a single length under the same half-open rule.
int bin_index(double len, const PhaseParams& params);

}  // namespace ubgspan
