#include "ubgspan/params.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ubgspan {

namespace {
void require(bool ok, const std::string& rule) {
    if (!ok) throw std::logic_error("PhaseParams: violated " + rule);
}
}  // namespace

int PhaseParams::hop_cap() const {
    return 2 + static_cast<int>(std::ceil(t * r / delta));
}

void PhaseParams::validate() const {
    require(t > 1.0, "t > 1");
    require(t1 > 1.0 && t1 < t, "1 < t1 < t");
    require(theta > 0.0 && theta < std::numbers::pi / 4.0, "0 < theta < pi/4");
    require(t >= 1.0 / (std::cos(theta) - std::sin(theta)),
            "t >= 1/(cos theta - sin theta)");
    require(delta > 0.0 && delta <= (t - t1) / 4.0, "0 < delta <= (t-t1)/4");
    require(delta < (t - 1.0) / (6.0 + 2.0 * t), "delta < (t-1)/(6+2t)");
    require(delta < (t1 - 1.0) / (6.0 + 2.0 * t1), "delta < (t1-1)/(6+2t1)");
    require(std::abs(t_delta - t1 * (1.0 - 2.0 * delta) / (1.0 + 6.0 * delta)) <
                1e-12,
            "t_delta = t1 (1-2d)/(1+6d)");
    require(t_delta > 1.0, "t_delta > 1");
    require(r > 1.0 && r < (t_delta + 1.0) / 2.0, "1 < r < (t_delta+1)/2");
    require(beta > 1.0 && beta < 2.0, "1 < beta < 2");
    if (t * alpha < 1.0)
        require(beta < 1.0 / (1.0 - t * alpha), "beta < 1/(1-t alpha)");
    require(m == static_cast<int>(
                     std::ceil(std::log(n / alpha) / std::log(r))),
            "m = ceil(log_r(n/alpha))");
    require(static_cast<int>(bin_widths.size()) == m + 1, "bin widths 0..m");
    for (int i = 0; i <= m; ++i)
        require(std::abs(bin_widths[i] - std::pow(r, i) * alpha / n) < 1e-12,
                "W_i = r^i alpha/n");
}

PhaseParams derive_params(double t, double alpha, int n) {
    if (!(t > 1.0)) throw UsageError("derive_params: t must be > 1");
    if (!(alpha > 0.0) || alpha > 1.0)
        throw UsageError("derive_params: alpha must be in (0,1]");
    if (n < 1) throw UsageError("derive_params: n must be >= 1");

    PhaseParams p;
    p.t = t;
    p.alpha = alpha;
    p.n = n;
    p.t1 = (1.0 + t) / 2.0;
    // The strengthened delta bound keeps t_delta > 1 so the r-interval
    // (1, (t_delta+1)/2) is nonempty; factor 0.5 keeps every strict
    // inequality strict with margin.
    p.delta = 0.5 * std::min((p.t1 - 1.0) / (6.0 + 2.0 * p.t1),
                             (t - p.t1) / 4.0);
    p.t_delta = p.t1 * (1.0 - 2.0 * p.delta) / (1.0 + 6.0 * p.delta);
    p.r = (1.0 + (p.t_delta + 1.0) / 2.0) / 2.0;

    double theta_max = std::acos(1.0 / (std::numbers::sqrt2 * t)) -
                       std::numbers::pi / 4.0;
    p.theta = std::clamp(0.95 * theta_max, 1e-12,
                         std::numbers::pi / 4.0 - 1e-12);

    double beta_hi = 2.0;
    if (t * alpha < 1.0) beta_hi = std::min(2.0, 1.0 / (1.0 - t * alpha));
    p.beta = (1.0 + beta_hi) / 2.0;

    p.m = static_cast<int>(std::ceil(std::log(n / alpha) / std::log(p.r)));
    p.bin_widths.resize(p.m + 1);
    for (int i = 0; i <= p.m; ++i)
        p.bin_widths[i] = std::pow(p.r, i) * alpha / n;

    p.validate();
    return p;
}

int bin_index(double len, const PhaseParams& params) {
    if (!(len > 0.0)) throw UsageError("bin_index: nonpositive length");
    if (len > 1.0 + 1e-9)
        throw UsageError("bin_index: edge longer than 1 (invalid instance)");
    if (len <= params.bin_widths[0]) return 0;
    // Intervals are half-open right-closed: E_i = (W_{i-1}, W_i].
    auto it = std::lower_bound(params.bin_widths.begin(),
                               params.bin_widths.end(), len);
    int idx = static_cast<int>(it - params.bin_widths.begin());
    // W_m >= 1 holds in exact arithmetic; absorb rounding at the very top.
    return std::min(idx, params.m);
}

std::vector<std::vector<Edge>> bin_edges(const UbgInstance& inst,
                                         const PhaseParams& params) {
    std::vector<std::vector<Edge>> bins(params.m + 1);
    for (const Edge& e : inst.edges)
        bins[bin_index(inst.edge_length(e), params)].push_back(e);
    for (auto& b : bins) std::sort(b.begin(), b.end());
    return bins;
}

}  // namespace ubgspan
