#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "ubgspan/params.hpp"

using namespace ubgspan;

TEST_CASE("derived parameters at t=1.5 match the closed forms") {
    auto p = derive_params(1.5, 0.7, 100);
    CHECK(p.t1 == doctest::Approx(1.25).epsilon(1e-15));
    CHECK(p.delta == doctest::Approx(0.014705882352941176).epsilon(1e-14));
    CHECK(p.t_delta == doctest::Approx(1.114864864864865).epsilon(1e-14));
    CHECK(p.r == doctest::Approx(1.0287162162162162).epsilon(1e-14));
    CHECK(p.beta == doctest::Approx(1.5).epsilon(1e-15));  // t*alpha >= 1
}

TEST_CASE("theta at t=2 matches the closed-form evaluation") {
    auto p = derive_params(2.0, 0.7, 100);
    double theta_max =
        std::acos(1.0 / (2.0 * std::numbers::sqrt2)) - std::numbers::pi / 4.0;
    CHECK(theta_max == doctest::Approx(0.4240310394907405).epsilon(1e-12));
    CHECK(p.theta == doctest::Approx(0.95 * theta_max).epsilon(1e-12));
    CHECK(p.theta == doctest::Approx(0.4028294875162035).epsilon(1e-12));
}

TEST_CASE("derived parameters satisfy their own invariants") {
    for (double t : {1.01, 1.1, 1.3, 1.5, 2.0, 3.0, 5.0})
        for (double alpha : {0.3, 0.6, 1.0})
            CHECK_NOTHROW(derive_params(t, alpha, 200).validate());
}

TEST_CASE("beta respects the t*alpha < 1 case split") {
    auto p = derive_params(1.2, 0.5, 50);  // t*alpha = 0.6 < 1
    CHECK(p.beta < 1.0 / (1.0 - 1.2 * 0.5));
    CHECK(p.beta > 1.0);
    CHECK(p.beta < 2.0);
}

TEST_CASE("bin widths follow W_i = r^i alpha / n") {
    auto p = derive_params(1.5, 0.7, 100);
    CHECK(p.bin_widths[0] == doctest::Approx(0.7 / 100).epsilon(1e-15));
    for (int i = 1; i <= p.m; ++i)
        CHECK(p.bin_widths[i] ==
              doctest::Approx(p.bin_widths[i - 1] * p.r).epsilon(1e-12));
    CHECK(p.bin_widths[p.m] >= 1.0 - 1e-12);
}

TEST_CASE("bin boundaries are right-closed") {
    auto p = derive_params(1.5, 0.7, 100);
    CHECK(bin_index(p.bin_widths[0], p) == 0);
    CHECK(bin_index(p.bin_widths[3], p) == 3);
    CHECK(bin_index(p.bin_widths[3] * (1 + 1e-12), p) == 4);
}

TEST_CASE("tiny instances land entirely in E_0") {
    // All points within alpha/n of each other.
    UbgInstance inst;
    inst.d = 2;
    inst.alpha = 0.8;
    double s = 0.8 / 4 / 10;
    inst.points = {{0, 0}, {s, 0}, {0, s}, {s, s}};
    for (int u = 0; u < 4; ++u)
        for (int v = u + 1; v < 4; ++v) inst.edges.push_back({u, v});
    auto p = derive_params(1.5, inst.alpha, inst.n());
    auto bins = bin_edges(inst, p);
    CHECK(bins[0].size() == 6);
    for (int i = 1; i <= p.m; ++i) CHECK(bins[i].empty());
}

TEST_CASE("bin index matches the closed-form logarithm oracle") {
    auto inst = oracles::small_instance(100, 0.7, 5);
    auto p = derive_params(1.5, 0.7, 100);
    auto bins = bin_edges(inst, p);
    for (int i = 0; i <= p.m; ++i)
        for (const Edge& e : bins[i]) {
            double len = inst.edge_length(e);
            if (len <= p.bin_widths[0]) {
                CHECK(i == 0);
                continue;
            }
            double raw = std::log(len * p.n / p.alpha) / std::log(p.r);
            int want = static_cast<int>(std::ceil(raw));
            // At an exact bin boundary the log form is ambiguous by one ulp.
            if (std::abs(raw - std::round(raw)) > 1e-9)
                CHECK(i == want);
            else
                CHECK((i == want || i == want + 1));
        }
}

TEST_CASE("overlong edges are rejected") {
    auto p = derive_params(1.5, 0.7, 100);
    CHECK_THROWS_AS(bin_index(1.1, p), UsageError);
    CHECK_THROWS_AS(bin_index(0.0, p), UsageError);
}

TEST_CASE("hop cap formula") {
    auto p = derive_params(1.5, 0.7, 100);
    CHECK(p.hop_cap() ==
          2 + static_cast<int>(std::ceil(p.t * p.r / p.delta)));
}
