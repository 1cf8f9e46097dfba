#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ubgspan {

// Unit-free point in d-dimensional Euclidean space.
using Point = std::vector<double>;

// Undirected edge, stored with u < v.
struct Edge {
    int u = 0;
    int v = 0;

    Edge() = default;
    Edge(int a, int b) : u(a < b ? a : b), v(a < b ? b : a) {}

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge& a, const Edge& b) {
        if (auto c = a.u <=> b.u; c != 0) return c;
        return a.v <=> b.v;
    }
};

// Inclusion rule for pairs whose distance falls in the (alpha, 1] band.
struct GenPolicy {
    enum class Kind { All, None, Bernoulli };
    Kind kind = Kind::All;
    double p = 0.0;  // Bernoulli inclusion probability

    static GenPolicy all() { return {Kind::All, 0.0}; }
    static GenPolicy none() { return {Kind::None, 0.0}; }
    static GenPolicy bernoulli(double p) { return {Kind::Bernoulli, p}; }
    static GenPolicy parse(const std::string& s);
    std::string str() const;

    friend bool operator==(const GenPolicy&, const GenPolicy&) = default;
};

// Point set in R^d together with the alpha-UBG edge set.
// Pairs at distance <= alpha are always adjacent, pairs beyond 1 never are,
// and the (alpha, 1] band follows `policy`.
struct UbgInstance {
    int d = 2;
    double alpha = 1.0;
    std::uint64_t seed = 0;
    GenPolicy policy = GenPolicy::all();
    std::vector<Point> points;
    std::vector<Edge> edges;  // sorted, u < v, no duplicates

    int n() const { return static_cast<int>(points.size()); }
    double edge_length(const Edge& e) const;
};

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct GenerationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when data contradicts the alpha-UBG model assumptions
// (e.g. a short-edge component that is not a clique).
struct ModelViolationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// L2 distance. Throws UsageError on dimension mismatch.
double euclid(const Point& p, const Point& q);

// Angle at the apex of a triangle given its three side lengths:
// returns arccos((d_uv^2 + d_uz^2 - d_vz^2) / (2 d_uv d_uz)), clamped to [0, pi].
// d_uv and d_uz must be positive and the three lengths must satisfy the
// triangle inequality within 1e-9.
double angle_from_distances(double d_uv, double d_uz, double d_vz);

// Deterministic instance generator: n points uniform in a cube scaled for
// plausible connectivity, mandatory edges within alpha, band edges per policy.
// Retries with a 10% smaller cube (max 20 times) until connected.
UbgInstance generate_instance(int n, int d, double alpha, GenPolicy policy,
                              std::uint64_t seed);

struct Violation {
    std::string kind;  // "long_edge", "missing_mandatory", "self_loop", ...
    int u = -1;
    int v = -1;
    double value = 0.0;
};

// Reports every violated UBG constraint; empty iff valid.
std::vector<Violation> validate_instance(const UbgInstance& inst);

}  // namespace ubgspan
