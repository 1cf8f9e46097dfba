#include "ubgspan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace ubgspan {

namespace {

constexpr double kLenTol = 1e-9;

// Uniform double in [0,1) from the top 53 bits of the generator output.
double unit_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Volume of the d-dimensional ball of radius r.
double ball_volume(int d, double r) {
    double v = std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
    return v * std::pow(r, d);
}

struct DisjointSets {
    std::vector<int> parent;
    explicit DisjointSets(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[b] = a;
        return true;
    }
};

}  // namespace

GenPolicy GenPolicy::parse(const std::string& s) {
    if (s == "all") return all();
    if (s == "none") return none();
    if (s.rfind("bernoulli:", 0) == 0) {
        double p = 0.0;
        try {
            p = std::stod(s.substr(10));
        } catch (const std::exception&) {
            throw UsageError("bad policy probability in '" + s + "'");
        }
        if (p < 0.0 || p > 1.0)
            throw UsageError("policy probability out of [0,1]: " + s);
        return bernoulli(p);
    }
    throw UsageError("unknown band policy '" + s +
                     "' (expected all, none, or bernoulli:p)");
}

std::string GenPolicy::str() const {
    switch (kind) {
        case Kind::All: return "all";
        case Kind::None: return "none";
        case Kind::Bernoulli: {
            char buf[48];
            std::snprintf(buf, sizeof buf, "bernoulli:%.17g", p);
            return buf;
        }
    }
    return "all";
}

double UbgInstance::edge_length(const Edge& e) const {
    return euclid(points[e.u], points[e.v]);
}

double euclid(const Point& p, const Point& q) {
    if (p.size() != q.size())
        throw UsageError("euclid: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        double d = p[i] - q[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double angle_from_distances(double d_uv, double d_uz, double d_vz) {
    if (!(d_uv > 0.0) || !(d_uz > 0.0))
        throw UsageError("angle_from_distances: degenerate zero-length side");
    if (d_vz < 0.0)
        throw UsageError("angle_from_distances: negative length");
    if (d_vz > d_uv + d_uz + kLenTol || d_uv > d_uz + d_vz + kLenTol ||
        d_uz > d_uv + d_vz + kLenTol)
        throw UsageError("angle_from_distances: triangle inequality violated");
    double c = (d_uv * d_uv + d_uz * d_uz - d_vz * d_vz) / (2.0 * d_uv * d_uz);
    c = std::clamp(c, -1.0, 1.0);
    return std::acos(c);
}

UbgInstance generate_instance(int n, int d, double alpha, GenPolicy policy,
                              std::uint64_t seed) {
    if (n < 1) throw UsageError("generate_instance: n must be >= 1");
    if (d < 2) throw UsageError("generate_instance: d must be >= 2");
    if (!(alpha > 0.0) || alpha > 1.0)
        throw UsageError("generate_instance: alpha must be in (0, 1]");

    // Cube side targeting an expected alpha-neighborhood of ~log(n)+3 points,
    // which keeps the mandatory-edge graph plausibly connected.
    double target = std::log(static_cast<double>(n)) + 3.0;
    double side = std::pow(n * ball_volume(d, alpha) / target, 1.0 / d);
    if (n == 1) side = alpha;

    std::mt19937_64 rng(seed);
    const int max_retries = 20;
    for (int attempt = 0; attempt <= max_retries; ++attempt) {
        UbgInstance inst;
        inst.d = d;
        inst.alpha = alpha;
        inst.seed = seed;
        inst.policy = policy;
        inst.points.resize(n);
        for (auto& pt : inst.points) {
            pt.resize(d);
            for (auto& c : pt) c = unit_double(rng) * side;
        }

        bool degenerate = false;
        DisjointSets comps(n);
        for (int u = 0; u < n && !degenerate; ++u) {
            for (int v = u + 1; v < n; ++v) {
                double len = euclid(inst.points[u], inst.points[v]);
                bool keep = false;
                if (len <= alpha) {
                    keep = true;
                    if (len < 1e-12) {
                        degenerate = true;
                        break;
                    }
                } else if (len <= 1.0) {
                    switch (policy.kind) {
                        case GenPolicy::Kind::All: keep = true; break;
                        case GenPolicy::Kind::None: keep = false; break;
                        case GenPolicy::Kind::Bernoulli:
                            keep = unit_double(rng) < policy.p;
                            break;
                    }
                }
                if (keep) {
                    inst.edges.push_back({u, v});
                    comps.unite(u, v);
                }
            }
        }

        bool connected = !degenerate;
        if (connected)
            for (int v = 1; v < n; ++v)
                if (comps.find(v) != comps.find(0)) {
                    connected = false;
                    break;
                }
        if (connected) {
            std::sort(inst.edges.begin(), inst.edges.end());
            return inst;
        }
        side *= 0.9;  // densify and retry
    }
    throw GenerationError("generate_instance: no connected instance after " +
                          std::to_string(max_retries) + " retries (n=" +
                          std::to_string(n) + ", d=" + std::to_string(d) +
                          ", alpha=" + std::to_string(alpha) + ", policy=" +
                          policy.str() + ", seed=" + std::to_string(seed) + ")");
}

std::vector<Violation> validate_instance(const UbgInstance& inst) {
    std::vector<Violation> out;
    const int n = inst.n();

    for (int u = 0; u < n; ++u) {
        if (static_cast<int>(inst.points[u].size()) != inst.d)
            out.push_back({"dimension_mismatch", u, -1,
                           static_cast<double>(inst.points[u].size())});
        for (double c : inst.points[u])
            if (!std::isfinite(c)) {
                out.push_back({"nonfinite_coordinate", u, -1, c});
                break;
            }
    }

    std::vector<Edge> sorted = inst.edges;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const Edge& e = sorted[i];
        if (e.u == e.v) {
            out.push_back({"self_loop", e.u, e.v, 0.0});
            continue;
        }
        if (e.u < 0 || e.v >= n) {
            out.push_back({"bad_node_id", e.u, e.v, 0.0});
            continue;
        }
        if (i > 0 && sorted[i - 1] == e) {
            out.push_back({"duplicate_edge", e.u, e.v, 0.0});
            continue;
        }
        double len = inst.edge_length(e);
        if (len > 1.0 + kLenTol)
            out.push_back({"long_edge", e.u, e.v, len});
        else if (len < 1e-12)
            out.push_back({"degenerate_edge", e.u, e.v, len});
    }

    // Mandatory edges: every pair within alpha must be present.
    std::vector<Edge> dedup = sorted;
    dedup.erase(std::unique(dedup.begin(), dedup.end()), dedup.end());
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            double len = euclid(inst.points[u], inst.points[v]);
            if (len <= inst.alpha - kLenTol &&
                !std::binary_search(dedup.begin(), dedup.end(), Edge{u, v}))
                out.push_back({"missing_mandatory", u, v, len});
        }

    return out;
}

}  // namespace ubgspan
