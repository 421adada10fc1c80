#pragma once

// Synthetic point clouds (rings, filled discs) and signed stochastic block
// model networks.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "semimetric/core.hpp"

namespace semimetric {

struct PointCloud {
    Matrix points; // n x 2
    std::vector<std::size_t> labels;
};

struct RingOptions {
    std::size_t rings = 3;
    std::size_t points_per_ring = 100;
    std::vector<double> radii = {1.0, 1.0, 1.0};
    // Centers sit on a regular polygon with this distance between adjacent
    // centers (two rings: a segment); zero gives concentric rings.
    double center_spacing = 4.0;
    // Radial jitter, uniform on [-noise, noise].
    double noise = 0.0;
    std::uint64_t seed = 0;
};

inline std::vector<std::pair<double, double>> ring_centers(std::size_t rings, double spacing)
{
    std::vector<std::pair<double, double>> centers(rings, {0.0, 0.0});
    if (rings < 2)
        return centers;
    const double step = 2.0 * std::numbers::pi / static_cast<double>(rings);
    const double circumradius = spacing / (2.0 * std::sin(step / 2.0));
    for (std::size_t r = 0; r < rings; ++r) {
        const double a = std::numbers::pi / 2.0 + step * static_cast<double>(r);
        centers[r] = {circumradius * std::cos(a), circumradius * std::sin(a)};
    }
    return centers;
}

inline PointCloud generate_rings(const RingOptions& opts)
{
    if (opts.radii.size() != opts.rings)
        throw Error(Errc::invalid_argument, "one radius per ring required");
    if (opts.noise < 0.0)
        throw Error(Errc::invalid_argument, "noise must be nonnegative");
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> jitter(-1.0, 1.0);
    const auto centers = ring_centers(opts.rings, opts.center_spacing);
    PointCloud cloud{Matrix(opts.rings * opts.points_per_ring, 2), {}};
    cloud.labels.reserve(cloud.points.rows());
    std::size_t row = 0;
    for (std::size_t r = 0; r < opts.rings; ++r)
        for (std::size_t i = 0; i < opts.points_per_ring; ++i, ++row) {
            const double t = angle(rng);
            const double radius = opts.radii[r] + opts.noise * jitter(rng);
            cloud.points(row, 0) = centers[r].first + radius * std::cos(t);
            cloud.points(row, 1) = centers[r].second + radius * std::sin(t);
            cloud.labels.push_back(r);
        }
    return cloud;
}

struct CircleOptions {
    std::size_t circles = 5;
    std::size_t points_per_circle = 250;
    std::vector<std::pair<double, double>> centers;
    double radius_scale = 5.0; // disc radius
    std::uint64_t seed = 0;
};

// Disc centers for the five-disc resolution example: two tight pairs, one
// farther apart than the other, plus a lone disc.
inline std::vector<std::pair<double, double>> five_circle_centers()
{
    return {{0.0, 0.0}, {12.0, 0.0}, {40.0, 0.0}, {60.0, 0.0}, {30.0, 45.0}};
}

// Points uniform over filled discs.
inline PointCloud generate_circles(const CircleOptions& opts)
{
    if (opts.centers.size() != opts.circles)
        throw Error(Errc::invalid_argument, "one center per disc required");
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    PointCloud cloud{Matrix(opts.circles * opts.points_per_circle, 2), {}};
    std::size_t row = 0;
    for (std::size_t c = 0; c < opts.circles; ++c)
        for (std::size_t i = 0; i < opts.points_per_circle; ++i, ++row) {
            const double r = opts.radius_scale * std::sqrt(unit(rng));
            const double t = 2.0 * std::numbers::pi * unit(rng);
            cloud.points(row, 0) = opts.centers[c].first + r * std::cos(t);
            cloud.points(row, 1) = opts.centers[c].second + r * std::sin(t);
            cloud.labels.push_back(c);
        }
    return cloud;
}

struct SignedEdge {
    std::size_t u = 0;
    std::size_t v = 0;
    int sign = 1;

    friend bool operator==(const SignedEdge&, const SignedEdge&) = default;
};

struct SignedGraph {
    std::size_t n = 0;
    std::vector<SignedEdge> edges; // u < v, stored once
    std::vector<std::size_t> labels; // ground-truth block per node

    void validate() const
    {
        for (const auto& e : edges) {
            if (e.u >= e.v || e.v >= n)
                throw Error(Errc::contract_violation, "edges must satisfy u < v < n");
            if (e.sign != 1 && e.sign != -1)
                throw Error(Errc::contract_violation, "edge signs must be +1 or -1");
        }
        if (!labels.empty() && labels.size() != n)
            throw Error(Errc::contract_violation, "one label per node required");
    }
};

struct SbmParams {
    std::size_t n = 200;
    std::size_t n1 = 100;
    double p_in = 0.0;
    double p_out = 0.0;
    double crossover = 0.0;
    std::uint64_t seed = 0;
};

struct BlockProbabilities {
    double p_in = 0.0;
    double p_out = 0.0;
};

// Solves c = (n/2 - 1) p_in + n p_out / 2 together with n p_in - n p_out = cin_minus_cout.
inline BlockProbabilities block_probabilities(std::size_t n, double c, double cin_minus_cout)
{
    if (n < 2)
        throw Error(Errc::config, "need at least two nodes");
    const double nn = static_cast<double>(n);
    BlockProbabilities bp;
    bp.p_in = (c + cin_minus_cout / 2.0) / (nn - 1.0);
    bp.p_out = bp.p_in - cin_minus_cout / nn;
    if (!(bp.p_in >= 0.0 && bp.p_in <= 1.0 && bp.p_out >= 0.0 && bp.p_out <= 1.0))
        throw Error(Errc::config, "average degree and c_in - c_out give infeasible edge probabilities");
    return bp;
}

// Positive edges inside blocks with p_in, negative edges across with p_out,
// every sign flipped with the crossover probability, isolated nodes removed.
inline SignedGraph generate_signed_sbm(const SbmParams& params)
{
    if (params.n1 > params.n)
        throw Error(Errc::config, "first block larger than the graph");
    if (!(params.p_in >= 0.0 && params.p_in <= 1.0 && params.p_out >= 0.0 && params.p_out <= 1.0))
        throw Error(Errc::config, "edge probabilities must lie in [0, 1]");
    if (!(params.crossover >= 0.0 && params.crossover <= 0.5))
        throw Error(Errc::config, "crossover probability must lie in [0, 0.5]");
    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto block = [&](std::size_t i) { return i < params.n1 ? std::size_t{0} : std::size_t{1}; };
    std::vector<SignedEdge> raw;
    std::vector<char> touched(params.n, 0);
    for (std::size_t u = 0; u < params.n; ++u)
        for (std::size_t v = u + 1; v < params.n; ++v) {
            const bool same = block(u) == block(v);
            if (unit(rng) >= (same ? params.p_in : params.p_out))
                continue;
            int sign = same ? 1 : -1;
            if (unit(rng) < params.crossover)
                sign = -sign;
            raw.push_back({u, v, sign});
            touched[u] = touched[v] = 1;
        }
    std::vector<std::size_t> remap(params.n, 0);
    SignedGraph g;
    for (std::size_t i = 0; i < params.n; ++i)
        if (touched[i]) {
            remap[i] = g.n++;
            g.labels.push_back(block(i));
        }
    g.edges.reserve(raw.size());
    for (const auto& e : raw)
        g.edges.push_back({remap[e.u], remap[e.v], e.sign});
    return g;
}

// Gamma = A + 0.5 A^2 for the signed adjacency matrix A.
inline SimilarityMatrix similarity_from_signed(const SignedGraph& sg)
{
    sg.validate();
    const std::size_t n = sg.n;
    std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
    Matrix s(n, n);
    for (const auto& e : sg.edges) {
        const double w = static_cast<double>(e.sign);
        adj[e.u].push_back({e.v, w});
        adj[e.v].push_back({e.u, w});
        s(e.u, e.v) += w;
        s(e.v, e.u) += w;
    }
    for (std::size_t k = 0; k < n; ++k)
        for (const auto& [i, wik] : adj[k])
            for (const auto& [j, wkj] : adj[k])
                s(i, j) += 0.5 * wik * wkj;
    return SimilarityMatrix(std::move(s));
}

} // namespace semimetric
