#pragma once

// Exponentially twisted sampling over a distance matrix: the sampled graph,
// the lambda <-> average distance relation, centrality, community strength,
// covariance and modularity.

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "semimetric/core.hpp"
#include "semimetric/partition.hpp"

namespace semimetric {

// Pair-sampling distribution p(x,y) proportional to exp(lambda * d(x,y)).
struct SampledGraph {
    DistanceMatrix d;
    double lambda = 0.0;
    Matrix joint;
    std::vector<double> marginal;
};

struct CovarianceMatrix {
    Matrix g;
    double lambda = 0.0;

    std::size_t size() const noexcept { return g.rows(); }
    const Matrix& values() const noexcept { return g; }
    CohesionMatrix as_cohesion() const { return CohesionMatrix(g, CohesionKind::covariance); }
};

namespace detail {

struct TwistMoments {
    double weight_sum = 0.0;   // sum of exp(lambda*d - shift)
    double weighted_dist = 0.0; // sum of d * exp(lambda*d - shift)
};

inline double twist_shift(const Matrix& d, double lambda)
{
    double lo = INFINITY, hi = -INFINITY;
    for (double v : d.data()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return std::max(lambda * lo, lambda * hi);
}

inline TwistMoments twist_moments(const Matrix& d, double lambda)
{
    const double shift = twist_shift(d, lambda);
    TwistMoments m;
    for (double v : d.data()) {
        const double w = std::exp(lambda * v - shift);
        m.weight_sum += w;
        m.weighted_dist += v * w;
    }
    return m;
}

inline void require_finite_lambda(double lambda)
{
    if (!std::isfinite(lambda))
        throw Error(Errc::invalid_argument, "lambda must be finite");
}

} // namespace detail

inline SampledGraph twist(const DistanceMatrix& d, double lambda)
{
    detail::require_finite_lambda(lambda);
    const std::size_t n = d.size();
    if (n == 0)
        throw Error(Errc::empty_input, "twist needs at least one point");
    const double shift = detail::twist_shift(d.values(), lambda);
    SampledGraph sg{d, lambda, Matrix(n, n), std::vector<double>(n, 0.0)};
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double w = std::exp(lambda * d(i, j) - shift);
            sg.joint(i, j) = w;
            total += w;
        }
    for (double& v : sg.joint.data())
        v /= total;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double avg = 0.5 * (sg.joint(i, j) + sg.joint(j, i));
            sg.joint(i, j) = avg;
            sg.joint(j, i) = avg;
        }
    for (std::size_t i = 0; i < n; ++i)
        for (double v : sg.joint.row(i))
            sg.marginal[i] += v;
    return sg;
}

// (1/n^2) sum of all distances.
inline double uniform_mean(const DistanceMatrix& d)
{
    const double n = static_cast<double>(d.size());
    return d.values().sum() / (n * n);
}

inline double average_distance(const DistanceMatrix& d, double lambda)
{
    detail::require_finite_lambda(lambda);
    if (d.size() == 0)
        throw Error(Errc::empty_input, "average_distance needs at least one point");
    const auto m = detail::twist_moments(d.values(), lambda);
    return m.weighted_dist / m.weight_sum;
}

inline double average_distance(const SampledGraph& sg) { return average_distance(sg.d, sg.lambda); }

// Closure of the set of attainable average distances: [min entry, max entry].
inline std::pair<double, double> attainable_range(const DistanceMatrix& d)
{
    const auto data = d.values().data();
    const auto [lo, hi] = std::minmax_element(data.begin(), data.end());
    return {*lo, *hi};
}

struct LambdaSolveOptions {
    double tol = 1e-6;
    int max_iterations = 200;
};

// Finds lambda with |average_distance(d, lambda) - target| <= tol by doubling
// outward from 0 to bracket the target, then bisecting.
inline double solve_lambda(const DistanceMatrix& d, double target, LambdaSolveOptions opts = {})
{
    if (d.size() == 0)
        throw Error(Errc::empty_input, "solve_lambda needs at least one point");
    if (!(opts.tol > 0.0))
        throw Error(Errc::invalid_argument, "tolerance must be positive");
    const auto [lo_d, hi_d] = attainable_range(d);
    if (lo_d == hi_d) {
        if (std::abs(target - lo_d) <= opts.tol)
            return 0.0;
        throw Error(Errc::out_of_range, "constant distance matrix only attains its single value");
    }
    if (!(target > lo_d && target < hi_d))
        throw Error(Errc::out_of_range, "target average distance outside the attainable open interval");

    const double mean = average_distance(d, 0.0);
    if (std::abs(mean - target) <= opts.tol)
        return 0.0;

    int iterations = 0;
    double lo = 0.0, hi = 0.0;
    double step = 1.0 / (hi_d - lo_d);
    if (target < mean) {
        lo = -step;
        while (average_distance(d, lo) > target) {
            if (++iterations >= opts.max_iterations)
                throw Error(Errc::out_of_range, "failed to bracket the target average distance");
            hi = lo;
            step *= 2.0;
            lo = -step;
        }
    } else {
        hi = step;
        while (average_distance(d, hi) < target) {
            if (++iterations >= opts.max_iterations)
                throw Error(Errc::out_of_range, "failed to bracket the target average distance");
            lo = hi;
            step *= 2.0;
            hi = step;
        }
    }

    double best = lo;
    double best_err = INFINITY;
    while (iterations++ < opts.max_iterations) {
        const double mid = 0.5 * (lo + hi);
        const double value = average_distance(d, mid);
        const double err = std::abs(value - target);
        if (err < best_err) {
            best = mid;
            best_err = err;
        }
        if (err <= opts.tol)
            return mid;
        if (value < target)
            lo = mid;
        else
            hi = mid;
        if (mid == lo && mid == hi)
            break;
    }
    if (best_err <= opts.tol)
        return best;
    throw Error(Errc::out_of_range, "lambda bisection did not reach the requested tolerance");
}

inline double centrality(const SampledGraph& sg, std::span<const std::size_t> s)
{
    double c = 0.0;
    for (auto x : s)
        c += sg.marginal.at(x);
    return c;
}

// p(S1, S2) = sum over x in S1, y in S2 of p(x, y).
inline double joint_mass(const SampledGraph& sg, std::span<const std::size_t> s1, std::span<const std::size_t> s2)
{
    double m = 0.0;
    for (auto x : s1)
        for (auto y : s2)
            m += sg.joint(x, y);
    return m;
}

// C(S1 | S2) = p(S1, S2) / p(S2)
inline double relative_centrality(const SampledGraph& sg, std::span<const std::size_t> s1,
                                  std::span<const std::size_t> s2)
{
    const double mass = centrality(sg, s2);
    if (!(mass > 0.0))
        throw Error(Errc::invalid_argument, "conditioning set has zero sampling mass");
    return joint_mass(sg, s1, s2) / mass;
}

// Str(S) = C(S|S) - C(S)
inline double community_strength(const SampledGraph& sg, std::span<const std::size_t> s)
{
    return relative_centrality(sg, s, s) - centrality(sg, s);
}

// gamma_lambda(x,y) = p(x,y) - p(x) p(y)
inline CovarianceMatrix covariance_matrix(const SampledGraph& sg)
{
    const std::size_t n = sg.joint.rows();
    CovarianceMatrix cov{Matrix(n, n), sg.lambda};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            cov.g(i, j) = sg.joint(i, j) - sg.marginal[i] * sg.marginal[j];
    return cov;
}

// gamma(S1, S2) = sum over x in S1, y in S2 of g(x, y).
inline double block_sum(const Matrix& g, std::span<const std::size_t> s1, std::span<const std::size_t> s2)
{
    double total = 0.0;
    for (auto x : s1) {
        auto row = g.row(x);
        for (auto y : s2)
            total += row[y];
    }
    return total;
}

// Q = sum_k gamma(S_k, S_k)
inline double modularity(const Matrix& g, const Partition& p)
{
    double q = 0.0;
    for (const auto& c : p.clusters)
        q += block_sum(g, c, c);
    return q;
}

inline double modularity(const CohesionMatrix& g, const Partition& p) { return modularity(g.values(), p); }
inline double modularity(const CovarianceMatrix& g, const Partition& p) { return modularity(g.values(), p); }

} // namespace semimetric
