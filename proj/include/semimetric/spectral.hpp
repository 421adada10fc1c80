#pragma once

// Symmetric eigendecomposition of cohesion matrices and the resulting
// low-dimensional embedding.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "semimetric/core.hpp"
#include "semimetric/softmax.hpp"

namespace semimetric {

// d(i,j) = |x_i - x_j|^2 / 2 over the rows of points.
inline DistanceMatrix half_squared_euclidean(const Matrix& points)
{
    const std::size_t n = points.rows();
    Matrix d(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            auto a = points.row(i);
            auto b = points.row(j);
            for (std::size_t c = 0; c < points.cols(); ++c)
                s += (a[c] - b[c]) * (a[c] - b[c]);
            d(i, j) = d(j, i) = 0.5 * s;
        }
    return DistanceMatrix(std::move(d));
}

inline DistanceMatrix euclidean_distance(const Matrix& points)
{
    const std::size_t n = points.rows();
    Matrix d(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            auto a = points.row(i);
            auto b = points.row(j);
            for (std::size_t c = 0; c < points.cols(); ++c)
                s += (a[c] - b[c]) * (a[c] - b[c]);
            d(i, j) = d(j, i) = std::sqrt(s);
        }
    return DistanceMatrix(std::move(d));
}

struct EigenSystem {
    std::vector<double> values; // descending
    Matrix vectors;             // column j pairs with values[j]
    // Indices i where values[i] - values[i+1] < 1e-10.
    std::vector<std::size_t> near_degenerate;

    std::size_t size() const noexcept { return values.size(); }
};

namespace detail {

// Cyclic Jacobi rotations on a full symmetric copy; accumulates V with A = V D V^T.
inline void jacobi_eigen(Matrix& a, Matrix& v, int max_sweeps = 100)
{
    const std::size_t n = a.rows();
    v = Matrix::identity(n);
    double total = 0.0;
    for (double x : a.data())
        total += x * x;
    const double floor = 1e-30 * std::max(total, 1e-300);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                off += a(p, q) * a(p, q);
        if (off <= floor)
            return;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0)
                    continue;
                const double app = a(p, p);
                const double aqq = a(q, q);
                if (std::abs(apq) < 1e-18 * (std::abs(app) + std::abs(aqq)))
                    continue;
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                auto rp = a.row(p);
                auto rq = a.row(q);
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = rp[k];
                    const double akq = rq[k];
                    rp[k] = c * akp - s * akq;
                    rq[k] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    a(k, p) = rp[k];
                    a(k, q) = rq[k];
                }
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
    }
}

} // namespace detail

// Full decomposition, eigenvalues sorted descending, each eigenvector's first
// component above 1e-12 in magnitude made positive.
inline EigenSystem eigendecompose(const Matrix& g)
{
    require_symmetric(g);
    const std::size_t n = g.rows();
    Matrix a = g;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            a(i, j) = a(j, i) = 0.5 * (g(i, j) + g(j, i));
    Matrix v;
    detail::jacobi_eigen(a, v);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });
    EigenSystem es;
    es.values.resize(n);
    es.vectors = Matrix(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        const std::size_t src = order[c];
        es.values[c] = a(src, src);
        double sign = 1.0;
        for (std::size_t r = 0; r < n; ++r)
            if (std::abs(v(r, src)) > 1e-12) {
                sign = v(r, src) > 0.0 ? 1.0 : -1.0;
                break;
            }
        for (std::size_t r = 0; r < n; ++r)
            es.vectors(r, c) = sign * v(r, src);
    }
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (es.values[i] - es.values[i + 1] < 1e-10)
            es.near_degenerate.push_back(i);
    return es;
}

inline EigenSystem eigendecompose(const CohesionMatrix& g) { return eigendecompose(g.values()); }

// Coordinate k of point i is sqrt(lambda_k) v_k(i) for the top p0 eigenpairs.
inline Embedding embed(const EigenSystem& es, std::size_t p0)
{
    std::size_t nonnegative = 0;
    while (nonnegative < es.values.size() && es.values[nonnegative] >= 0.0)
        ++nonnegative;
    if (p0 > nonnegative)
        throw Error(Errc::invalid_argument, "p0 exceeds the number of nonnegative eigenvalues");
    const std::size_t n = es.vectors.rows();
    Embedding e{Matrix(n, p0)};
    for (std::size_t k = 0; k < p0; ++k) {
        const double scale = std::sqrt(es.values[k]);
        for (std::size_t i = 0; i < n; ++i)
            e.z(i, k) = scale * es.vectors(i, k);
    }
    return e;
}

// Largest |A v - lambda v| relative to the largest |A| entry times sqrt(n).
inline double eigen_residual(const Matrix& g, const EigenSystem& es)
{
    const std::size_t n = g.rows();
    double worst = 0.0;
    for (std::size_t c = 0; c < es.size(); ++c) {
        double norm2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                s += g(i, j) * es.vectors(j, c);
            const double r = s - es.values[c] * es.vectors(i, c);
            norm2 += r * r;
        }
        worst = std::max(worst, std::sqrt(norm2));
    }
    return worst;
}

// Sum over embedded coordinates: x'_i . x'_j.
inline Matrix reconstruct(const Embedding& e)
{
    return multiply(e.z, e.z.transpose());
}

struct GramCheckReport {
    double max_deviation = 0.0;
    bool passed = true;
};

// Compares the cohesion induced by half-squared Euclidean distance with the
// Gram matrix of the centered points.
inline GramCheckReport gram_identity_check(const Matrix& points, double tol)
{
    const std::size_t n = points.rows();
    const std::size_t dim = points.cols();
    if (n == 0)
        throw Error(Errc::empty_input, "gram_identity_check needs at least one point");
    const CohesionMatrix g = induce_cohesion(half_squared_euclidean(points));
    std::vector<double> centroid(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < dim; ++c)
            centroid[c] += points(i, c) / static_cast<double>(n);
    GramCheckReport report;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double inner = 0.0;
            for (std::size_t c = 0; c < dim; ++c)
                inner += (points(i, c) - centroid[c]) * (points(j, c) - centroid[c]);
            report.max_deviation = std::max(report.max_deviation, std::abs(inner - g(i, j)));
        }
    report.passed = report.max_deviation <= tol;
    return report;
}

} // namespace semimetric
