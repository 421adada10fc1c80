#pragma once

// Distance, cohesion and similarity matrices, the duality between distances
// and cohesion measures, and the shortest-path metric closure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <utility>

#include "semimetric/error.hpp"
#include "semimetric/matrix.hpp"

namespace semimetric {

inline constexpr double ingest_tolerance = 1e-9;

// Semi-metric: nonnegative, zero diagonal, symmetric.
class DistanceMatrix {
public:
    DistanceMatrix() = default;

    explicit DistanceMatrix(Matrix d) : d_(std::move(d))
    {
        if (!d_.is_square())
            throw Error(Errc::contract_violation, "distance matrix is not square");
        const std::size_t n = d_.rows();
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(d_(i, i)) > ingest_tolerance)
                throw Error(Errc::contract_violation, "distance matrix has a nonzero diagonal");
            for (std::size_t j = 0; j < n; ++j) {
                const double v = d_(i, j);
                if (!std::isfinite(v))
                    throw Error(Errc::contract_violation, "distance matrix has a non-finite entry");
                if (v < -ingest_tolerance)
                    throw Error(Errc::contract_violation, "distance matrix has a negative entry");
                if (j > i && std::abs(v - d_(j, i)) > ingest_tolerance)
                    throw Error(Errc::contract_violation, "distance matrix is not symmetric");
            }
        }
    }

    std::size_t size() const noexcept { return d_.rows(); }
    double operator()(std::size_t i, std::size_t j) const noexcept { return d_(i, j); }
    const Matrix& values() const noexcept { return d_; }

private:
    Matrix d_;
};

enum class CohesionKind { induced, covariance, raw_similarity };

class CohesionMatrix {
public:
    CohesionMatrix() = default;

    CohesionMatrix(Matrix g, CohesionKind kind) : g_(std::move(g)), kind_(kind)
    {
        require_symmetric(g_, ingest_tolerance);
        if (kind_ != CohesionKind::induced)
            return;
        const std::size_t n = g_.rows();
        for (std::size_t i = 0; i < n; ++i) {
            double row = 0.0;
            double scale = 1.0;
            for (std::size_t j = 0; j < n; ++j) {
                row += g_(i, j);
                scale += std::abs(g_(i, j));
            }
            // Floating-point accumulation error grows with the magnitude of the row.
            if (std::abs(row) > ingest_tolerance * scale)
                throw Error(Errc::contract_violation, "induced cohesion row does not sum to zero");
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double slack = g_(i, i) + g_(j, j) - 2.0 * g_(i, j);
                const double scale = 1.0 + std::abs(g_(i, i)) + std::abs(g_(j, j)) + std::abs(g_(i, j));
                if (slack < -ingest_tolerance * scale)
                    throw Error(Errc::contract_violation, "induced cohesion violates nonnegativity (C3)");
            }
    }

    std::size_t size() const noexcept { return g_.rows(); }
    double operator()(std::size_t i, std::size_t j) const noexcept { return g_(i, j); }
    const Matrix& values() const noexcept { return g_; }
    CohesionKind kind() const noexcept { return kind_; }

private:
    Matrix g_;
    CohesionKind kind_ = CohesionKind::raw_similarity;
};

class SimilarityMatrix {
public:
    SimilarityMatrix() = default;

    explicit SimilarityMatrix(Matrix s) : s_(std::move(s)) { require_symmetric(s_, ingest_tolerance); }

    std::size_t size() const noexcept { return s_.rows(); }
    double operator()(std::size_t i, std::size_t j) const noexcept { return s_(i, j); }
    const Matrix& values() const noexcept { return s_; }

private:
    Matrix s_;
};

namespace detail {

// Double centering: m(x,y) - row mean(x) - column mean(y) + grand mean.
inline Matrix double_center(const Matrix& m)
{
    const std::size_t n = m.rows();
    std::vector<double> row_mean(n, 0.0);
    std::vector<double> col_mean(n, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            row_mean[i] += m(i, j);
            col_mean[j] += m(i, j);
        }
    for (std::size_t i = 0; i < n; ++i) {
        total += row_mean[i];
        row_mean[i] /= static_cast<double>(n);
        col_mean[i] /= static_cast<double>(n);
    }
    const double grand = total / (static_cast<double>(n) * static_cast<double>(n));
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out(i, j) = m(i, j) - row_mean[i] - col_mean[j] + grand;
    return out;
}

} // namespace detail

// gamma(x,y) = d(.,y)/n + d(x,.)/n - d(.,.)/n^2 - d(x,y)
inline CohesionMatrix induce_cohesion(const DistanceMatrix& d)
{
    if (d.size() == 0)
        throw Error(Errc::empty_input, "induce_cohesion needs at least one point");
    Matrix g = detail::double_center(d.values());
    for (double& v : g.data())
        v = -v;
    const std::size_t n = g.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double avg = 0.5 * (g(i, j) + g(j, i));
            g(i, j) = avg;
            g(j, i) = avg;
        }
    return CohesionMatrix(std::move(g), CohesionKind::induced);
}

// d(x,y) = (g(x,x) + g(y,y))/2 - g(x,y)
inline DistanceMatrix cohesion_to_distance(const Matrix& g)
{
    require_symmetric(g, ingest_tolerance);
    const std::size_t n = g.rows();
    Matrix d(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (g(i, i) + g(j, j)) - 0.5 * (g(i, j) + g(j, i));
            d(i, j) = v;
            d(j, i) = v;
        }
    return DistanceMatrix(std::move(d));
}

inline DistanceMatrix cohesion_to_distance(const CohesionMatrix& g) { return cohesion_to_distance(g.values()); }

// Smallest sigma making the converted cohesion measure satisfy C3, clamped at 0.
inline double minimal_sigma(const SimilarityMatrix& s)
{
    const std::size_t n = s.size();
    double sigma = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            sigma = std::max(sigma, s(i, j) - 0.5 * (s(i, i) + s(j, j)));
    return sigma;
}

inline CohesionMatrix similarity_to_cohesion(const SimilarityMatrix& s, std::optional<double> sigma = {})
{
    const std::size_t n = s.size();
    if (n == 0)
        throw Error(Errc::empty_input, "similarity_to_cohesion needs at least one point");
    double unclamped = -INFINITY;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            unclamped = std::max(unclamped, s(i, j) - 0.5 * (s(i, i) + s(j, j)));
    const double chosen = sigma.value_or(std::max(0.0, unclamped));
    if (!std::isfinite(chosen) || (n > 1 && chosen < unclamped - ingest_tolerance))
        throw Error(Errc::invalid_sigma, "sigma is below max_{x!=y}[s(x,y) - (s(x,x)+s(y,y))/2]");
    Matrix g = detail::double_center(s.values());
    const double nn = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            g(i, j) += (i == j ? chosen : 0.0) - chosen / nn;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double avg = 0.5 * (g(i, j) + g(j, i));
            g(i, j) = avg;
            g(j, i) = avg;
        }
    return CohesionMatrix(std::move(g), CohesionKind::induced);
}

// All-pairs shortest paths over the complete graph weighted by d.
inline DistanceMatrix metric_closure(const DistanceMatrix& d)
{
    Matrix c = d.values();
    const std::size_t n = c.rows();
    for (std::size_t k = 0; k < n; ++k) {
        auto ck = c.row(k);
        for (std::size_t i = 0; i < n; ++i) {
            const double dik = c(i, k);
            auto ci = c.row(i);
            for (std::size_t j = 0; j < n; ++j)
                if (dik + ck[j] < ci[j])
                    ci[j] = dik + ck[j];
        }
    }
    return DistanceMatrix(std::move(c));
}

struct TriangleViolation {
    std::size_t x, y, z;
    double excess; // d(x,z) - d(x,y) - d(y,z)
};

// Exhaustive triple scan up to exhaustive_limit points, 10*n random triples beyond.
inline std::optional<TriangleViolation> find_triangle_violation(const DistanceMatrix& d, double tol = 1e-9,
                                                               std::size_t exhaustive_limit = 500,
                                                               std::uint64_t seed = 0)
{
    const std::size_t n = d.size();
    auto check = [&](std::size_t x, std::size_t y, std::size_t z) -> std::optional<TriangleViolation> {
        const double excess = d(x, z) - d(x, y) - d(y, z);
        if (excess > tol)
            return TriangleViolation{x, y, z, excess};
        return std::nullopt;
    };
    if (n <= exhaustive_limit) {
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t x = 0; x < n; ++x)
                for (std::size_t z = x + 1; z < n; ++z)
                    if (auto v = check(x, y, z))
                        return v;
        return std::nullopt;
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t t = 0; t < 10 * n; ++t)
        if (auto v = check(pick(rng), pick(rng), pick(rng)))
            return v;
    return std::nullopt;
}

inline bool is_metric(const DistanceMatrix& d, double tol = 1e-9)
{
    return !find_triangle_violation(d, tol).has_value();
}

} // namespace semimetric
