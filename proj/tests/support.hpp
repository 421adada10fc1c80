#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "semimetric/semimetric.hpp"

namespace testing_support {

using semimetric::Matrix;

// Symmetric, nonnegative, zero diagonal; a quarter of the entries are exactly zero.
inline Matrix random_semimetric(std::size_t n, std::mt19937_64& rng, double scale = 10.0)
{
    std::uniform_real_distribution<double> value(0.0, scale);
    std::bernoulli_distribution zero(0.25);
    Matrix d(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            d(i, j) = d(j, i) = zero(rng) ? 0.0 : value(rng);
    return d;
}

inline Matrix random_symmetric(std::size_t n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0)
{
    std::uniform_real_distribution<double> value(lo, hi);
    Matrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            g(i, j) = g(j, i) = value(rng);
    return g;
}

inline Matrix random_points(std::size_t n, std::size_t dim, std::mt19937_64& rng, double spread = 5.0)
{
    std::normal_distribution<double> coord(0.0, spread);
    Matrix x(n, dim);
    for (double& v : x.data())
        v = coord(rng);
    return x;
}

// Termwise evaluation of the induced cohesion in long double.
inline Matrix induced_cohesion_oracle(const Matrix& d)
{
    const std::size_t n = d.rows();
    const long double nn = static_cast<long double>(n);
    std::vector<long double> row(n, 0.0L), col(n, 0.0L);
    long double all = 0.0L;
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            row[x] += d(x, y);
            col[y] += d(x, y);
            all += d(x, y);
        }
    Matrix g(n, n);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            g(x, y) = static_cast<double>(col[y] / nn + row[x] / nn - all / (nn * nn) - d(x, y));
    return g;
}

// Every labeling of n nodes into exactly k nonempty clusters with node 0 in cluster 0.
template <class F>
void for_each_partition(std::size_t n, std::size_t k, F&& visit)
{
    std::vector<std::size_t> labels(n, 0);
    const auto recurse = [&](auto&& self, std::size_t i, std::size_t used) -> void {
        if (i == n) {
            if (used == k)
                visit(labels);
            return;
        }
        for (std::size_t l = 0; l < std::min(used + 1, k); ++l) {
            labels[i] = l;
            self(self, i + 1, std::max(used, l + 1));
        }
    };
    recurse(recurse, 0, 0);
}

inline Matrix line_graph_adjacency()
{
    return Matrix{{0, -1, 0, 0, 0}, {-1, 0, 1, 0, 0}, {0, 1, 0, 1, 0}, {0, 0, 1, 0, 1}, {0, 0, 0, 1, 0}};
}

inline Matrix line_graph_distance()
{
    return Matrix{{0, 2, 1, 1, 1}, {2, 0, 0, 1, 1}, {1, 0, 0, 0, 1}, {1, 1, 0, 0, 0}, {1, 1, 1, 0, 0}};
}

inline Matrix line_graph_closure()
{
    return Matrix{{0, 1, 1, 1, 1}, {1, 0, 0, 0, 0}, {1, 0, 0, 0, 0}, {1, 0, 0, 0, 0}, {1, 0, 0, 0, 0}};
}

// Largest distance of any row from the one-hot row at its argmax.
inline double one_hot_gap(const Matrix& p)
{
    double gap = 0.0;
    for (std::size_t i = 0; i < p.rows(); ++i) {
        const auto row = p.row(i);
        const auto best = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
        for (std::size_t k = 0; k < row.size(); ++k)
            gap = std::max(gap, std::abs(row[k] - (k == best ? 1.0 : 0.0)));
    }
    return gap;
}

} // namespace testing_support
