#pragma once

// Edge and vertex accuracy of a detected partition against ground truth.

#include <algorithm>
#include <limits>
#include <span>
#include <vector>

#include "semimetric/datasets.hpp"
#include "semimetric/partition.hpp"

namespace semimetric {

namespace detail {

// Hungarian method (Jonker-Volgenant potentials) for a square cost matrix;
// returns assignment[row] = column minimizing total cost.
inline std::vector<std::size_t> min_cost_assignment(const std::vector<std::vector<double>>& cost)
{
    const std::size_t n = cost.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), way_cost(n + 1);
    std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
    for (std::size_t row = 1; row <= n; ++row) {
        match[0] = row;
        std::size_t col0 = 0;
        std::fill(way_cost.begin(), way_cost.end(), inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[col0] = 1;
            const std::size_t r0 = match[col0];
            double delta = inf;
            std::size_t col1 = 0;
            for (std::size_t col = 1; col <= n; ++col) {
                if (used[col])
                    continue;
                const double cur = cost[r0 - 1][col - 1] - u[r0] - v[col];
                if (cur < way_cost[col]) {
                    way_cost[col] = cur;
                    way[col] = col0;
                }
                if (way_cost[col] < delta) {
                    delta = way_cost[col];
                    col1 = col;
                }
            }
            for (std::size_t col = 0; col <= n; ++col) {
                if (used[col]) {
                    u[match[col]] += delta;
                    v[col] -= delta;
                } else {
                    way_cost[col] -= delta;
                }
            }
            col0 = col1;
        } while (match[col0] != 0);
        do {
            const std::size_t col1 = way[col0];
            match[col0] = match[col1];
            col0 = col1;
        } while (col0 != 0);
    }
    std::vector<std::size_t> assignment(n, 0);
    for (std::size_t col = 1; col <= n; ++col)
        if (match[col] != 0)
            assignment[match[col] - 1] = col - 1;
    return assignment;
}

} // namespace detail

// Fraction of edges whose endpoints are co-clustered exactly when they share a ground-truth block.
inline double edge_accuracy(const Partition& p, const SignedGraph& sg)
{
    if (sg.edges.empty())
        throw Error(Errc::invalid_argument, "edge accuracy of a graph without edges");
    if (sg.labels.size() != sg.n)
        throw Error(Errc::invalid_argument, "graph carries no ground-truth labels");
    p.validate(sg.n);
    const auto detected = p.labels();
    std::size_t correct = 0;
    for (const auto& e : sg.edges)
        if ((detected[e.u] == detected[e.v]) == (sg.labels[e.u] == sg.labels[e.v]))
            ++correct;
    return static_cast<double>(correct) / static_cast<double>(sg.edges.size());
}

// Fraction of vertices labeled correctly under the best one-to-one matching of
// detected clusters to ground-truth labels.
inline double vertex_accuracy(const Partition& p, std::span<const std::size_t> truth)
{
    const std::size_t n = truth.size();
    if (n == 0)
        throw Error(Errc::empty_input, "vertex accuracy of an empty labeling");
    p.validate(n);
    const auto detected = p.labels();
    std::size_t truth_classes = 0;
    for (auto t : truth)
        truth_classes = std::max(truth_classes, t + 1);
    const std::size_t side = std::max(p.size(), truth_classes);
    std::vector<std::vector<double>> overlap(side, std::vector<double>(side, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        overlap[detected[i]][truth[i]] += 1.0;
    std::vector<std::vector<double>> cost(side, std::vector<double>(side, 0.0));
    for (std::size_t a = 0; a < side; ++a)
        for (std::size_t b = 0; b < side; ++b)
            cost[a][b] = -overlap[a][b];
    const auto match = detail::min_cost_assignment(cost);
    double correct = 0.0;
    for (std::size_t a = 0; a < side; ++a)
        correct += overlap[a][match[a]];
    return correct / static_cast<double>(n);
}

} // namespace semimetric
