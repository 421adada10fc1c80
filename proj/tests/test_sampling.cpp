#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "support.hpp"

using namespace semimetric;
using namespace testing_support;

namespace {

DistanceMatrix two_point() { return DistanceMatrix(Matrix{{0, 2}, {2, 0}}); }

std::vector<std::size_t> all_nodes(std::size_t n)
{
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), std::size_t{0});
    return v;
}

DistanceMatrix small_circles(std::uint64_t seed)
{
    CircleOptions opts;
    opts.centers = five_circle_centers();
    opts.points_per_circle = 40;
    opts.seed = seed;
    return euclidean_distance(generate_circles(opts).points);
}

} // namespace

TEST(Twist, ZeroLambdaIsUniform)
{
    std::mt19937_64 rng(1);
    const DistanceMatrix d(random_semimetric(7, rng));
    const auto sg = twist(d, 0.0);
    for (double v : sg.joint.data())
        EXPECT_DOUBLE_EQ(v, 1.0 / 49.0);
    for (double m : sg.marginal)
        EXPECT_NEAR(m, 1.0 / 7.0, 1e-15);
}

TEST(Twist, TwoPointClosedForm)
{
    const auto sg = twist(two_point(), -std::log(2.0) / 2.0);
    EXPECT_NEAR(sg.joint(0, 0), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(sg.joint(1, 1), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(sg.joint(0, 1), 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(sg.joint(1, 0), 1.0 / 6.0, 1e-15);
}

TEST(Twist, Invariants)
{
    std::mt19937_64 rng(2);
    for (double lambda : {-3.0, -0.1, 0.0, 0.2, 5.0}) {
        const DistanceMatrix d(random_semimetric(12, rng));
        const auto sg = twist(d, lambda);
        EXPECT_NEAR(sg.joint.sum(), 1.0, 1e-12);
        EXPECT_EQ(asymmetry(sg.joint), 0.0);
        for (std::size_t i = 0; i < 12; ++i) {
            double row = 0.0;
            for (double v : sg.joint.row(i))
                row += v;
            EXPECT_DOUBLE_EQ(sg.marginal[i], row);
        }
    }
}

TEST(Twist, StronglyNegativeConcentratesOnZeroDistance)
{
    const DistanceMatrix d(Matrix{{0, 1, 2}, {1, 0, 3}, {2, 3, 0}});
    const auto sg = twist(d, -1e3);
    double diag = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        diag += sg.joint(i, i);
    EXPECT_NEAR(diag, 1.0, 1e-12);
    const auto hot = twist(d, 1e3);
    EXPECT_NEAR(hot.joint(1, 2) + hot.joint(2, 1), 1.0, 1e-12);
}

TEST(AverageDistance, UniformMean)
{
    EXPECT_DOUBLE_EQ(average_distance(two_point(), 0.0), 1.0);
    std::mt19937_64 rng(3);
    const DistanceMatrix d(random_semimetric(9, rng));
    EXPECT_EQ(average_distance(d, 0.0), uniform_mean(d));
    EXPECT_DOUBLE_EQ(average_distance(twist(d, 0.7)), average_distance(d, 0.7));
}

TEST(AverageDistance, CircleCurveIsIncreasingAndSpansRange)
{
    const auto d = small_circles(4);
    const auto [lo, hi] = attainable_range(d);
    double prev = -INFINITY;
    for (double lambda = -2.0; lambda <= 2.0; lambda += 0.05) {
        const double v = average_distance(d, lambda);
        EXPECT_GT(v, prev);
        prev = v;
    }
    EXPECT_NEAR(average_distance(d, -1e4), lo, 1e-9);
    EXPECT_NEAR(average_distance(d, 1e4), hi, 1e-3);
}

TEST(SolveLambda, TwoPointClosedForm)
{
    const double lambda = solve_lambda(two_point(), 0.5, {1e-12, 200});
    EXPECT_NEAR(lambda, std::log(1.0 / 3.0) / 2.0, 1e-9);
}

TEST(SolveLambda, UniformMeanGivesZero)
{
    std::mt19937_64 rng(4);
    const DistanceMatrix d(random_semimetric(10, rng));
    EXPECT_EQ(solve_lambda(d, uniform_mean(d)), 0.0);
}

TEST(SolveLambda, OutOfRangeTargets)
{
    for (double target : {-0.1, 0.0, 2.0, 3.0}) {
        try {
            solve_lambda(two_point(), target);
            FAIL() << "target " << target;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), Errc::out_of_range);
        }
    }
    EXPECT_EQ(solve_lambda(DistanceMatrix(Matrix(3, 3)), 0.0), 0.0);
    EXPECT_THROW(solve_lambda(DistanceMatrix(Matrix(3, 3)), 1.0), Error);
}

TEST(SolveLambda, CircleTargetsOrdered)
{
    const auto d = small_circles(5);
    const double mean = uniform_mean(d);
    std::vector<double> lambdas;
    for (double frac : {0.1, 0.8, 0.95}) {
        const double target = frac * mean;
        const double lambda = solve_lambda(d, target);
        EXPECT_NEAR(average_distance(d, lambda), target, 1e-6);
        EXPECT_LT(lambda, 0.0);
        lambdas.push_back(lambda);
    }
    EXPECT_LT(lambdas[0], lambdas[1]);
    EXPECT_LT(lambdas[1], lambdas[2]);
}

TEST(Centrality, Identities)
{
    std::mt19937_64 rng(6);
    const DistanceMatrix d(random_semimetric(8, rng));
    const auto omega = all_nodes(8);
    for (double lambda : {0.0, -0.4, 0.3}) {
        const auto sg = twist(d, lambda);
        EXPECT_NEAR(centrality(sg, omega), 1.0, 1e-12);
        const std::vector<std::size_t> s2 = {1, 4, 6};
        EXPECT_NEAR(relative_centrality(sg, omega, s2), 1.0, 1e-12);
        EXPECT_NEAR(community_strength(sg, omega), 0.0, 1e-12);
    }
    const auto uniform = twist(d, 0.0);
    for (std::size_t x = 0; x < 8; ++x) {
        const std::vector<std::size_t> s = {x};
        EXPECT_NEAR(centrality(uniform, s), 1.0 / 8.0, 1e-15);
        EXPECT_NEAR(community_strength(uniform, s), 0.0, 1e-15);
    }
}

TEST(Centrality, ZeroMassConditioningRejected)
{
    const auto sg = twist(DistanceMatrix(Matrix{{0, 1}, {1, 0}}), 0.0);
    EXPECT_THROW(relative_centrality(sg, std::vector<std::size_t>{0}, std::vector<std::size_t>{}), Error);
}

TEST(CommunityStrength, SeparatedCirclePositive)
{
    CircleOptions opts;
    opts.circles = 2;
    opts.centers = {{0.0, 0.0}, {50.0, 0.0}};
    opts.points_per_circle = 30;
    opts.seed = 9;
    const auto d = euclidean_distance(generate_circles(opts).points);
    const auto sg = twist(d, -1.0);
    std::vector<std::size_t> first(30);
    std::iota(first.begin(), first.end(), std::size_t{0});
    EXPECT_GT(community_strength(sg, first), 0.0);
}

TEST(Covariance, ZeroLambdaIsZero)
{
    std::mt19937_64 rng(8);
    const auto cov = covariance_matrix(twist(DistanceMatrix(random_semimetric(6, rng)), 0.0));
    EXPECT_LE(cov.values().max_abs(), 1e-17);
}

TEST(Covariance, TwoPointClosedForm)
{
    const auto cov = covariance_matrix(twist(two_point(), std::log(1.0 / 3.0) / 2.0));
    EXPECT_NEAR(cov.g(0, 0), 1.0 / 8.0, 1e-15);
    EXPECT_NEAR(cov.g(1, 1), 1.0 / 8.0, 1e-15);
    EXPECT_NEAR(cov.g(0, 1), -1.0 / 8.0, 1e-15);
}

TEST(Covariance, TotalSumZeroAndSymmetric)
{
    std::mt19937_64 rng(10);
    const auto cov = covariance_matrix(twist(DistanceMatrix(random_semimetric(15, rng)), -0.3));
    EXPECT_NEAR(cov.values().sum(), 0.0, 1e-12);
    EXPECT_EQ(asymmetry(cov.values()), 0.0);
    EXPECT_NO_THROW(cov.as_cohesion());
}

TEST(Covariance, SmallLambdaLimit)
{
    std::mt19937_64 rng(12);
    for (int t = 0; t < 5; ++t) {
        const std::size_t n = 5 + rng() % 20;
        const DistanceMatrix d(random_semimetric(n, rng, 1.0));
        const double lambda = 1e-6;
        const auto cov = covariance_matrix(twist(d, lambda));
        const Matrix oracle = induced_cohesion_oracle(d.values());
        const double nn = static_cast<double>(n * n);
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                worst = std::max(worst, std::abs(cov.g(i, j) / lambda + oracle(i, j) / nn));
        EXPECT_LE(worst / (oracle.max_abs() / nn), 1e-4);
    }
}

TEST(Modularity, TrivialPartitions)
{
    std::mt19937_64 rng(13);
    const auto g = induce_cohesion(DistanceMatrix(random_semimetric(6, rng)));
    EXPECT_NEAR(modularity(g, Partition::from_labels(std::vector<std::size_t>(6, 0))), 0.0, 1e-12);
    double trace = 0.0;
    for (std::size_t i = 0; i < 6; ++i)
        trace += g(i, i);
    const std::vector<std::size_t> singletons = {0, 1, 2, 3, 4, 5};
    EXPECT_NEAR(modularity(g, Partition::from_labels(singletons)), trace, 1e-12);
}

TEST(Modularity, LineGraphBruteForce)
{
    const auto g = induce_cohesion(DistanceMatrix(line_graph_distance()));
    double best = -INFINITY;
    std::vector<std::size_t> best_labels;
    for_each_partition(5, 2, [&](const std::vector<std::size_t>& labels) {
        double q = 0.0;
        for (std::size_t x = 0; x < 5; ++x)
            for (std::size_t y = 0; y < 5; ++y)
                if (labels[x] == labels[y])
                    q += g(x, y);
        EXPECT_NEAR(modularity(g, Partition::from_labels(labels)), q, 1e-12);
        if (q > best) {
            best = q;
            best_labels = labels;
        }
    });
    const Partition truth = Partition::from_labels(std::vector<std::size_t>{0, 1, 1, 1, 1});
    const Partition other = Partition::from_labels(std::vector<std::size_t>{0, 1, 1, 0, 0});
    EXPECT_LE(modularity(g, truth), best + 1e-12);
    EXPECT_LE(modularity(g, other), best + 1e-12);
}
