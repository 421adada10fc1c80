#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "support.hpp"

using namespace semimetric;
using namespace testing_support;

namespace {

double radius_from(const PointCloud& cloud, std::size_t row, std::pair<double, double> center)
{
    return std::hypot(cloud.points(row, 0) - center.first, cloud.points(row, 1) - center.second);
}

} // namespace

TEST(Rings, SizesAndLabels)
{
    RingOptions opts;
    opts.noise = 0.1;
    const auto cloud = generate_rings(opts);
    EXPECT_EQ(cloud.points.rows(), 300u);
    EXPECT_EQ(cloud.labels.size(), 300u);
    EXPECT_EQ(std::count(cloud.labels.begin(), cloud.labels.end(), 2u), 100);
    const auto centers = ring_centers(3, 4.0);
    for (std::size_t i = 0; i < 300; ++i) {
        const double r = radius_from(cloud, i, centers[cloud.labels[i]]);
        EXPECT_GE(r, 0.9 - 1e-12);
        EXPECT_LE(r, 1.1 + 1e-12);
    }
    RingOptions five;
    five.rings = 5;
    five.radii.assign(5, 1.0);
    EXPECT_EQ(generate_rings(five).points.rows(), 500u);
}

TEST(Rings, ConcentricRadiiOrdered)
{
    RingOptions opts;
    opts.center_spacing = 0.0;
    opts.radii = {1.0, 2.0, 3.0};
    opts.noise = 0.2;
    const auto cloud = generate_rings(opts);
    std::vector<double> lo(3, INFINITY), hi(3, 0.0);
    for (std::size_t i = 0; i < 300; ++i) {
        const double r = radius_from(cloud, i, {0.0, 0.0});
        lo[cloud.labels[i]] = std::min(lo[cloud.labels[i]], r);
        hi[cloud.labels[i]] = std::max(hi[cloud.labels[i]], r);
    }
    EXPECT_LT(hi[0], lo[1]);
    EXPECT_LT(hi[1], lo[2]);
}

TEST(Rings, ExactRadiusWithoutNoise)
{
    RingOptions opts;
    opts.rings = 1;
    opts.radii = {2.5};
    const auto cloud = generate_rings(opts);
    for (std::size_t i = 0; i < cloud.points.rows(); ++i)
        EXPECT_NEAR(radius_from(cloud, i, {0.0, 0.0}), 2.5, 1e-12);
}

TEST(Rings, DeterministicAndCentersSpaced)
{
    RingOptions opts;
    opts.seed = 42;
    opts.noise = 0.05;
    EXPECT_EQ(generate_rings(opts).points, generate_rings(opts).points);
    const auto c = ring_centers(3, 4.0);
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = a + 1; b < 3; ++b)
            EXPECT_NEAR(std::hypot(c[a].first - c[b].first, c[a].second - c[b].second), 4.0, 1e-12);
    EXPECT_THROW(generate_rings(RingOptions{3, 10, {1.0}, 4.0, 0.0, 0}), Error);
}

TEST(Circles, SizesAndSeparation)
{
    CircleOptions opts;
    opts.centers = five_circle_centers();
    const auto cloud = generate_circles(opts);
    EXPECT_EQ(cloud.points.rows(), 1250u);
    const auto d = euclidean_distance(cloud.points);
    double max_intra = 0.0, min_inter = INFINITY;
    for (std::size_t i = 0; i < 1250; ++i)
        for (std::size_t j = i + 1; j < 1250; ++j) {
            if (cloud.labels[i] == cloud.labels[j])
                max_intra = std::max(max_intra, d(i, j));
            else
                min_inter = std::min(min_inter, d(i, j));
        }
    EXPECT_LE(max_intra, 10.0);
    EXPECT_GT(min_inter, 0.0);
    CircleOptions far;
    far.circles = 3;
    far.centers = {{0.0, 0.0}, {30.0, 0.0}, {0.0, 30.0}};
    far.points_per_circle = 50;
    const auto sep = generate_circles(far);
    const auto ds = euclidean_distance(sep.points);
    max_intra = 0.0;
    min_inter = INFINITY;
    for (std::size_t i = 0; i < 150; ++i)
        for (std::size_t j = i + 1; j < 150; ++j) {
            if (sep.labels[i] == sep.labels[j])
                max_intra = std::max(max_intra, ds(i, j));
            else
                min_inter = std::min(min_inter, ds(i, j));
        }
    EXPECT_GT(min_inter, max_intra);
}

TEST(Circles, OneDisc)
{
    CircleOptions opts;
    opts.circles = 1;
    opts.centers = {{1.0, 1.0}};
    opts.points_per_circle = 20;
    const auto cloud = generate_circles(opts);
    EXPECT_EQ(std::accumulate(cloud.labels.begin(), cloud.labels.end(), std::size_t{0}), 0u);
}

TEST(SignedSbm, CompleteCliques)
{
    const auto g = generate_signed_sbm(SbmParams{10, 4, 1.0, 0.0, 0.0, 1});
    EXPECT_EQ(g.n, 10u);
    EXPECT_EQ(g.edges.size(), 6u + 15u);
    for (const auto& e : g.edges) {
        EXPECT_EQ(e.sign, 1);
        EXPECT_EQ(g.labels[e.u], g.labels[e.v]);
    }
}

TEST(SignedSbm, AverageDegree)
{
    const auto bp = block_probabilities(2000, 10.0, 5.0);
    double total = 0.0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto g = generate_signed_sbm(SbmParams{2000, 1000, bp.p_in, bp.p_out, 0.0, s});
        total += 2.0 * static_cast<double>(g.edges.size()) / 2000.0;
    }
    EXPECT_NEAR(total / 20.0, 10.0, 0.5);
}

TEST(SignedSbm, FlipRateMatchesCrossover)
{
    const auto bp = block_probabilities(400, 10.0, 5.0);
    const double p = 0.2;
    std::size_t flipped = 0, edges = 0;
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto g = generate_signed_sbm(SbmParams{400, 200, bp.p_in, bp.p_out, p, s});
        for (const auto& e : g.edges) {
            const int expected = g.labels[e.u] == g.labels[e.v] ? 1 : -1;
            flipped += e.sign != expected;
            ++edges;
        }
    }
    const double rate = static_cast<double>(flipped) / static_cast<double>(edges);
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(edges));
    EXPECT_NEAR(rate, p, 3.0 * se);
}

TEST(SignedSbm, IsolatedNodesRemoved)
{
    const auto g = generate_signed_sbm(SbmParams{200, 100, 0.005, 0.0, 0.0, 3});
    EXPECT_LT(g.n, 200u);
    std::vector<char> seen(g.n, 0);
    for (const auto& e : g.edges)
        seen[e.u] = seen[e.v] = 1;
    EXPECT_EQ(std::count(seen.begin(), seen.end(), 1), static_cast<long>(g.n));
    g.validate();
}

TEST(SignedSbm, InvalidParameters)
{
    EXPECT_THROW(block_probabilities(10, 50.0, 5.0), Error);
    EXPECT_THROW(generate_signed_sbm(SbmParams{10, 20, 0.5, 0.5, 0.0, 0}), Error);
    EXPECT_THROW(generate_signed_sbm(SbmParams{10, 5, 0.5, 0.5, 0.7, 0}), Error);
}

TEST(SimilarityFromSigned, Path)
{
    SignedGraph g;
    g.n = 3;
    g.edges = {{0, 1, 1}, {1, 2, 1}};
    const auto s = similarity_from_signed(g);
    EXPECT_DOUBLE_EQ(s(0, 2), 0.5);
    EXPECT_DOUBLE_EQ(s(0, 1), 1.0);
    EXPECT_DOUBLE_EQ(s(1, 1), 1.0);
    EXPECT_DOUBLE_EQ(s(0, 0), 0.5);
    SignedGraph empty;
    empty.n = 4;
    EXPECT_EQ(similarity_from_signed(empty).values().max_abs(), 0.0);
}

TEST(SimilarityFromSigned, MatchesDenseProduct)
{
    const auto bp = block_probabilities(60, 6.0, 3.0);
    const auto g = generate_signed_sbm(SbmParams{60, 30, bp.p_in, bp.p_out, 0.1, 4});
    Matrix a(g.n, g.n);
    for (const auto& e : g.edges)
        a(e.u, e.v) = a(e.v, e.u) = e.sign;
    const Matrix a2 = multiply(a, a);
    const auto s = similarity_from_signed(g);
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t j = 0; j < g.n; ++j)
            EXPECT_DOUBLE_EQ(s(i, j), a(i, j) + 0.5 * a2(i, j));
}

TEST(Accuracy, GroundTruthIsPerfect)
{
    const auto bp = block_probabilities(100, 8.0, 4.0);
    const auto g = generate_signed_sbm(SbmParams{100, 50, bp.p_in, bp.p_out, 0.1, 5});
    const auto truth = Partition::from_labels(g.labels);
    EXPECT_EQ(edge_accuracy(truth, g), 1.0);
    EXPECT_EQ(vertex_accuracy(truth, g.labels), 1.0);
    std::vector<std::size_t> swapped(g.labels.size());
    for (std::size_t i = 0; i < swapped.size(); ++i)
        swapped[i] = 1 - g.labels[i];
    EXPECT_EQ(vertex_accuracy(Partition::from_labels(swapped), g.labels), 1.0);
}

TEST(Accuracy, OneClusterOnCrossEdgesIsZero)
{
    SignedGraph g;
    g.n = 4;
    g.labels = {0, 0, 1, 1};
    g.edges = {{0, 2, -1}, {1, 3, -1}, {0, 3, -1}};
    const auto one = Partition::from_labels(std::vector<std::size_t>(4, 0));
    EXPECT_EQ(edge_accuracy(one, g), 0.0);
    EXPECT_EQ(vertex_accuracy(one, g.labels), 0.5);
}

TEST(Accuracy, HungarianMatchesBruteForce)
{
    std::mt19937_64 rng(6);
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = 12;
        std::vector<std::size_t> truth(n), detected(n);
        for (std::size_t i = 0; i < n; ++i) {
            truth[i] = rng() % 3;
            detected[i] = rng() % 4;
        }
        const auto p = Partition::from_labels(detected);
        const auto labels = p.labels();
        std::vector<std::size_t> perm(std::max<std::size_t>(p.size(), 3));
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::size_t best = 0;
        do {
            std::size_t correct = 0;
            for (std::size_t i = 0; i < n; ++i)
                correct += perm[labels[i]] == truth[i];
            best = std::max(best, correct);
        } while (std::next_permutation(perm.begin(), perm.end()));
        EXPECT_DOUBLE_EQ(vertex_accuracy(p, truth), static_cast<double>(best) / n);
    }
}

TEST(Config, ParsesKeysAndRanges)
{
    std::istringstream in("# desk run\nn = 120\nn1=90\nc=8\ncin_minus_cout=4\np=0:0.1:0.05\ntrials=3\n"
                          "seed=9\nalgorithm=ksets+\nmetric=vertex\nk=3\nrestarts=4\n");
    const auto cfg = parse_config(in);
    EXPECT_EQ(cfg.n, 120u);
    EXPECT_EQ(cfg.n1, 90u);
    EXPECT_EQ(cfg.c, 8.0);
    ASSERT_EQ(cfg.p.size(), 3u);
    EXPECT_DOUBLE_EQ(cfg.p[2], 0.1);
    EXPECT_EQ(cfg.trials, 3u);
    EXPECT_EQ(cfg.seed, 9u);
    EXPECT_EQ(cfg.algorithm, Algorithm::ksets_plus);
    EXPECT_EQ(cfg.metric, AccuracyMetric::vertex);
    EXPECT_EQ(cfg.pipeline.k, 3u);
    EXPECT_EQ(cfg.pipeline.restarts, 4u);
    std::istringstream list("p=0.01,0.02\n");
    EXPECT_EQ(parse_config(list).p, (std::vector<double>{0.01, 0.02}));
}

TEST(Config, RejectsBadInput)
{
    for (const char* text : {"bogus=1\n", "n=abc\n", "n=10\nn1=20\n", "p=0.7\n", "trials=0\n", "algorithm=x\n",
                             "no equals sign\n", "c=500\n"}) {
        std::istringstream in(text);
        try {
            parse_config(in);
            FAIL() << text;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), Errc::config) << text;
        }
    }
}

TEST(Experiment, ByteIdenticalRerun)
{
    ExperimentConfig cfg;
    cfg.n = 60;
    cfg.n1 = 30;
    cfg.c = 6;
    cfg.cin_minus_cout = 3;
    cfg.p = {0.0, 0.1};
    cfg.trials = 1;
    cfg.seed = 5;
    for (Algorithm a : {Algorithm::iphd, Algorithm::ksets_plus, Algorithm::ksets_metricized, Algorithm::softmax}) {
        cfg.algorithm = a;
        std::ostringstream first, second;
        write_experiment_table(first, run_experiment(cfg));
        write_experiment_table(second, run_experiment(cfg));
        EXPECT_EQ(first.str(), second.str());
        EXPECT_EQ(first.str().rfind("p,mean_accuracy,ci_halfwidth,trials\n", 0), 0u);
    }
}

TEST(Experiment, SummaryHalfWidth)
{
    const auto s = summarize({1.0, 2.0, 3.0, 4.0});
    EXPECT_DOUBLE_EQ(s.mean, 2.5);
    EXPECT_NEAR(s.ci_halfwidth, 1.96 * std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
    EXPECT_EQ(summarize({0.7}).ci_halfwidth, 0.0);
}

TEST(Experiment, FullNoiseIsUninformative)
{
    ExperimentConfig cfg;
    cfg.p = {0.5};
    cfg.trials = 10;
    for (Algorithm a : {Algorithm::iphd, Algorithm::ksets_plus}) {
        cfg.algorithm = a;
        const auto rows = run_experiment(cfg);
        EXPECT_NEAR(rows[0].mean_accuracy, 0.5, 0.05) << to_string(a);
    }
}

TEST(Io, GridRoundTrip)
{
    std::mt19937_64 rng(7);
    const Matrix m = random_symmetric(6, rng, -1e3, 1e3);
    std::stringstream ss;
    io::write_grid(ss, m);
    EXPECT_EQ(io::read_grid(ss), m);
    std::stringstream headed;
    io::write_headed_grid(headed, random_soft_rows(5, 3, 1));
    EXPECT_EQ(io::read_headed_grid(headed), random_soft_rows(5, 3, 1));
    std::istringstream ragged("1,2\n3\n");
    EXPECT_THROW(io::read_grid(ragged), Error);
}

TEST(Io, EdgeListAndPartition)
{
    const auto bp = block_probabilities(40, 5.0, 2.0);
    auto g = generate_signed_sbm(SbmParams{40, 20, bp.p_in, bp.p_out, 0.1, 8});
    std::stringstream ss;
    io::write_edge_list(ss, g);
    const auto back = io::read_edge_list(ss);
    EXPECT_EQ(back.edges, g.edges);
    const auto p = Partition::from_labels(g.labels);
    std::stringstream ps;
    io::write_partition(ps, p);
    EXPECT_TRUE(io::read_partition(ps).same_clusters(p));
    std::istringstream bad("0 1 2\n");
    EXPECT_THROW(io::read_edge_list(bad), Error);
    std::istringstream dup("0,0\n0,1\n");
    EXPECT_THROW(io::read_labels(dup), Error);
}

TEST(Io, EigensystemRoundTrip)
{
    std::mt19937_64 rng(9);
    const auto es = eigendecompose(random_symmetric(5, rng));
    std::stringstream ss;
    io::write_eigensystem(ss, es);
    const auto back = io::read_eigensystem(ss);
    EXPECT_EQ(back.values, es.values);
    EXPECT_EQ(back.vectors, es.vectors);
}
