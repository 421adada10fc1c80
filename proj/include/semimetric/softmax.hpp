#pragma once

// Softmax clustering over a symmetric covariance/cohesion matrix, greedy
// agglomeration of positively correlated clusters, and the alternation of the
// two (iPHD).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "semimetric/matrix.hpp"
#include "semimetric/partition.hpp"
#include "semimetric/sampling.hpp"

namespace semimetric {

struct SoftAssignment {
    Matrix p; // n x K, rows are probability vectors
    double theta = 0.0;
    double epsilon = 0.0;

    std::size_t size() const noexcept { return p.rows(); }
    std::size_t clusters() const noexcept { return p.cols(); }
};

struct Embedding {
    Matrix z; // n x K
};

enum class Initialization { random, uniform };

// A log-weight gap above this makes the update an exact argmax assignment.
inline constexpr double softmax_collapse_gap = 700.0;

// Rows drawn as K independent uniforms on (0.5, 1.5), then normalized.
inline Matrix random_soft_rows(std::size_t n, std::size_t k, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(0.5, 1.5);
    Matrix p(n, k);
    for (std::size_t i = 0; i < n; ++i) {
        double total = 0.0;
        for (auto& v : p.row(i)) {
            v = jitter(rng);
            total += v;
        }
        for (auto& v : p.row(i))
            v /= total;
    }
    return p;
}

inline Matrix uniform_soft_rows(std::size_t n, std::size_t k)
{
    return Matrix(n, k, 1.0 / static_cast<double>(k));
}

// sum_k sum_i sum_j g(i,j) p_i(k) p_j(k), diagonal of g treated as zero.
inline double softmax_objective(const Matrix& g, const Matrix& p)
{
    const std::size_t n = g.rows();
    const std::size_t kk = p.cols();
    double total = 0.0;
    std::vector<double> gp(kk);
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(gp.begin(), gp.end(), 0.0);
        auto grow = g.row(i);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i)
                continue;
            const double gij = grow[j];
            auto prow = p.row(j);
            for (std::size_t k = 0; k < kk; ++k)
                gp[k] += gij * prow[k];
        }
        auto pi = p.row(i);
        for (std::size_t k = 0; k < kk; ++k)
            total += pi[k] * gp[k];
    }
    return total;
}

inline double objective(const Matrix& g, const SoftAssignment& a) { return softmax_objective(g, a.p); }

// Single-point softmax updates in cyclic order with annealed inverse temperature.
class SoftmaxClusterer {
public:
    SoftmaxClusterer(const Matrix& g, Matrix rows, double theta0, double epsilon)
        : g_(g), p_(std::move(rows)), theta_(theta0), epsilon_(epsilon)
    {
        require_symmetric(g_);
        if (p_.rows() != g_.rows() || p_.cols() == 0)
            throw Error(Errc::invalid_argument, "assignment shape does not match the matrix");
        if (!(theta0 > 0.0) || !std::isfinite(theta0))
            throw Error(Errc::invalid_argument, "theta0 must be positive");
        if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
            throw Error(Errc::invalid_argument, "epsilon must be nonnegative");
        for (std::size_t i = 0; i < p_.rows(); ++i) {
            double total = 0.0;
            for (double v : p_.row(i)) {
                if (!(v >= 0.0))
                    throw Error(Errc::invalid_argument, "assignment rows must be nonnegative");
                total += v;
            }
            if (std::abs(total - 1.0) > 1e-9)
                throw Error(Errc::invalid_argument, "assignment rows must sum to one");
        }
        for (std::size_t i = 0; i < g_.rows(); ++i)
            g_(i, i) = 0.0;
        z_.resize(p_.cols());
        next_.resize(p_.cols());
    }

    std::size_t size() const noexcept { return p_.rows(); }
    std::size_t clusters() const noexcept { return p_.cols(); }
    double theta() const noexcept { return theta_; }
    double epsilon() const noexcept { return epsilon_; }
    const Matrix& probabilities() const noexcept { return p_; }
    const Matrix& zero_diagonal_matrix() const noexcept { return g_; }

    // z_i(k) = sum_{j != i} g(j,i) p_j(k)
    std::vector<double> expected_covariance(std::size_t i) const
    {
        std::vector<double> z(p_.cols(), 0.0);
        accumulate_z(i, z);
        return z;
    }

    // Updates row i and advances theta by epsilon; returns the change in objective.
    double update(std::size_t i)
    {
        accumulate_z(i, z_);
        auto row = p_.row(i);
        const std::size_t kk = row.size();
        // Equal z multiplies every weight by the same factor.
        if (std::all_of(z_.begin(), z_.end(), [&](double v) { return v == z_[0]; })) {
            theta_ += epsilon_;
            return 0.0;
        }
        std::size_t best = 0;
        double top = -INFINITY;
        for (std::size_t k = 0; k < kk; ++k) {
            const double a = row[k] > 0.0 ? theta_ * z_[k] + std::log(row[k]) : -INFINITY;
            next_[k] = a;
            if (a > top) {
                top = a;
                best = k;
            }
        }
        bool collapse = true;
        for (std::size_t k = 0; k < kk; ++k)
            if (k != best && next_[k] >= top - softmax_collapse_gap) {
                collapse = false;
                break;
            }
        if (collapse) {
            std::fill(next_.begin(), next_.end(), 0.0);
            next_[best] = 1.0;
        } else {
            double total = 0.0;
            for (auto& a : next_) {
                a = std::exp(a - top);
                total += a;
            }
            for (auto& a : next_)
                a /= total;
        }
        double delta = 0.0;
        for (std::size_t k = 0; k < kk; ++k) {
            delta += (next_[k] - row[k]) * z_[k];
            row[k] = next_[k];
        }
        theta_ += epsilon_;
        return 2.0 * delta;
    }

    // One cyclic pass over all points; returns the largest entry change.
    double sweep()
    {
        double change = 0.0;
        std::vector<double> before(p_.cols());
        for (std::size_t i = 0; i < p_.rows(); ++i) {
            auto row = p_.row(i);
            std::copy(row.begin(), row.end(), before.begin());
            update(i);
            for (std::size_t k = 0; k < row.size(); ++k)
                change = std::max(change, std::abs(row[k] - before[k]));
        }
        return change;
    }

    double objective() const { return softmax_objective(g_, p_); }

    Matrix embedding() const
    {
        Matrix z(p_.rows(), p_.cols());
        std::vector<double> zi(p_.cols());
        for (std::size_t i = 0; i < p_.rows(); ++i) {
            accumulate_z(i, zi);
            std::copy(zi.begin(), zi.end(), z.row(i).begin());
        }
        return z;
    }

    SoftAssignment assignment() const { return SoftAssignment{p_, theta_, epsilon_}; }

private:
    void accumulate_z(std::size_t i, std::vector<double>& z) const
    {
        std::fill(z.begin(), z.end(), 0.0);
        const std::size_t kk = p_.cols();
        auto grow = g_.row(i);
        for (std::size_t j = 0; j < g_.rows(); ++j) {
            const double gji = grow[j];
            if (gji == 0.0)
                continue;
            auto prow = p_.row(j);
            for (std::size_t k = 0; k < kk; ++k)
                z[k] += gji * prow[k];
        }
    }

    Matrix g_;
    Matrix p_;
    double theta_;
    double epsilon_;
    std::vector<double> z_;
    std::vector<double> next_;
};

// Hard assignment to argmax_k p_i(k), lowest index on ties; empty clusters dropped.
inline Partition argmax_partition(const Matrix& p)
{
    std::vector<std::size_t> labels(p.rows());
    for (std::size_t i = 0; i < p.rows(); ++i) {
        auto row = p.row(i);
        labels[i] = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
    }
    return Partition::from_labels(labels);
}

struct SoftmaxOptions {
    std::size_t k = 2;
    double theta0 = 0.00025;
    double epsilon = 0.000025;
    std::uint64_t seed = 0;
    std::size_t max_sweeps = 10000;
    Initialization init = Initialization::random;
    double tolerance = 1e-12;
    // Throws if an update lowers the objective by more than 1e-12 (relative).
    bool check_monotone = false;
};

struct SoftmaxResult {
    SoftAssignment assignment;
    Embedding embedding;
    Partition partition;
    std::size_t sweeps = 0;
    bool converged = false;
};

namespace detail {

inline bool all_rows_uniform(const Matrix& p)
{
    const double u = 1.0 / static_cast<double>(p.cols());
    for (double v : p.data())
        if (std::abs(v - u) > 1e-15)
            return false;
    return true;
}

inline SoftmaxResult run_softmax(const Matrix& g, Matrix rows, const SoftmaxOptions& opts)
{
    SoftmaxClusterer clusterer(g, std::move(rows), opts.theta0, opts.epsilon);
    SoftmaxResult result;
    const double scale = 1.0 + g.max_abs() * static_cast<double>(g.rows());
    while (result.sweeps < opts.max_sweeps) {
        double change = 0.0;
        if (opts.check_monotone) {
            std::vector<double> before(clusterer.clusters());
            for (std::size_t i = 0; i < clusterer.size(); ++i) {
                auto row = clusterer.probabilities().row(i);
                std::copy(row.begin(), row.end(), before.begin());
                if (clusterer.update(i) < -1e-12 * scale)
                    throw Error(Errc::contract_violation, "softmax update decreased the objective");
                for (std::size_t k = 0; k < before.size(); ++k)
                    change = std::max(change, std::abs(row[k] - before[k]));
            }
        } else {
            change = clusterer.sweep();
        }
        ++result.sweeps;
        if (change <= opts.tolerance) {
            result.converged = true;
            break;
        }
    }
    result.assignment = clusterer.assignment();
    result.embedding = Embedding{clusterer.embedding()};
    result.partition = argmax_partition(result.assignment.p);
    result.partition.objective = modularity(g, result.partition);
    result.partition.objective_kind = ObjectiveKind::modularity;
    return result;
}

} // namespace detail

inline SoftmaxResult softmax_cluster(const Matrix& g, const SoftmaxOptions& opts)
{
    require_symmetric(g);
    if (g.rows() == 0)
        throw Error(Errc::empty_input, "softmax_cluster needs at least one point");
    if (opts.k < 2)
        throw Error(Errc::invalid_argument, "softmax_cluster needs K >= 2");
    if (opts.init == Initialization::uniform)
        throw Error(Errc::invalid_argument,
                    "uniform initialization is a fixed point of the softmax update");
    return detail::run_softmax(g, random_soft_rows(g.rows(), opts.k, opts.seed), opts);
}

// Starts from caller-supplied rows; all-uniform rows are rejected.
inline SoftmaxResult softmax_cluster(const Matrix& g, Matrix initial_rows, const SoftmaxOptions& opts)
{
    require_symmetric(g);
    if (initial_rows.cols() < 2)
        throw Error(Errc::invalid_argument, "softmax_cluster needs K >= 2");
    if (detail::all_rows_uniform(initial_rows))
        throw Error(Errc::invalid_argument,
                    "uniform initialization is a fixed point of the softmax update");
    return detail::run_softmax(g, std::move(initial_rows), opts);
}

template <class M>
    requires requires(const M& m) { { m.values() } -> std::convertible_to<const Matrix&>; }
SoftmaxResult softmax_cluster(const M& g, const SoftmaxOptions& opts)
{
    return softmax_cluster(g.values(), opts);
}

// Repeatedly merges the pair of clusters with the largest positive cross sum
// gamma(Sa, Sb) until every pair is non-positive or one cluster remains.
inline Partition agglomerate(const Matrix& g, const Partition& p)
{
    require_symmetric(g);
    p.validate(g.rows());
    std::vector<NodeSet> clusters = p.clusters;
    std::size_t kk = clusters.size();
    Matrix cross(kk, kk);
    for (std::size_t a = 0; a < kk; ++a)
        for (std::size_t b = a; b < kk; ++b) {
            const double s = block_sum(g, clusters[a], clusters[b]);
            cross(a, b) = s;
            cross(b, a) = s;
        }
    std::vector<char> alive(kk, 1);
    std::size_t remaining = kk;
    while (remaining > 1) {
        double best = 0.0;
        std::size_t ba = kk, bb = kk;
        for (std::size_t a = 0; a < kk; ++a) {
            if (!alive[a])
                continue;
            for (std::size_t b = a + 1; b < kk; ++b)
                if (alive[b] && cross(a, b) > best) {
                    best = cross(a, b);
                    ba = a;
                    bb = b;
                }
        }
        if (ba == kk)
            break;
        clusters[ba].insert(clusters[ba].end(), clusters[bb].begin(), clusters[bb].end());
        clusters[bb].clear();
        alive[bb] = 0;
        --remaining;
        cross(ba, ba) += cross(bb, bb) + 2.0 * cross(ba, bb);
        for (std::size_t c = 0; c < kk; ++c)
            if (alive[c] && c != ba) {
                cross(ba, c) += cross(bb, c);
                cross(c, ba) = cross(ba, c);
            }
    }
    Partition out;
    for (auto& c : clusters)
        if (!c.empty())
            out.clusters.push_back(std::move(c));
    out = out.canonical();
    out.objective = modularity(g, out);
    out.objective_kind = ObjectiveKind::modularity;
    return out;
}

// Near-one-hot rows: 1 - (K0-1)*mass on the member cluster, mass elsewhere.
inline Matrix warm_start_rows(const Partition& p, std::size_t n, double mass = 1e-3)
{
    const std::size_t k0 = p.size();
    Matrix rows(n, k0, k0 > 1 ? mass : 1.0);
    const double home = 1.0 - static_cast<double>(k0 - 1) * mass;
    if (!(home > mass))
        throw Error(Errc::invalid_argument, "too many clusters for the warm-start mass");
    for (std::size_t k = 0; k < k0; ++k)
        for (auto i : p.clusters[k])
            rows(i, k) = home;
    return rows;
}

// K nonempty sets from a seeded shuffle, sizes differing by at most one.
inline Partition random_balanced_partition(std::size_t n, std::size_t k, std::uint64_t seed)
{
    if (k == 0 || k > n)
        throw Error(Errc::invalid_argument, "need 1 <= K <= n for a balanced partition");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> labels(n);
    for (std::size_t r = 0; r < n; ++r)
        labels[order[r]] = r % k;
    return Partition::from_labels(labels);
}

// 1 / max_i sum_j |g(i,j)|: the largest theta for which every theta * z_i(k) stays within [-1, 1].
inline double unit_theta(const Matrix& g)
{
    double widest = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i) {
        double s = 0.0;
        for (double v : g.row(i))
            s += std::abs(v);
        widest = std::max(widest, s);
    }
    if (!(widest > 0.0))
        throw Error(Errc::invalid_argument, "unit_theta of a zero matrix");
    return 1.0 / widest;
}

struct IphdOptions {
    std::size_t k = 2;
    double theta0 = 0.00025;
    double epsilon = 0.000025;
    std::uint64_t seed = 0;
    std::size_t max_sweeps = 10000;
    std::size_t max_alternations = 100;
    double warm_start_mass = 1e-3;
};

struct IphdResult {
    Partition partition;
    Embedding embedding;
    std::size_t alternations = 0;
    std::vector<double> modularity_trace; // modularity after each agglomeration
};

// z_i(k) = sum_{j in S_k} g(j, i)
inline Embedding cluster_embedding(const Matrix& g, const Partition& p)
{
    Embedding e{Matrix(g.rows(), p.size())};
    for (std::size_t k = 0; k < p.size(); ++k)
        for (auto j : p.clusters[k]) {
            auto row = g.row(j);
            for (std::size_t i = 0; i < g.rows(); ++i)
                e.z(i, k) += row[i];
        }
    return e;
}

inline IphdResult iphd(const Matrix& g, const IphdOptions& opts)
{
    require_symmetric(g);
    const std::size_t n = g.rows();
    if (n == 0)
        throw Error(Errc::empty_input, "iphd needs at least one point");
    if (opts.k < 2)
        throw Error(Errc::invalid_argument, "iphd needs K >= 2");
    if (opts.k > n)
        throw Error(Errc::invalid_argument, "iphd needs K <= n");

    IphdResult result;
    Partition current = random_balanced_partition(n, opts.k, opts.seed).canonical();
    double current_q = modularity(g, current);
    SoftmaxOptions sopts;
    sopts.theta0 = opts.theta0;
    sopts.epsilon = opts.epsilon;
    sopts.max_sweeps = opts.max_sweeps;
    while (result.alternations < opts.max_alternations) {
        ++result.alternations;
        Partition refined = current;
        if (current.size() > 1) {
            sopts.k = current.size();
            refined = detail::run_softmax(g, warm_start_rows(current, n, opts.warm_start_mass), sopts).partition;
        }
        Partition merged = agglomerate(g, refined);
        const double merged_q = modularity(g, merged);
        // Never accept a step back in modularity.
        if (merged_q < current_q) {
            current = agglomerate(g, current);
            current_q = modularity(g, current);
            result.modularity_trace.push_back(current_q);
            break;
        }
        result.modularity_trace.push_back(merged_q);
        const bool unchanged = merged.same_clusters(current);
        current = merged;
        current_q = merged_q;
        if (unchanged || current.size() == 1)
            break;
    }
    result.partition = current.canonical();
    result.partition.objective = current_q;
    result.partition.objective_kind = ObjectiveKind::modularity;
    result.embedding = cluster_embedding(g, result.partition);
    return result;
}

template <class M>
    requires requires(const M& m) { { m.values() } -> std::convertible_to<const Matrix&>; }
IphdResult iphd(const M& g, const IphdOptions& opts)
{
    return iphd(g.values(), opts);
}

} // namespace semimetric
