#pragma once

// K-sets (metric distances) and K-sets+ (semi-metrics and raw similarities):
// point-to-set Delta-distance, its adjusted form, and the normalized modularity.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <span>
#include <thread>
#include <vector>

#include "semimetric/core.hpp"
#include "semimetric/partition.hpp"
#include "semimetric/sampling.hpp"
#include "semimetric/softmax.hpp"

namespace semimetric {

// Delta(x,S) = g(x,x) - 2 g(x,S)/|S| + g(S,S)/|S|^2
inline double delta_distance(const Matrix& g, std::size_t x, std::span<const std::size_t> s)
{
    if (s.empty())
        throw Error(Errc::invalid_argument, "Delta-distance to an empty set");
    const double size = static_cast<double>(s.size());
    double gxs = 0.0;
    for (auto y : s)
        gxs += g(x, y);
    return g(x, x) - 2.0 * gxs / size + block_sum(g, s, s) / (size * size);
}

inline double adjusted_delta_distance(const Matrix& g, std::size_t x, std::span<const std::size_t> s)
{
    if (s.empty())
        throw Error(Errc::invalid_argument, "adjusted Delta-distance to an empty set");
    const bool member = std::find(s.begin(), s.end(), x) != s.end();
    const double size = static_cast<double>(s.size());
    if (!member)
        return size / (size + 1.0) * delta_distance(g, x, s);
    if (s.size() == 1)
        return -std::numeric_limits<double>::infinity();
    return size / (size - 1.0) * delta_distance(g, x, s);
}

// sum_k g(S_k, S_k) / |S_k|
inline double normalized_modularity(const Matrix& g, const Partition& p)
{
    double q = 0.0;
    for (const auto& c : p.clusters)
        if (!c.empty())
            q += block_sum(g, c, c) / static_cast<double>(c.size());
    return q;
}

// Distance form: sum_k d(S_k, S_k) / |S_k|; minimizing it maximizes the
// normalized modularity of the dual cohesion measure.
inline double normalized_distance_objective(const DistanceMatrix& d, const Partition& p)
{
    return normalized_modularity(d.values(), p);
}

// Cluster sums g(x, S_k) and g(S_k, S_k) kept in step with single-point moves.
class DeltaContext {
public:
    DeltaContext(const Matrix& g, std::span<const std::size_t> labels, std::size_t k)
        : g_(&g), labels_(labels.begin(), labels.end()), sizes_(k, 0), self_(k, 0.0), cross_(g.rows(), k)
    {
        require_symmetric(g);
        if (labels_.size() != g.rows())
            throw Error(Errc::invalid_argument, "one label per node required");
        for (auto l : labels_) {
            if (l >= k)
                throw Error(Errc::invalid_argument, "label out of range");
            ++sizes_[l];
        }
        rebuild();
    }

    std::size_t size() const noexcept { return labels_.size(); }
    std::size_t clusters() const noexcept { return sizes_.size(); }
    std::size_t label(std::size_t x) const noexcept { return labels_[x]; }
    std::size_t cluster_size(std::size_t k) const noexcept { return sizes_[k]; }
    double self_sum(std::size_t k) const noexcept { return self_[k]; }
    double cross_sum(std::size_t x, std::size_t k) const noexcept { return cross_(x, k); }
    const std::vector<std::size_t>& labels() const noexcept { return labels_; }

    double delta(std::size_t x, std::size_t k) const
    {
        const double size = static_cast<double>(sizes_[k]);
        if (sizes_[k] == 0)
            throw Error(Errc::invalid_argument, "Delta-distance to an empty set");
        return (*g_)(x, x) - 2.0 * cross_(x, k) / size + self_[k] / (size * size);
    }

    double adjusted_delta(std::size_t x, std::size_t k) const
    {
        const double size = static_cast<double>(sizes_[k]);
        if (labels_[x] != k)
            return size / (size + 1.0) * delta(x, k);
        if (sizes_[k] == 1)
            return -std::numeric_limits<double>::infinity();
        return size / (size - 1.0) * delta(x, k);
    }

    void move(std::size_t x, std::size_t to)
    {
        const std::size_t from = labels_[x];
        if (from == to)
            return;
        const Matrix& g = *g_;
        const double gxx = g(x, x);
        self_[from] += -2.0 * cross_(x, from) + gxx;
        self_[to] += 2.0 * cross_(x, to) + gxx;
        auto grow = g.row(x);
        for (std::size_t y = 0; y < g.rows(); ++y) {
            cross_(y, from) -= grow[y];
            cross_(y, to) += grow[y];
        }
        --sizes_[from];
        ++sizes_[to];
        labels_[x] = to;
    }

    double normalized_modularity() const
    {
        double q = 0.0;
        for (std::size_t k = 0; k < sizes_.size(); ++k)
            if (sizes_[k] > 0)
                q += self_[k] / static_cast<double>(sizes_[k]);
        return q;
    }

    // Largest gap between the cached sums and a from-scratch recomputation.
    double cache_error() const
    {
        DeltaContext fresh(*g_, labels_, sizes_.size());
        double worst = 0.0;
        for (std::size_t k = 0; k < sizes_.size(); ++k)
            worst = std::max(worst, std::abs(fresh.self_[k] - self_[k]));
        worst = std::max(worst, max_abs_difference(fresh.cross_, cross_));
        return worst;
    }

    Partition partition() const { return Partition::from_labels(labels_); }

private:
    void rebuild()
    {
        const Matrix& g = *g_;
        std::fill(self_.begin(), self_.end(), 0.0);
        cross_ = Matrix(g.rows(), sizes_.size());
        for (std::size_t x = 0; x < g.rows(); ++x) {
            auto grow = g.row(x);
            for (std::size_t y = 0; y < g.rows(); ++y)
                cross_(x, labels_[y]) += grow[y];
        }
        for (std::size_t x = 0; x < g.rows(); ++x)
            self_[labels_[x]] += cross_(x, labels_[x]);
    }

    const Matrix* g_;
    std::vector<std::size_t> labels_;
    std::vector<std::size_t> sizes_;
    std::vector<double> self_;
    Matrix cross_;
};

struct KsetsOptions {
    std::size_t max_passes = 10000;
    // Throws if a reassignment lowers the normalized modularity.
    bool check_monotone = false;
};

struct KsetsTrace {
    std::size_t passes = 0;
    std::size_t moves = 0;
};

namespace detail {

inline Partition run_ksets_loop(const Matrix& g, const Partition& init, const KsetsOptions& opts,
                                KsetsTrace* trace = nullptr)
{
    const std::size_t n = g.rows();
    init.validate(n);
    const std::size_t kk = init.size();
    DeltaContext ctx(g, init.labels(), kk);
    const double scale = 1.0 + g.max_abs();
    KsetsTrace local;
    double q = opts.check_monotone ? ctx.normalized_modularity() : 0.0;
    while (local.passes < opts.max_passes) {
        ++local.passes;
        bool changed = false;
        for (std::size_t x = 0; x < n; ++x) {
            const std::size_t current = ctx.label(x);
            std::size_t best = current;
            double best_value = ctx.adjusted_delta(x, current);
            for (std::size_t k = 0; k < kk; ++k) {
                if (k == current)
                    continue;
                const double v = ctx.adjusted_delta(x, k);
                // Strict improvement beyond rounding noise; ties keep the current set.
                if (v < best_value - 1e-12 * (scale + std::abs(best_value))) {
                    best_value = v;
                    best = k;
                }
            }
            if (best != current) {
                ctx.move(x, best);
                changed = true;
                ++local.moves;
                if (opts.check_monotone) {
                    const double next = ctx.normalized_modularity();
                    if (next < q - 1e-9 * (scale + std::abs(q)))
                        throw Error(Errc::contract_violation, "reassignment decreased the normalized modularity");
                    q = next;
                }
            }
        }
        if (!changed)
            break;
    }
    if (trace)
        *trace = local;
    Partition out = Partition::from_labels(ctx.labels());
    out.objective = normalized_modularity(g, out);
    out.objective_kind = ObjectiveKind::normalized_modularity;
    return out;
}

} // namespace detail

// Reassigns each point to the set with the smallest adjusted Delta-distance,
// pass after pass, until a pass makes no change.
inline Partition ksets_plus(const Matrix& g, const Partition& init, const KsetsOptions& opts = {},
                            KsetsTrace* trace = nullptr)
{
    require_symmetric(g);
    if (init.size() < 2)
        throw Error(Errc::invalid_argument, "K-sets+ needs K >= 2");
    return detail::run_ksets_loop(g, init, opts, trace);
}

inline Partition ksets_plus(const Matrix& g, std::size_t k, std::uint64_t seed, const KsetsOptions& opts = {})
{
    if (k < 2)
        throw Error(Errc::invalid_argument, "K-sets+ needs K >= 2");
    if (k > g.rows())
        throw Error(Errc::invalid_argument, "K-sets+ needs K <= n");
    return ksets_plus(g, random_balanced_partition(g.rows(), k, seed), opts);
}

// Rejects distances violating the triangle inequality.
inline void require_metric(const DistanceMatrix& d)
{
    if (auto v = find_triangle_violation(d)) {
        throw Error(Errc::not_metric, "triangle inequality fails at (" + std::to_string(v->x) + ", " +
                                          std::to_string(v->y) + ", " + std::to_string(v->z) +
                                          "); apply metric_closure first");
    }
}

// K-sets on a metric: the same assignment loop over the induced cohesion measure.
inline Partition ksets(const DistanceMatrix& d, const Partition& init, const KsetsOptions& opts = {})
{
    require_metric(d);
    if (init.size() < 2)
        throw Error(Errc::invalid_argument, "K-sets needs K >= 2");
    const CohesionMatrix g = induce_cohesion(d);
    return detail::run_ksets_loop(g.values(), init, opts);
}

inline Partition ksets(const DistanceMatrix& d, std::size_t k, std::uint64_t seed, const KsetsOptions& opts = {})
{
    if (k < 2)
        throw Error(Errc::invalid_argument, "K-sets needs K >= 2");
    if (k > d.size())
        throw Error(Errc::invalid_argument, "K-sets needs K <= n");
    return ksets(d, random_balanced_partition(d.size(), k, seed), opts);
}

struct RestartReport {
    Partition best;
    std::size_t best_restart = 0;
    std::vector<double> objectives; // one per restart
};

namespace detail {

// Runs restarts r = 0..count-1 with seeds seed + r across worker threads; the
// best objective wins, earliest restart on ties.
inline RestartReport best_of_restarts(const Matrix& g, std::size_t k, std::uint64_t seed, std::size_t count,
                                      const KsetsOptions& opts)
{
    if (count == 0)
        throw Error(Errc::invalid_argument, "need at least one restart");
    if (k < 2 || k > g.rows())
        throw Error(Errc::invalid_argument, "need 2 <= K <= n");
    std::vector<Partition> results(count);
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(count, std::thread::hardware_concurrency()));
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w)
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t r = w; r < count; r += workers)
                results[r] = run_ksets_loop(g, random_balanced_partition(g.rows(), k, seed + r), opts);
        }));
    for (auto& j : jobs)
        j.get();
    RestartReport report;
    report.objectives.reserve(count);
    for (std::size_t r = 0; r < count; ++r) {
        report.objectives.push_back(results[r].objective);
        if (r == 0 || results[r].objective > results[report.best_restart].objective)
            report.best_restart = r;
    }
    report.best = results[report.best_restart];
    return report;
}

} // namespace detail

inline RestartReport ksets_plus_restarts(const Matrix& g, std::size_t k, std::uint64_t seed, std::size_t count,
                                         const KsetsOptions& opts = {})
{
    require_symmetric(g);
    return detail::best_of_restarts(g, k, seed, count, opts);
}

inline RestartReport ksets_restarts(const DistanceMatrix& d, std::size_t k, std::uint64_t seed, std::size_t count,
                                    const KsetsOptions& opts = {})
{
    require_metric(d);
    const CohesionMatrix g = induce_cohesion(d);
    return detail::best_of_restarts(g.values(), k, seed, count, opts);
}

} // namespace semimetric
