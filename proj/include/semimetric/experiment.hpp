#pragma once

// Signed-network experiment protocol: generate SBM graphs over a grid of
// crossover probabilities, cluster them with one of the pipelines, and report
// mean accuracy with normal-approximation 95% confidence half-widths.

#include <cmath>
#include <cstdint>
#include <future>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "semimetric/core.hpp"
#include "semimetric/datasets.hpp"
#include "semimetric/io.hpp"
#include "semimetric/ksets.hpp"
#include "semimetric/metrics.hpp"
#include "semimetric/softmax.hpp"

namespace semimetric {

enum class Algorithm { iphd, ksets_plus, ksets_metricized, softmax };
enum class AccuracyMetric { edge, vertex };

inline Algorithm parse_algorithm(const std::string& s)
{
    if (s == "iphd")
        return Algorithm::iphd;
    if (s == "ksets_plus" || s == "ksets+")
        return Algorithm::ksets_plus;
    if (s == "ksets_metricized" || s == "ksets")
        return Algorithm::ksets_metricized;
    if (s == "softmax")
        return Algorithm::softmax;
    throw Error(Errc::config, "unknown algorithm '" + s + "'");
}

inline std::string to_string(Algorithm a)
{
    switch (a) {
    case Algorithm::iphd: return "iphd";
    case Algorithm::ksets_plus: return "ksets_plus";
    case Algorithm::ksets_metricized: return "ksets_metricized";
    case Algorithm::softmax: return "softmax";
    }
    return "unknown";
}

// Clusterer knobs shared by every pipeline.
struct PipelineParams {
    std::size_t k = 2;
    double theta0 = 0.01;
    double epsilon = 0.0005;
    std::size_t max_sweeps = 10000;
    std::size_t restarts = 1;
    std::size_t metric_restarts = 50;
};

struct ExperimentConfig {
    std::size_t n = 200;
    std::size_t n1 = 100;
    double c = 10.0;
    double cin_minus_cout = 5.0;
    std::vector<double> p = {0.05};
    std::size_t trials = 10;
    std::uint64_t seed = 1;
    Algorithm algorithm = Algorithm::iphd;
    AccuracyMetric metric = AccuracyMetric::edge;
    PipelineParams pipeline;
};

namespace detail {

inline std::vector<double> parse_list(const std::string& value)
{
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(io::detail::parse_double(item));
    return out;
}

template <class T>
T parse_count(const std::string& key, const std::string& value)
{
    const double v = io::detail::parse_double(value);
    if (v < 0 || v != std::floor(v))
        throw Error(Errc::config, key + " must be a nonnegative integer");
    return static_cast<T>(v);
}

} // namespace detail

// Parses "key=value" lines; '#' starts a comment. The p key takes a
// comma-separated grid or "start:stop:step".
inline ExperimentConfig parse_config(std::istream& in)
{
    ExperimentConfig cfg;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const auto body = io::detail::trim(line);
        if (body.empty())
            continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos)
            throw Error(Errc::config, "expected key=value, got '" + std::string(body) + "'");
        const std::string key(io::detail::trim(body.substr(0, eq)));
        const std::string value(io::detail::trim(body.substr(eq + 1)));
        try {
            if (key == "n")
                cfg.n = detail::parse_count<std::size_t>(key, value);
            else if (key == "n1")
                cfg.n1 = detail::parse_count<std::size_t>(key, value);
            else if (key == "c")
                cfg.c = io::detail::parse_double(value);
            else if (key == "cin_minus_cout")
                cfg.cin_minus_cout = io::detail::parse_double(value);
            else if (key == "p") {
                if (value.find(':') != std::string::npos) {
                    std::vector<double> parts;
                    std::stringstream ss(value);
                    std::string item;
                    while (std::getline(ss, item, ':'))
                        parts.push_back(io::detail::parse_double(item));
                    if (parts.size() != 3 || !(parts[2] > 0.0))
                        throw Error(Errc::config, "p range must be start:stop:step");
                    cfg.p.clear();
                    for (std::size_t i = 0;; ++i) {
                        const double v = parts[0] + static_cast<double>(i) * parts[2];
                        if (v > parts[1] + 1e-12)
                            break;
                        cfg.p.push_back(v);
                    }
                } else {
                    cfg.p = detail::parse_list(value);
                }
            } else if (key == "trials")
                cfg.trials = detail::parse_count<std::size_t>(key, value);
            else if (key == "seed")
                cfg.seed = detail::parse_count<std::uint64_t>(key, value);
            else if (key == "algorithm")
                cfg.algorithm = parse_algorithm(value);
            else if (key == "metric") {
                if (value == "edge")
                    cfg.metric = AccuracyMetric::edge;
                else if (value == "vertex")
                    cfg.metric = AccuracyMetric::vertex;
                else
                    throw Error(Errc::config, "metric must be edge or vertex");
            } else if (key == "k")
                cfg.pipeline.k = detail::parse_count<std::size_t>(key, value);
            else if (key == "theta0")
                cfg.pipeline.theta0 = io::detail::parse_double(value);
            else if (key == "epsilon")
                cfg.pipeline.epsilon = io::detail::parse_double(value);
            else if (key == "max_sweeps")
                cfg.pipeline.max_sweeps = detail::parse_count<std::size_t>(key, value);
            else if (key == "restarts")
                cfg.pipeline.restarts = detail::parse_count<std::size_t>(key, value);
            else if (key == "metric_restarts")
                cfg.pipeline.metric_restarts = detail::parse_count<std::size_t>(key, value);
            else
                throw Error(Errc::config, "unknown key '" + key + "'");
        } catch (const Error& e) {
            if (e.code() == Errc::config)
                throw;
            throw Error(Errc::config, "bad value for '" + key + "': " + e.what());
        }
    }
    if (cfg.n1 > cfg.n)
        throw Error(Errc::config, "n1 exceeds n");
    if (cfg.trials == 0)
        throw Error(Errc::config, "trials must be positive");
    for (double p : cfg.p)
        if (!(p >= 0.0 && p <= 0.5))
            throw Error(Errc::config, "crossover probabilities must lie in [0, 0.5]");
    block_probabilities(cfg.n, cfg.c, cfg.cin_minus_cout);
    return cfg;
}

inline SbmParams sbm_params(const ExperimentConfig& cfg, double crossover, std::uint64_t seed)
{
    const auto bp = block_probabilities(cfg.n, cfg.c, cfg.cin_minus_cout);
    return SbmParams{cfg.n, cfg.n1, bp.p_in, bp.p_out, crossover, seed};
}

// Gamma = A + 0.5 A^2 fed to the chosen clusterer; the metricized pipeline goes
// through cohesion, distance and shortest-path closure before K-sets.
inline Partition cluster_signed_graph(const SignedGraph& graph, Algorithm algorithm, const PipelineParams& params,
                                      std::uint64_t seed)
{
    const SimilarityMatrix gamma = similarity_from_signed(graph);
    const std::size_t k = std::min(params.k, graph.n);
    if (graph.n < 2)
        return Partition::from_labels(std::vector<std::size_t>(graph.n, 0));
    switch (algorithm) {
    case Algorithm::iphd: {
        IphdOptions opts;
        opts.k = k;
        opts.theta0 = params.theta0;
        opts.epsilon = params.epsilon;
        opts.max_sweeps = params.max_sweeps;
        opts.seed = seed;
        return iphd(gamma.values(), opts).partition;
    }
    case Algorithm::softmax: {
        SoftmaxOptions opts;
        opts.k = k;
        opts.theta0 = params.theta0;
        opts.epsilon = params.epsilon;
        opts.max_sweeps = params.max_sweeps;
        opts.seed = seed;
        return softmax_cluster(gamma.values(), opts).partition;
    }
    case Algorithm::ksets_plus:
        return ksets_plus_restarts(gamma.values(), k, seed, std::max<std::size_t>(1, params.restarts)).best;
    case Algorithm::ksets_metricized: {
        const DistanceMatrix closed = metric_closure(cohesion_to_distance(similarity_to_cohesion(gamma)));
        return ksets_restarts(closed, k, seed, std::max<std::size_t>(1, params.metric_restarts)).best;
    }
    }
    throw Error(Errc::invalid_argument, "unknown algorithm");
}

struct TrialOutcome {
    double edge_accuracy = 0.0;
    double vertex_accuracy = 0.0;
};

inline TrialOutcome run_trial(const ExperimentConfig& cfg, double crossover, std::size_t trial)
{
    const std::uint64_t seed = cfg.seed + trial;
    const SignedGraph graph = generate_signed_sbm(sbm_params(cfg, crossover, seed));
    const Partition p = cluster_signed_graph(graph, cfg.algorithm, cfg.pipeline, seed);
    TrialOutcome out;
    out.edge_accuracy = graph.edges.empty() ? 1.0 : edge_accuracy(p, graph);
    out.vertex_accuracy = graph.n == 0 ? 1.0 : vertex_accuracy(p, graph.labels);
    return out;
}

struct ExperimentRow {
    double p = 0.0;
    double mean_accuracy = 0.0;
    double ci_halfwidth = 0.0;
    std::size_t trials = 0;
};

struct Summary {
    double mean = 0.0;
    double ci_halfwidth = 0.0;
};

// Mean with a 1.96 * standard-error half-width.
inline Summary summarize(const std::vector<double>& values)
{
    Summary s;
    if (values.empty())
        return s;
    for (double v : values)
        s.mean += v;
    s.mean /= static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values)
            ss += (v - s.mean) * (v - s.mean);
        const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
        s.ci_halfwidth = 1.96 * sd / std::sqrt(static_cast<double>(values.size()));
    }
    return s;
}

// Trials at one grid point run concurrently, seeded base_seed + trial index.
inline std::vector<TrialOutcome> run_grid_point(const ExperimentConfig& cfg, double crossover)
{
    std::vector<TrialOutcome> outcomes(cfg.trials);
    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(cfg.trials, std::thread::hardware_concurrency()));
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w)
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t t = w; t < cfg.trials; t += workers)
                outcomes[t] = run_trial(cfg, crossover, t);
        }));
    for (auto& j : jobs)
        j.get();
    return outcomes;
}

inline std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg)
{
    std::vector<ExperimentRow> rows;
    for (double p : cfg.p) {
        const auto outcomes = run_grid_point(cfg, p);
        std::vector<double> values;
        for (const auto& o : outcomes)
            values.push_back(cfg.metric == AccuracyMetric::edge ? o.edge_accuracy : o.vertex_accuracy);
        const auto s = summarize(values);
        rows.push_back({p, s.mean, s.ci_halfwidth, cfg.trials});
    }
    return rows;
}

inline void write_experiment_table(std::ostream& out, const std::vector<ExperimentRow>& rows)
{
    out << "p,mean_accuracy,ci_halfwidth,trials\n";
    for (const auto& r : rows)
        out << io::format_double(r.p) << ',' << io::format_double(r.mean_accuracy) << ','
            << io::format_double(r.ci_halfwidth) << ',' << r.trials << '\n';
}

} // namespace semimetric
