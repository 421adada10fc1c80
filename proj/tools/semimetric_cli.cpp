// Command-line front end: dataset generation, conversions, sampling,
// clustering, embedding, evaluation and the signed-network experiment.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "semimetric/semimetric.hpp"

using namespace semimetric;

namespace {

// Writes to the named file, or stdout when the path is empty or "-".
template <class F>
void emit(const std::string& path, F&& write)
{
    if (path.empty() || path == "-") {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(path);
    if (!out)
        throw Error(Errc::io, "cannot open '" + path + "' for writing");
    write(out);
}

Matrix load_grid(const std::string& path) { return io::read_grid(path); }

std::vector<std::size_t> load_labels(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::io, "cannot open '" + path + "'");
    return io::read_labels(in);
}

SignedGraph load_graph(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::io, "cannot open '" + path + "'");
    return io::read_edge_list(in);
}

void write_labels(const std::string& path, const std::vector<std::size_t>& labels)
{
    emit(path, [&](std::ostream& out) { io::write_partition(out, Partition::from_labels(labels)); });
}

std::vector<std::pair<double, double>> parse_centers(const std::string& text)
{
    std::vector<std::pair<double, double>> centers;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        const auto xy = io::detail::parse_row(item);
        if (xy.size() != 2)
            throw Error(Errc::invalid_argument, "centers are 'x,y;x,y;...'");
        centers.push_back({xy[0], xy[1]});
    }
    return centers;
}

struct GenerateArgs {
    std::uint64_t seed = 0;
    std::string out, labels;
    std::size_t rings = 3, per_ring = 100;
    std::vector<double> radii;
    double spacing = 4.0, noise = 0.1;
    std::size_t circles = 5, per_circle = 250;
    double radius = 5.0;
    std::string centers;
    std::size_t n = 200, n1 = 100;
    double c = 10.0, gap = 5.0, p = 0.0;
};

void add_generate(CLI::App& app)
{
    auto* gen = app.add_subcommand("generate", "synthetic datasets");
    gen->require_subcommand(1);
    auto args = std::make_shared<GenerateArgs>();

    auto common = [args](CLI::App* sub, const char* out_help) {
        sub->add_option("--seed", args->seed, "random seed");
        sub->add_option("--out", args->out, out_help);
        sub->add_option("--labels", args->labels, "ground-truth labels (node,cluster)");
    };

    auto* rings = gen->add_subcommand("rings", "points on rings");
    common(rings, "points grid (x,y per line)");
    rings->add_option("--rings", args->rings, "number of rings");
    rings->add_option("--points", args->per_ring, "points per ring");
    rings->add_option("--radii", args->radii, "ring radii (default 1 each)")->delimiter(',');
    rings->add_option("--spacing", args->spacing, "distance between adjacent ring centers; 0 is concentric");
    rings->add_option("--noise", args->noise, "radial jitter half-width");
    rings->callback([args] {
        RingOptions opts;
        opts.rings = args->rings;
        opts.points_per_ring = args->per_ring;
        opts.radii = args->radii.empty() ? std::vector<double>(args->rings, 1.0) : args->radii;
        opts.center_spacing = args->spacing;
        opts.noise = args->noise;
        opts.seed = args->seed;
        const auto cloud = generate_rings(opts);
        emit(args->out, [&](std::ostream& out) { io::write_grid(out, cloud.points); });
        if (!args->labels.empty())
            write_labels(args->labels, cloud.labels);
    });

    auto* circles = gen->add_subcommand("circles", "points in filled discs");
    common(circles, "points grid (x,y per line)");
    circles->add_option("--circles", args->circles, "number of discs");
    circles->add_option("--points", args->per_circle, "points per disc");
    circles->add_option("--radius", args->radius, "disc radius");
    circles->add_option("--centers", args->centers, "disc centers 'x,y;x,y;...' (default: five-disc layout)");
    circles->callback([args] {
        CircleOptions opts;
        opts.circles = args->circles;
        opts.points_per_circle = args->per_circle;
        opts.radius_scale = args->radius;
        opts.seed = args->seed;
        opts.centers = args->centers.empty() ? five_circle_centers() : parse_centers(args->centers);
        const auto cloud = generate_circles(opts);
        emit(args->out, [&](std::ostream& out) { io::write_grid(out, cloud.points); });
        if (!args->labels.empty())
            write_labels(args->labels, cloud.labels);
    });

    auto* sbm = gen->add_subcommand("sbm", "two-block signed stochastic block model");
    common(sbm, "edge list (u v sign)");
    sbm->add_option("--n", args->n, "nodes");
    sbm->add_option("--n1", args->n1, "nodes in the first block");
    sbm->add_option("--c", args->c, "average degree");
    sbm->add_option("--cin-minus-cout", args->gap, "c_in - c_out");
    sbm->add_option("--p", args->p, "sign-flip (crossover) probability");
    sbm->callback([args] {
        const auto bp = block_probabilities(args->n, args->c, args->gap);
        const auto g = generate_signed_sbm(SbmParams{args->n, args->n1, bp.p_in, bp.p_out, args->p, args->seed});
        emit(args->out, [&](std::ostream& out) { io::write_edge_list(out, g); });
        if (!args->labels.empty())
            write_labels(args->labels, g.labels);
    });
}

struct CohesionArgs {
    std::string in, out, distance, graph;
    bool similarity = false;
    std::optional<double> sigma;
};

void add_cohesion(CLI::App& app)
{
    auto* sub = app.add_subcommand("cohesion", "cohesion matrix from points, distances or similarities");
    auto args = std::make_shared<CohesionArgs>();
    sub->add_option("--in", args->in, "points grid (with --distance), distance grid, or similarity grid");
    sub->add_option("--graph", args->graph, "signed edge list; similarity A + 0.5 A^2");
    sub->add_option("--distance", args->distance, "treat input as points with this distance")
        ->check(CLI::IsMember({"euclidean", "half-squared"}));
    sub->add_flag("--similarity", args->similarity, "treat input as a similarity matrix");
    sub->add_option("--sigma", args->sigma, "shift for similarity input (default: smallest valid)");
    sub->add_option("--out", args->out, "cohesion grid");
    sub->callback([args] {
        CohesionMatrix g;
        if (!args->graph.empty())
            g = similarity_to_cohesion(similarity_from_signed(load_graph(args->graph)), args->sigma);
        else if (args->similarity)
            g = similarity_to_cohesion(SimilarityMatrix(load_grid(args->in)), args->sigma);
        else if (args->distance == "euclidean")
            g = induce_cohesion(euclidean_distance(load_grid(args->in)));
        else if (args->distance == "half-squared")
            g = induce_cohesion(half_squared_euclidean(load_grid(args->in)));
        else
            g = induce_cohesion(DistanceMatrix(load_grid(args->in)));
        emit(args->out, [&](std::ostream& out) { io::write_grid(out, g.values()); });
    });
}

struct DistanceArgs {
    std::string in, out, kind = "euclidean";
    bool from_cohesion = false;
};

void add_distance(CLI::App& app)
{
    auto* sub = app.add_subcommand("distance", "distance matrix from points or from a cohesion matrix");
    auto args = std::make_shared<DistanceArgs>();
    sub->add_option("--in", args->in, "points grid, or cohesion grid with --from-cohesion")->required();
    sub->add_option("--kind", args->kind, "distance between points")
        ->check(CLI::IsMember({"euclidean", "half-squared"}));
    sub->add_flag("--from-cohesion", args->from_cohesion, "d(x,y) = (g(x,x)+g(y,y))/2 - g(x,y)");
    sub->add_option("--out", args->out, "distance grid");
    sub->callback([args] {
        const Matrix in = load_grid(args->in);
        const DistanceMatrix d = args->from_cohesion        ? cohesion_to_distance(in)
                                 : args->kind == "euclidean" ? euclidean_distance(in)
                                                             : half_squared_euclidean(in);
        emit(args->out, [&](std::ostream& out) { io::write_grid(out, d.values()); });
    });
}

struct SampleArgs {
    std::string in, out, what;
    std::optional<double> lambda, dbar;
    double from = -1.0, to = 1.0;
    std::size_t steps = 41;
};

void add_sample(CLI::App& app)
{
    auto* sub = app.add_subcommand("sample", "exponentially twisted sampling over a distance matrix");
    auto args = std::make_shared<SampleArgs>();
    sub->add_option("--in", args->in, "distance grid")->required();
    auto* lam = sub->add_option("--lambda", args->lambda, "twist parameter");
    auto* dbar = sub->add_option("--dbar", args->dbar, "target average distance (solves for lambda)");
    lam->excludes(dbar);
    sub->add_option("--emit", args->what, "what to write")
        ->required()
        ->check(CLI::IsMember({"joint", "marginal", "covariance", "dbar-curve", "lambda"}));
    sub->add_option("--from", args->from, "first lambda of the d-bar curve");
    sub->add_option("--to", args->to, "last lambda of the d-bar curve");
    sub->add_option("--steps", args->steps, "points on the d-bar curve");
    sub->add_option("--out", args->out, "output path (default stdout)");
    sub->callback([args] {
        const DistanceMatrix d(load_grid(args->in));
        if (args->what == "dbar-curve") {
            if (args->steps < 2)
                throw Error(Errc::invalid_argument, "need at least two curve points");
            emit(args->out, [&](std::ostream& out) {
                out << "lambda,dbar\n";
                for (std::size_t s = 0; s < args->steps; ++s) {
                    const double l =
                        args->from + (args->to - args->from) * static_cast<double>(s) / static_cast<double>(args->steps - 1);
                    out << io::format_double(l) << ',' << io::format_double(average_distance(d, l)) << '\n';
                }
            });
            return;
        }
        const double lambda = args->dbar ? solve_lambda(d, *args->dbar) : args->lambda.value_or(0.0);
        if (args->what == "lambda") {
            emit(args->out, [&](std::ostream& out) { out << io::format_double(lambda) << '\n'; });
            return;
        }
        const auto sg = twist(d, lambda);
        emit(args->out, [&](std::ostream& out) {
            if (args->what == "joint")
                io::write_grid(out, sg.joint);
            else if (args->what == "marginal")
                for (double m : sg.marginal)
                    out << io::format_double(m) << '\n';
            else
                io::write_grid(out, covariance_matrix(sg).values());
        });
    });
}

struct ClusterArgs {
    std::string in, out, embedding, report;
    std::size_t k = 2, restarts = 1, max_sweeps = 10000;
    std::uint64_t seed = 0;
    std::optional<double> theta0, epsilon;
};

void add_cluster(CLI::App& app)
{
    auto* sub = app.add_subcommand("cluster", "partition a cohesion matrix (or a metric, for ksets)");
    sub->require_subcommand(1);
    auto args = std::make_shared<ClusterArgs>();
    auto common = [args](CLI::App* c) {
        c->add_option("--in", args->in, "input grid")->required();
        c->add_option("--k", args->k, "number of clusters");
        c->add_option("--seed", args->seed, "random seed");
        c->add_option("--out", args->out, "partition (node,cluster)");
    };
    auto annealing = [args](CLI::App* c) {
        c->add_option("--theta0", args->theta0, "initial inverse temperature (default 1 / max row sum of |g|)");
        c->add_option("--epsilon", args->epsilon, "theta increment per update (default theta0 / n)");
        c->add_option("--max-sweeps", args->max_sweeps, "sweep limit");
        c->add_option("--embedding", args->embedding, "write the z embedding (n,K header) here");
    };
    auto restarts = [args](CLI::App* c) {
        c->add_option("--restarts", args->restarts, "independent restarts, best kept");
        c->add_option("--report", args->report, "per-restart objectives (restart,objective)");
    };
    auto anneal_params = [args](const Matrix& g) {
        const double theta0 = args->theta0.value_or(unit_theta(g));
        const double epsilon = args->epsilon.value_or(theta0 / static_cast<double>(g.rows()));
        return std::pair{theta0, epsilon};
    };
    auto finish = [args](const Partition& p, const Matrix* z) {
        emit(args->out, [&](std::ostream& out) { io::write_partition(out, p); });
        if (z && !args->embedding.empty())
            emit(args->embedding, [&](std::ostream& out) { io::write_headed_grid(out, *z); });
    };

    auto* softmax = sub->add_subcommand("softmax", "softmax clustering with annealing");
    common(softmax);
    annealing(softmax);
    softmax->callback([args, anneal_params, finish] {
        const Matrix g = load_grid(args->in);
        SoftmaxOptions opts;
        opts.k = args->k;
        std::tie(opts.theta0, opts.epsilon) = anneal_params(g);
        opts.seed = args->seed;
        opts.max_sweeps = args->max_sweeps;
        const auto r = softmax_cluster(g, opts);
        finish(r.partition, &r.embedding.z);
    });

    auto* iphd_cmd = sub->add_subcommand("iphd", "softmax refinement alternated with greedy merging");
    common(iphd_cmd);
    annealing(iphd_cmd);
    iphd_cmd->callback([args, anneal_params, finish] {
        const Matrix g = load_grid(args->in);
        IphdOptions opts;
        opts.k = args->k;
        std::tie(opts.theta0, opts.epsilon) = anneal_params(g);
        opts.seed = args->seed;
        opts.max_sweeps = args->max_sweeps;
        const auto r = iphd(g, opts);
        finish(r.partition, &r.embedding.z);
    });

    auto run_restarts = [args, finish](const RestartReport& r) {
        finish(r.best, nullptr);
        if (!args->report.empty())
            emit(args->report, [&](std::ostream& out) { io::write_restart_report(out, r); });
    };

    auto* ks = sub->add_subcommand("ksets", "K-sets on a metric distance matrix");
    common(ks);
    restarts(ks);
    ks->callback([args, run_restarts] {
        run_restarts(ksets_restarts(DistanceMatrix(load_grid(args->in)), args->k, args->seed, args->restarts));
    });

    auto* ksp = sub->add_subcommand("ksets+", "K-sets+ on a cohesion or similarity matrix");
    common(ksp);
    restarts(ksp);
    ksp->callback([args, run_restarts] {
        run_restarts(ksets_plus_restarts(load_grid(args->in), args->k, args->seed, args->restarts));
    });
}

void add_metricize(CLI::App& app)
{
    auto* sub = app.add_subcommand("metricize", "shortest-path closure of a distance matrix");
    auto in = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    sub->add_option("--in", *in, "distance grid")->required();
    sub->add_option("--out", *out, "closed distance grid");
    sub->callback([in, out] {
        const auto closed = metric_closure(DistanceMatrix(load_grid(*in)));
        emit(*out, [&](std::ostream& o) { io::write_grid(o, closed.values()); });
    });
}

struct EmbedArgs {
    std::string in, out, spectrum;
    std::size_t p0 = 2, k = 2, max_sweeps = 10000;
    std::uint64_t seed = 0;
    std::optional<double> theta0, epsilon;
};

void add_embed(CLI::App& app)
{
    auto* sub = app.add_subcommand("embed", "low-dimensional embeddings of a cohesion matrix");
    sub->require_subcommand(1);
    auto args = std::make_shared<EmbedArgs>();

    auto* eigen = sub->add_subcommand("eigen", "coordinates sqrt(lambda_k) v_k from the top eigenpairs");
    eigen->add_option("--in", args->in, "cohesion grid")->required();
    eigen->add_option("--p0", args->p0, "dimensions kept");
    eigen->add_option("--out", args->out, "coordinates grid");
    eigen->add_option("--spectrum", args->spectrum, "full eigensystem (n, eigenvalues, eigenvector grid)");
    eigen->callback([args] {
        const auto es = eigendecompose(load_grid(args->in));
        const auto e = embed(es, args->p0);
        emit(args->out, [&](std::ostream& out) { io::write_grid(out, e.z); });
        if (!args->spectrum.empty())
            emit(args->spectrum, [&](std::ostream& out) { io::write_eigensystem(out, es); });
    });

    auto* z = sub->add_subcommand("softmax-z", "the z embedding left by softmax clustering");
    z->add_option("--in", args->in, "cohesion grid")->required();
    z->add_option("--k", args->k, "number of clusters");
    z->add_option("--seed", args->seed, "random seed");
    z->add_option("--theta0", args->theta0, "initial inverse temperature");
    z->add_option("--epsilon", args->epsilon, "theta increment per update");
    z->add_option("--max-sweeps", args->max_sweeps, "sweep limit");
    z->add_option("--out", args->out, "embedding grid (n,K header)");
    z->callback([args] {
        const Matrix g = load_grid(args->in);
        SoftmaxOptions opts;
        opts.k = args->k;
        opts.theta0 = args->theta0.value_or(unit_theta(g));
        opts.epsilon = args->epsilon.value_or(opts.theta0 / static_cast<double>(g.rows()));
        opts.seed = args->seed;
        opts.max_sweeps = args->max_sweeps;
        const auto r = softmax_cluster(g, opts);
        emit(args->out, [&](std::ostream& out) { io::write_headed_grid(out, r.embedding.z); });
    });
}

struct EvalArgs {
    std::string partition, truth, graph, matrix;
};

void add_eval(CLI::App& app)
{
    auto* sub = app.add_subcommand("eval", "score a partition");
    sub->require_subcommand(1);
    auto args = std::make_shared<EvalArgs>();
    auto print = [](double v) { std::cout << io::format_double(v) << '\n'; };

    auto* edge = sub->add_subcommand("edge-acc", "fraction of edges with correct co-membership");
    edge->add_option("--partition", args->partition, "detected partition")->required();
    edge->add_option("--graph", args->graph, "signed edge list")->required();
    edge->add_option("--truth", args->truth, "ground-truth labels")->required();
    edge->callback([args, print] {
        SignedGraph g = load_graph(args->graph);
        g.labels = load_labels(args->truth);
        g.n = std::max(g.n, g.labels.size());
        print(edge_accuracy(Partition::from_labels(load_labels(args->partition)), g));
    });

    auto* vertex = sub->add_subcommand("vertex-acc", "fraction of vertices correct under the best label matching");
    vertex->add_option("--partition", args->partition, "detected partition")->required();
    vertex->add_option("--truth", args->truth, "ground-truth labels")->required();
    vertex->callback([args, print] {
        const auto truth = load_labels(args->truth);
        print(vertex_accuracy(Partition::from_labels(load_labels(args->partition)), truth));
    });

    auto matrix_metric = [&](const char* name, const char* help, double (*score)(const Matrix&, const Partition&)) {
        auto* m = sub->add_subcommand(name, help);
        m->add_option("--partition", args->partition, "partition")->required();
        m->add_option("--matrix", args->matrix, "cohesion or covariance grid")->required();
        m->callback([args, print, score] {
            const Matrix g = load_grid(args->matrix);
            const auto p = Partition::from_labels(load_labels(args->partition));
            p.validate(g.rows());
            print(score(g, p));
        });
    };
    matrix_metric("modularity", "sum_k g(S_k, S_k)",
                  [](const Matrix& g, const Partition& p) { return modularity(g, p); });
    matrix_metric("normalized-modularity", "sum_k g(S_k, S_k) / |S_k|",
                  [](const Matrix& g, const Partition& p) { return normalized_modularity(g, p); });
}

void add_experiment(CLI::App& app)
{
    auto* sub = app.add_subcommand("experiment", "signed SBM accuracy sweep over crossover probabilities");
    auto config = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    sub->add_option("--config", *config, "key=value configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", *out, "result table (default stdout)");
    sub->callback([config, out] {
        std::ifstream in(*config);
        const auto cfg = parse_config(in);
        const auto rows = run_experiment(cfg);
        emit(*out, [&](std::ostream& o) { write_experiment_table(o, rows); });
    });
}

int exit_code(Errc c)
{
    switch (c) {
    case Errc::config:
    case Errc::invalid_argument:
    case Errc::invalid_sigma:
    case Errc::out_of_range: return 2;
    case Errc::io: return 3;
    default: return 1;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Clustering with semi-metrics, cohesion measures and twisted sampling"};
    app.require_subcommand(1);
    add_generate(app);
    add_cohesion(app);
    add_distance(app);
    add_sample(app);
    add_cluster(app);
    add_metricize(app);
    add_embed(app);
    add_eval(app);
    add_experiment(app);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.code());
    }
    return 0;
}
