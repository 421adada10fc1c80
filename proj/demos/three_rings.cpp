// Three noisy rings: induced cohesion, softmax clustering and a 2-D eigen embedding.

#include <cstdio>

#include "semimetric/semimetric.hpp"

using namespace semimetric;

int main()
{
    RingOptions opts;
    opts.noise = 0.1;
    opts.seed = 7;
    const auto cloud = generate_rings(opts);
    const auto g = induce_cohesion(euclidean_distance(cloud.points));

    SoftmaxOptions so;
    so.k = 6;
    so.theta0 = 0.00025;
    so.epsilon = 0.000025;
    so.seed = 7;
    const auto r = softmax_cluster(g, so);

    std::printf("clusters found: %zu (of K = %zu)\n", r.partition.size(), so.k);
    std::printf("modularity: %.6f after %zu sweeps\n", modularity(g, r.partition), r.sweeps);
    std::printf("vertex accuracy vs ring labels: %.4f\n", vertex_accuracy(r.partition, cloud.labels));

    const auto es = eigendecompose(g);
    std::printf("top eigenvalues: %.4f %.4f %.4f\n", es.values[0], es.values[1], es.values[2]);
    const auto e = embed(es, 2);
    for (std::size_t ring = 0; ring < opts.rings; ++ring) {
        const std::size_t i = ring * opts.points_per_ring;
        std::printf("ring %zu first point -> (%.4f, %.4f)\n", ring, e.z(i, 0), e.z(i, 1));
    }
}
