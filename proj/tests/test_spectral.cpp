#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "shrinkparc/metrics.hpp"
#include "shrinkparc/rng.hpp"
#include "shrinkparc/simulation.hpp"
#include "shrinkparc/spectral.hpp"

using namespace shrinkparc;

namespace {

ConnectivityMatrix block_correlation(const std::vector<int>& labels, double rho) {
    const int v = static_cast<int>(labels.size());
    ConnectivityMatrix c;
    c.space = Space::Correlation;
    c.values = SymMatrix(v, 1.0);
    for (int a = 0; a < v; ++a)
        for (int b = a + 1; b < v; ++b)
            c.values.set(a, b, labels[a] == labels[b] ? rho : 0.0);
    return c;
}

Parcellation to_parcellation(std::vector<int> labels, int k) {
    Parcellation p;
    p.labels = std::move(labels);
    p.k = k;
    return p;
}

}  // namespace

TEST_CASE("affinity rectifies negative correlations and zeroes the diagonal") {
    ConnectivityMatrix c;
    c.space = Space::Correlation;
    c.values = SymMatrix(3, 1.0);
    c.values.set(0, 1, 0.3);
    c.values.set(0, 2, -0.3);
    c.values.set(1, 2, 0.0);
    const SymMatrix a = build_affinity(c);
    CHECK(a(0, 1) == 0.3);
    CHECK(a(0, 2) == 0.0);
    CHECK(a.diag() == 0.0);

    rng::Rng r(2);
    ConnectivityMatrix rand;
    rand.space = Space::Correlation;
    rand.values = SymMatrix(7, 1.0);
    for (int x = 0; x < 7; ++x)
        for (int y = x + 1; y < 7; ++y) rand.values.set(x, y, r.uniform() * 2 - 1);
    const SymMatrix ra = build_affinity(rand);
    const Eigen::MatrixXd dense = ra.to_dense();
    CHECK((dense - dense.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(dense.minCoeff() >= 0.0);
    CHECK(dense.diagonal().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("two disconnected cliques are recovered exactly") {
    const std::vector<int> truth{0, 0, 0, 1, 1, 1};
    const Parcellation p =
        spectral_cluster(build_affinity(block_correlation(truth, 0.4)), 2, 17);
    CHECK(dice(p, to_parcellation(truth, 2)) == 1.0);
}

TEST_CASE("noiseless four-block matrix from the synthetic design is recovered") {
    const Parcellation group = generate_group_parcellation();
    const ConnectivityMatrix truth = build_true_connectivity(group, 0.05);
    const Parcellation p = spectral_cluster(build_affinity(truth), 4, 90210);
    CHECK(dice(p, group) == 1.0);
}

TEST_CASE("all-negative correlations degenerate") {
    ConnectivityMatrix c;
    c.space = Space::Correlation;
    c.values = SymMatrix(4, 1.0, -0.2);
    CHECK_THROWS_AS(spectral_cluster(build_affinity(c), 2, 1), DegenerateAffinity);
}

TEST_CASE("embedding diagnostics: eigen-residual and row norms") {
    rng::Rng r(44);
    ConnectivityMatrix c;
    c.space = Space::Correlation;
    c.values = SymMatrix(20, 1.0);
    for (int a = 0; a < 20; ++a)
        for (int b = a + 1; b < 20; ++b) c.values.set(a, b, r.uniform());
    const SymMatrix aff = build_affinity(c);
    const SpectralEmbedding emb = spectral_embedding(aff, 4);

    for (int j = 0; j < 4; ++j) {
        const Eigen::VectorXd u = emb.eigenvectors.col(j);
        const double residual = (emb.normalized * u - emb.eigenvalues(j) * u).norm();
        CHECK(residual <= 1e-8 * u.norm());
    }
    for (int i = 0; i < emb.rows.rows(); ++i)
        CHECK(std::abs(emb.rows.row(i).norm() - 1.0) <= 1e-12);
    CHECK(emb.zero_rows.empty());
}

TEST_CASE("isolated voxels get affinity-vote labels instead of breaking") {
    // Voxels 0-2 and 3-5 form cliques; voxel 6 is fully disconnected.
    ConnectivityMatrix c;
    c.space = Space::Correlation;
    c.values = SymMatrix(7, 1.0, 0.0);
    for (int a : {0, 1, 2})
        for (int b : {0, 1, 2})
            if (a < b) c.values.set(a, b, 0.5);
    for (int a : {3, 4, 5})
        for (int b : {3, 4, 5})
            if (a < b) c.values.set(a, b, 0.5);
    const Parcellation p = spectral_cluster(build_affinity(c), 2, 3);
    CHECK(p.labels[0] == p.labels[1]);
    CHECK(p.labels[1] == p.labels[2]);
    CHECK(p.labels[3] == p.labels[4]);
    CHECK(p.labels[4] == p.labels[5]);
    CHECK(p.labels[0] != p.labels[3]);
    // The isolated voxel lands in cluster 0 (all votes are zero).
    CHECK(p.labels[6] == 0);
}

TEST_CASE("fixed seed gives identical labels; permuted input gives permuted labels") {
    const std::vector<int> truth{0, 0, 0, 1, 1, 1, 2, 2, 2};
    const ConnectivityMatrix c = block_correlation(truth, 0.3);
    const SymMatrix aff = build_affinity(c);

    const Parcellation p1 = spectral_cluster(aff, 3, 5);
    const Parcellation p2 = spectral_cluster(aff, 3, 5);
    CHECK(p1.labels == p2.labels);

    // Permutation oracle: relabel voxels, cluster, map back; adjacency of
    // the mapped-back labels must match the original adjacency exactly.
    std::vector<int> perm(truth.size());
    std::iota(perm.begin(), perm.end(), 0);
    rng::Rng r(8);
    for (int i = static_cast<int>(perm.size()) - 1; i > 0; --i)
        std::swap(perm[i], perm[r.uniform_index(i + 1)]);

    ConnectivityMatrix pc;
    pc.space = Space::Correlation;
    pc.values = SymMatrix(static_cast<int>(truth.size()), 1.0);
    for (std::size_t a = 0; a < truth.size(); ++a)
        for (std::size_t b = a + 1; b < truth.size(); ++b)
            pc.values.set(static_cast<int>(a), static_cast<int>(b),
                          c.values(perm[a], perm[b]));
    const Parcellation pp = spectral_cluster(build_affinity(pc), 3, 5);
    std::vector<int> mapped(truth.size());
    for (std::size_t a = 0; a < truth.size(); ++a) mapped[perm[a]] = pp.labels[a];
    CHECK(dice(to_parcellation(mapped, 3), p1) == 1.0);
}

TEST_CASE("argument validation") {
    const ConnectivityMatrix c = block_correlation({0, 0, 1, 1}, 0.4);
    const SymMatrix aff = build_affinity(c);
    CHECK_THROWS_AS(spectral_cluster(aff, 1, 0), InvalidInput);
    CHECK_THROWS_AS(spectral_cluster(aff, 5, 0), InvalidInput);
    CHECK_THROWS_AS(spectral_cluster(aff, 2, 0, 0), InvalidInput);
    ConnectivityMatrix z = c;
    z.space = Space::FisherZ;
    CHECK_THROWS_AS(build_affinity(z), MixedSpace);
}

TEST_CASE("kmeans splits well-separated points deterministically") {
    Eigen::MatrixXd pts(6, 2);
    pts << 0, 0, 0.1, 0, 0, 0.1, 5, 5, 5.1, 5, 5, 5.1;
    const std::vector<int> labels = kmeans_rows(pts, 2, 42, 5);
    CHECK(labels[0] == labels[1]);
    CHECK(labels[1] == labels[2]);
    CHECK(labels[3] == labels[4]);
    CHECK(labels[4] == labels[5]);
    CHECK(labels[0] != labels[3]);
}
