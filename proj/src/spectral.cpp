#include "shrinkparc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "shrinkparc/rng.hpp"

namespace shrinkparc {

SymMatrix build_affinity(const ConnectivityMatrix& c) {
    if (c.space != Space::Correlation)
        throw MixedSpace("build_affinity: input must be in correlation space");
    SymMatrix a(c.n_voxels(), 0.0);
    const auto& in = c.values.tri();
    auto& out = a.tri();
    for (std::size_t p = 0; p < out.size(); ++p) out[p] = std::max(in[p], 0.0);
    return a;
}

namespace {

struct KmeansRun {
    std::vector<int> labels;
    double wcss = std::numeric_limits<double>::infinity();
};

KmeansRun kmeans_once(const Eigen::MatrixXd& x, int k, rng::Rng& rng, int max_iter) {
    const int n = static_cast<int>(x.rows());
    const int d = static_cast<int>(x.cols());

    // k-means++ seeding.
    Eigen::MatrixXd centroids(k, d);
    std::vector<double> dist2(n, std::numeric_limits<double>::infinity());
    int first = static_cast<int>(rng.uniform_index(n));
    centroids.row(0) = x.row(first);
    for (int c = 1; c < k; ++c) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d2 = (x.row(i) - centroids.row(c - 1)).squaredNorm();
            dist2[i] = std::min(dist2[i], d2);
            total += dist2[i];
        }
        int chosen = 0;
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double acc = 0.0;
            chosen = n - 1;
            for (int i = 0; i < n; ++i) {
                acc += dist2[i];
                if (acc >= target) { chosen = i; break; }
            }
        } else {
            chosen = static_cast<int>(rng.uniform_index(n));
        }
        centroids.row(c) = x.row(chosen);
    }

    std::vector<int> labels(n, 0);
    std::vector<int> counts(k, 0);
    for (int iter = 0; iter < max_iter; ++iter) {
        // Assignment; ties break toward the lowest cluster index.
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double best_d = (x.row(i) - centroids.row(0)).squaredNorm();
            for (int c = 1; c < k; ++c) {
                const double d2 = (x.row(i) - centroids.row(c)).squaredNorm();
                if (d2 < best_d) { best_d = d2; best = c; }
            }
            labels[i] = best;
        }
        Eigen::MatrixXd next = Eigen::MatrixXd::Zero(k, d);
        std::fill(counts.begin(), counts.end(), 0);
        for (int i = 0; i < n; ++i) {
            next.row(labels[i]) += x.row(i);
            ++counts[labels[i]];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                next.row(c) /= static_cast<double>(counts[c]);
            } else {
                // Re-seed an empty cluster at the point farthest from its
                // centroid; lowest index wins ties.
                int far_i = 0;
                double far_d = -1.0;
                for (int i = 0; i < n; ++i) {
                    const double d2 = (x.row(i) - centroids.row(labels[i])).squaredNorm();
                    if (d2 > far_d) { far_d = d2; far_i = i; }
                }
                next.row(c) = x.row(far_i);
            }
        }
        const double moved = (next - centroids).rowwise().norm().maxCoeff();
        centroids = next;
        if (moved < 1e-9) break;
    }

    // Final assignment against the converged centroids.
    KmeansRun run;
    run.labels.assign(n, 0);
    run.wcss = 0.0;
    for (int i = 0; i < n; ++i) {
        int best = 0;
        double best_d = (x.row(i) - centroids.row(0)).squaredNorm();
        for (int c = 1; c < k; ++c) {
            const double d2 = (x.row(i) - centroids.row(c)).squaredNorm();
            if (d2 < best_d) { best_d = d2; best = c; }
        }
        run.labels[i] = best;
        run.wcss += best_d;
    }
    return run;
}

}  // namespace

std::vector<int> kmeans_rows(const Eigen::MatrixXd& points, int k, std::uint64_t seed, int n_init,
                             int max_iter) {
    if (k < 1 || k > points.rows()) throw InvalidInput("kmeans: k out of range");
    KmeansRun best;
    for (int r = 0; r < n_init; ++r) {
        rng::Rng rs(rng::substream(seed, "kmeans", static_cast<std::uint64_t>(r)));
        KmeansRun run = kmeans_once(points, k, rs, max_iter);
        if (run.wcss < best.wcss) best = std::move(run);
    }
    return best.labels;
}

SpectralEmbedding spectral_embedding(const SymMatrix& affinity, int k) {
    const int v = affinity.size();
    if (k < 2) throw InvalidInput("spectral_embedding: k must be >= 2");
    if (k > v) throw InvalidInput("spectral_embedding: k exceeds voxel count");

    Eigen::MatrixXd a = affinity.to_dense();
    a.diagonal().setZero();
    for (int i = 0; i < v; ++i)
        for (int j = 0; j < v; ++j)
            if (a(i, j) < 0.0) throw InvalidInput("spectral_embedding: negative affinity entry");

    Eigen::VectorXd degree = a.rowwise().sum();
    if (degree.maxCoeff() <= 0.0)
        throw DegenerateAffinity("spectral_embedding: affinity has no positive entries");

    Eigen::VectorXd dinv_sqrt(v);
    for (int i = 0; i < v; ++i) dinv_sqrt(i) = 1.0 / std::sqrt(degree(i) + kDegreeRegularization);

    SpectralEmbedding out;
    out.normalized = dinv_sqrt.asDiagonal() * a * dinv_sqrt.asDiagonal();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(out.normalized);
    if (solver.info() != Eigen::Success)
        throw EigensolverFailure("spectral_embedding: eigendecomposition failed");

    // Eigenvalues come back ascending; the top-k eigenvectors span the
    // embedding.
    out.eigenvalues = solver.eigenvalues().tail(k);
    out.eigenvectors = solver.eigenvectors().rightCols(k);
    out.rows = out.eigenvectors;
    for (int i = 0; i < v; ++i) {
        const double norm = out.rows.row(i).norm();
        if (norm < 1e-8) {
            out.zero_rows.push_back(i);
            out.rows.row(i).setZero();
        } else {
            out.rows.row(i) /= norm;
        }
    }
    return out;
}

Parcellation spectral_cluster(const SymMatrix& affinity, int k, std::uint64_t seed, int n_init) {
    const int v = affinity.size();
    if (n_init < 1) throw InvalidInput("spectral_cluster: n_init must be >= 1");

    const SpectralEmbedding emb = spectral_embedding(affinity, k);
    const Eigen::MatrixXd& embedding = emb.rows;
    const std::vector<int>& zero_rows = emb.zero_rows;
    Eigen::MatrixXd a = affinity.to_dense();
    a.diagonal().setZero();

    std::vector<int> labels;
    if (zero_rows.empty()) {
        labels = kmeans_rows(embedding, k, seed, n_init);
    } else {
        // Cluster the usable rows, then give isolated voxels the label with
        // the highest total affinity; all-zero votes fall to cluster 0.
        std::vector<int> keep;
        keep.reserve(v);
        std::vector<char> is_zero(v, 0);
        for (int z : zero_rows) is_zero[z] = 1;
        for (int i = 0; i < v; ++i)
            if (!is_zero[i]) keep.push_back(i);
        if (static_cast<int>(keep.size()) < k)
            throw DegenerateAffinity("spectral_cluster: too few connected voxels for k clusters");
        Eigen::MatrixXd sub(keep.size(), k);
        for (std::size_t r = 0; r < keep.size(); ++r) sub.row(r) = embedding.row(keep[r]);
        const std::vector<int> sub_labels = kmeans_rows(sub, k, seed, n_init);
        labels.assign(v, 0);
        for (std::size_t r = 0; r < keep.size(); ++r) labels[keep[r]] = sub_labels[r];
        for (int z : zero_rows) {
            std::vector<double> vote(k, 0.0);
            for (std::size_t r = 0; r < keep.size(); ++r) vote[sub_labels[r]] += a(z, keep[r]);
            labels[z] = static_cast<int>(std::max_element(vote.begin(), vote.end()) - vote.begin());
        }
    }

    Parcellation out;
    out.labels = std::move(labels);
    out.k = k;
    return out;
}

}  // namespace shrinkparc
