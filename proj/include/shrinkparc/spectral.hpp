#pragma once

#include <cstdint>

#include "shrinkparc/types.hpp"

namespace shrinkparc {

/// Degrees are regularized by this amount before normalization so isolated
/// voxels do not divide by zero.
inline constexpr double kDegreeRegularization = 1e-10;

/// Nonnegative affinity from a correlation matrix: entries are rectified at
/// zero off the diagonal; the diagonal is zero. Negative correlations carry
/// no similarity.
SymMatrix build_affinity(const ConnectivityMatrix& c);

/// Intermediate state of the spectral embedding, exposed for diagnostics.
struct SpectralEmbedding {
    Eigen::MatrixXd normalized;    // D^{-1/2} A D^{-1/2}
    Eigen::VectorXd eigenvalues;   // top-k, ascending
    Eigen::MatrixXd eigenvectors;  // V x k, aligned with eigenvalues
    Eigen::MatrixXd rows;          // row-normalized embedding
    std::vector<int> zero_rows;    // rows with no usable embedding
};

SpectralEmbedding spectral_embedding(const SymMatrix& affinity, int k);

/// Normalized spectral clustering: D^{-1/2} A D^{-1/2}, top-k eigenvectors,
/// row-normalized embedding, seeded k-means with `n_init` restarts keeping
/// the best within-cluster sum of squares. Deterministic given
/// (affinity, k, seed, n_init).
Parcellation spectral_cluster(const SymMatrix& affinity, int k, std::uint64_t seed, int n_init = 10);

/// k-means on the rows of `points` with k-means++ initialization.
/// Ties in the nearest-centroid assignment break toward the lowest cluster
/// index; convergence when no centroid moves more than 1e-9.
std::vector<int> kmeans_rows(const Eigen::MatrixXd& points, int k, std::uint64_t seed, int n_init,
                             int max_iter = 300);

}  // namespace shrinkparc
