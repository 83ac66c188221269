#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "shrinkparc/errors.hpp"

namespace shrinkparc {

/// Symmetric V-by-V matrix of voxel-pair values.
///
/// Only the strict upper triangle is stored (packed row-major), together
/// with a single shared diagonal value. All pairwise operations in this
/// library iterate the packed triangle, so symmetry holds by construction.
class SymMatrix {
public:
    SymMatrix() = default;

    SymMatrix(int n, double diag, double fill = 0.0)
        : n_(n), diag_(diag), tri_(pair_count_of(n), fill) {
        if (n < 1) throw InvalidInput("SymMatrix: size must be >= 1");
    }

    static std::int64_t pair_count_of(int n) {
        return static_cast<std::int64_t>(n) * (n - 1) / 2;
    }

    /// Packed index of the unordered pair {v,w}, v != w.
    std::int64_t pair_index(int v, int w) const {
        if (v > w) std::swap(v, w);
        return static_cast<std::int64_t>(v) * (2 * n_ - v - 1) / 2 + (w - v - 1);
    }

    int size() const { return n_; }
    std::int64_t pair_count() const { return static_cast<std::int64_t>(tri_.size()); }
    double diag() const { return diag_; }
    void set_diag(double d) { diag_ = d; }

    double operator()(int v, int w) const {
        return v == w ? diag_ : tri_[pair_index(v, w)];
    }

    void set(int v, int w, double x) {
        if (v == w) { diag_ = x; return; }
        tri_[pair_index(v, w)] = x;
    }

    std::vector<double>& tri() { return tri_; }
    const std::vector<double>& tri() const { return tri_; }

    double tri_mean() const {
        if (tri_.empty()) throw EmptyInput("SymMatrix: no off-diagonal pairs");
        double s = 0.0;
        for (double x : tri_) s += x;
        return s / static_cast<double>(tri_.size());
    }

    Eigen::MatrixXd to_dense() const {
        Eigen::MatrixXd m(n_, n_);
        for (int v = 0; v < n_; ++v) {
            m(v, v) = diag_;
            for (int w = v + 1; w < n_; ++w) {
                const double x = tri_[pair_index(v, w)];
                m(v, w) = x;
                m(w, v) = x;
            }
        }
        return m;
    }

    /// Builds from a dense matrix, averaging (i,j) and (j,i) entries.
    /// The stored diagonal is `diag`, independent of the dense diagonal.
    static SymMatrix from_dense(const Eigen::MatrixXd& m, double diag) {
        if (m.rows() != m.cols()) throw DimensionMismatch("from_dense: matrix not square");
        SymMatrix out(static_cast<int>(m.rows()), diag);
        for (int v = 0; v < out.n_; ++v)
            for (int w = v + 1; w < out.n_; ++w)
                out.tri_[out.pair_index(v, w)] = 0.5 * (m(v, w) + m(w, v));
        return out;
    }

    bool same_shape(const SymMatrix& other) const { return n_ == other.n_; }

private:
    int n_ = 0;
    double diag_ = 0.0;
    std::vector<double> tri_;
};

inline void require_same_shape(const SymMatrix& a, const SymMatrix& b, const char* what) {
    if (!a.same_shape(b))
        throw DimensionMismatch(std::string(what) + ": matrices have different sizes");
}

}  // namespace shrinkparc
