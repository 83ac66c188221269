#include "shrinkparc/metrics.hpp"

#include <algorithm>

namespace shrinkparc {

double matrix_mse(const SymMatrix& estimate, const SymMatrix& truth) {
    require_same_shape(estimate, truth, "matrix_mse");
    const auto& a = estimate.tri();
    const auto& b = truth.tri();
    if (a.empty()) throw EmptyInput("matrix_mse: no voxel pairs");
    double s = 0.0;
    for (std::size_t p = 0; p < a.size(); ++p) {
        const double d = a[p] - b[p];
        s += d * d;
    }
    return s / static_cast<double>(a.size());
}

double matrix_mse(const ConnectivityMatrix& estimate, const ConnectivityMatrix& truth) {
    if (estimate.space != truth.space) throw MixedSpace("matrix_mse: spaces differ");
    return matrix_mse(estimate.values, truth.values);
}

namespace {

double dice_from_counts(long long same_a, long long same_b, long long same_both) {
    const long long denom = same_a + same_b;
    if (denom == 0) return 1.0;  // both adjacency relations empty
    return 2.0 * static_cast<double>(same_both) / static_cast<double>(denom);
}

}  // namespace

double dice(const Parcellation& a, const Parcellation& b) {
    if (a.n_voxels() != b.n_voxels())
        throw DimensionMismatch("dice: parcellations have different voxel counts");
    const int v = a.n_voxels();
    long long same_a = 0, same_b = 0, same_both = 0;
    for (int i = 0; i < v; ++i) {
        for (int j = i + 1; j < v; ++j) {
            const bool sa = a.labels[i] == a.labels[j];
            const bool sb = b.labels[i] == b.labels[j];
            same_a += sa;
            same_b += sb;
            same_both += sa && sb;
        }
    }
    return dice_from_counts(same_a, same_b, same_both);
}

double dice_restricted(const Parcellation& a, const Parcellation& b,
                       const std::vector<int>& voxel_subset) {
    if (a.n_voxels() != b.n_voxels())
        throw DimensionMismatch("dice_restricted: parcellations have different voxel counts");
    if (voxel_subset.empty()) throw EmptySubset("dice_restricted: empty voxel subset");
    for (int s : voxel_subset)
        if (s < 0 || s >= a.n_voxels())
            throw InvalidInput("dice_restricted: voxel index out of range");
    long long same_a = 0, same_b = 0, same_both = 0;
    for (std::size_t x = 0; x < voxel_subset.size(); ++x) {
        for (std::size_t y = x + 1; y < voxel_subset.size(); ++y) {
            const int i = voxel_subset[x];
            const int j = voxel_subset[y];
            if (i == j) continue;
            const bool sa = a.labels[i] == a.labels[j];
            const bool sb = b.labels[i] == b.labels[j];
            same_a += sa;
            same_b += sb;
            same_both += sa && sb;
        }
    }
    return dice_from_counts(same_a, same_b, same_both);
}

double median(std::vector<double> values) {
    if (values.empty()) throw EmptyInput("median: empty input");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

ReliabilityReport summarize(ReliabilityReport report) {
    if (!report.has_mse() && !report.has_dice())
        throw EmptyInput("summarize: report has no per-subject values");
    if (report.has_mse()) {
        if (report.per_subject_mse_raw.size() != report.per_subject_mse_shrunk.size())
            throw DimensionMismatch("summarize: raw/shrunk MSE vectors differ in length");
        report.median_mse_raw = median(report.per_subject_mse_raw);
        report.median_mse_shrunk = median(report.per_subject_mse_shrunk);
        report.pct_mse_decrease =
            100.0 * (report.median_mse_raw - report.median_mse_shrunk) / report.median_mse_raw;
    }
    if (report.has_dice()) {
        if (report.per_subject_dice_raw.size() != report.per_subject_dice_shrunk.size())
            throw DimensionMismatch("summarize: raw/shrunk Dice vectors differ in length");
        report.median_dice_raw = median(report.per_subject_dice_raw);
        report.median_dice_shrunk = median(report.per_subject_dice_shrunk);
        report.pct_dice_increase =
            100.0 * (report.median_dice_shrunk - report.median_dice_raw) / report.median_dice_raw;
    }
    return report;
}

}  // namespace shrinkparc
