#pragma once

#include <vector>

#include "shrinkparc/types.hpp"

namespace shrinkparc {

/// Mean squared difference over the strict upper triangle.
double matrix_mse(const ConnectivityMatrix& estimate, const ConnectivityMatrix& truth);
double matrix_mse(const SymMatrix& estimate, const SymMatrix& truth);

/// Dice coefficient over same-label voxel-pair sets (strict upper triangle
/// of the adjacency relations; self-pairs excluded). Invariant to any
/// relabeling of either argument. Two all-singleton parcellations count
/// as identical (1.0).
double dice(const Parcellation& a, const Parcellation& b);

/// Dice over pairs with both endpoints inside `voxel_subset`.
double dice_restricted(const Parcellation& a, const Parcellation& b,
                       const std::vector<int>& voxel_subset);

/// Median with the mean-of-central-two convention for even lengths.
double median(std::vector<double> values);

struct ReliabilityReport {
    std::vector<double> per_subject_mse_raw;
    std::vector<double> per_subject_mse_shrunk;
    std::vector<double> per_subject_dice_raw;
    std::vector<double> per_subject_dice_shrunk;

    double median_mse_raw = 0.0;
    double median_mse_shrunk = 0.0;
    double median_dice_raw = 0.0;
    double median_dice_shrunk = 0.0;
    double pct_mse_decrease = 0.0;   // 100*(raw - shrunk)/raw
    double pct_dice_increase = 0.0;  // 100*(shrunk - raw)/raw

    bool has_mse() const { return !per_subject_mse_raw.empty(); }
    bool has_dice() const { return !per_subject_dice_raw.empty(); }
};

/// Fills the medians and percent-change summaries from the per-subject
/// vectors already present in the report.
ReliabilityReport summarize(ReliabilityReport report);

}  // namespace shrinkparc
