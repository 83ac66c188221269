#pragma once

#include <vector>

#include "shrinkparc/types.hpp"

namespace shrinkparc {

/// Correlation entries are kept strictly inside (-1, 1); values at or
/// beyond the boundary are pulled to +/-(1 - kCorrelationClamp) and counted.
inline constexpr double kCorrelationClamp = 1e-12;

/// Pearson correlation for every voxel pair. Each column is demeaned with
/// the (T-1)-denominator sample convention (the denominator cancels in r).
/// Throws ZeroVarianceVoxel if a column is constant.
ConnectivityMatrix compute_correlation(const TimeSeriesMatrix& ts);

double fisher_z(double r);
double inverse_fisher_z(double z);

/// Elementwise z(r) = log((1+r)/(1-r))/2 on the off-diagonal pairs.
/// Entries within kCorrelationClamp of +/-1 are clamped first and counted;
/// |r| > 1 raises OutOfRange.
ConnectivityMatrix fisher_transform(const ConnectivityMatrix& c);

/// Elementwise inverse transform back to correlation space. Total on finite
/// inputs; outputs are clamped into the open interval (-1, 1).
ConnectivityMatrix inverse_fisher(const ConnectivityMatrix& z);

/// Elementwise arithmetic mean over subjects, summed in subject order.
/// Evaluated as first + mean(differences) so identical inputs reproduce
/// exactly.
SymMatrix mean_values(const std::vector<SymMatrix>& ms);
GroupMeanMatrix group_mean(const std::vector<ConnectivityMatrix>& cs);

/// Convex combination lambda*mean + (1-lambda)*raw per pair. The result is
/// exactly raw where lambda = 0, exactly the mean where lambda = 1, and is
/// clamped into the closed interval between the two endpoints otherwise.
ConnectivityMatrix apply_shrinkage(const ConnectivityMatrix& raw, const GroupMeanMatrix& mean,
                                   const ShrinkageField& lambda);

/// Per-voxel demeaning. Correlations are translation invariant, so this is
/// a numerical-conditioning step only.
TimeSeriesMatrix demean_voxels(const TimeSeriesMatrix& ts);

/// Contiguous first-half / second-half split; odd T drops the final
/// timepoint. Each sub-scan is demeaned per voxel.
std::pair<TimeSeriesMatrix, TimeSeriesMatrix> split_pseudo_sessions(const TimeSeriesMatrix& ts);

}  // namespace shrinkparc
