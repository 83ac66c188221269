#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace shrinkparc {

/// Monte-Carlo comparison of two noise-variance estimators at a single
/// voxel pair: the pooled (common) estimator and the mean of the
/// per-subject (individual) estimators share the expectation
/// (1/I) * sum_i sigma2_i even when the sigma2_i differ.
struct AppendixReport {
    int subjects = 0;
    long long replicates = 0;
    double analytic_value = 0.0;
    double mean_common = 0.0;
    double mean_individual = 0.0;
    double se_common = 0.0;
    double se_individual = 0.0;
    double z_common = 0.0;      // (mean - analytic) / se
    double z_individual = 0.0;
    double z_paired = 0.0;      // paired difference of the two estimators

    std::string to_text() const;
};

/// Each replicate draws U_ij ~ N(0, sigma2_i) for j = 1,2, forms
/// D_i = U_i2 - U_i1, and evaluates both estimators.
AppendixReport verify_expectation_identity(int subjects, long long replicates,
                                           const std::vector<double>& noise_sds,
                                           std::uint64_t seed, int threads = 0);

}  // namespace shrinkparc
