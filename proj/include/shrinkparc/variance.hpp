#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "shrinkparc/types.hpp"

namespace shrinkparc {

/// Intercept/slope of theta(t) = beta0 + beta1*log(t), the ratio of the
/// global noise variance at scan length t to that at length t/2. Used to
/// de-bias global noise estimates computed from pseudo test-retest splits.
struct ThetaModel {
    double beta0 = 0.0;
    double beta1 = 0.0;
    double se_beta0 = 0.0;
    double se_beta1 = 0.0;
    std::vector<std::pair<double, double>> fitted_points;  // (t minutes, theta-hat)

    double predict(double t_minutes) const;
};

/// Stock coefficients used when no fitted model is supplied; scan
/// lengths are in minutes.
ThetaModel default_theta_model();

/// Per-subject session differences D_i = W_i2 - W_i1, paired by position
/// with subject ids checked when present.
std::vector<SymMatrix> difference_matrices(const std::vector<ConnectivityMatrix>& session1,
                                           const std::vector<ConnectivityMatrix>& session2);

/// Half the between-subject sample variance of D_i at each pair,
/// (I-1) denominator.
NoiseVarianceField noise_variance_common(const std::vector<SymMatrix>& d);

/// D_i^2 / 2 at each pair for one subject.
NoiseVarianceField noise_variance_individual(const SymMatrix& d_i, const std::string& subject_id = {});

/// gamma_i = (subject mean squared difference over pairs) / (grand mean).
/// The returned factors average to 1 by construction.
ScalingFactors scaling_factor(const std::vector<SymMatrix>& d);

NoiseVarianceField noise_variance_scaled(const NoiseVarianceField& common, double gamma_i,
                                         const std::string& subject_id = {});

/// Mean of the common field over unique pairs.
double global_noise_scalar(const NoiseVarianceField& common);

/// Global scalar broadcast back to a pair field.
NoiseVarianceField noise_variance_global(const NoiseVarianceField& common);

/// theta(T) * sigma2(T/2), theta from the fitted log-length model.
double adjust_global_for_split(double global_half, const ThetaModel& theta, double t_minutes);

/// Sampling-variance ratio sigma2(T)/sigma2(T_half) implied by the Fisher
/// (1/(T-3)) or correlation (~1/(T-1)) asymptotics. Used to de-bias
/// pseudo-split global estimates when lengths are in timepoints.
double analytic_theta(int t_full, int t_half, Space space);

/// Mean over sessions of the per-session between-subject sample variance,
/// (I-1) denominator. `sessions[j]` holds the subject matrices of session j.
SymMatrix total_variance(const std::vector<std::vector<SymMatrix>>& sessions);

/// total - noise, clamped below at zero with a count of clamped pairs.
SignalVarianceField signal_variance(const SymMatrix& total, const SymMatrix& noise);

/// lambda = noise / (signal + noise); pairs where both are zero get 1.
ShrinkageField shrinkage_parameter(const NoiseVarianceField& noise, const SignalVarianceField& signal);

struct SubjectSessions {
    std::string subject_id;
    std::vector<TimeSeriesMatrix> sessions;
};

struct ThetaFitOptions {
    std::vector<double> lengths_minutes = {2, 3, 4, 5, 6, 7};
    int resamples = 50;
    double timepoints_per_minute = 60.0;
    Space space = Space::FisherZ;
    std::uint64_t seed = 0;
};

/// Estimates sigma2(t) by averaging the global noise variance over
/// resampled windows of length t drawn within each session, forms
/// theta(t) = sigma2(t)/sigma2(t/2), and fits theta on log(t) by OLS.
/// Requires two sessions per subject.
ThetaModel fit_theta_model(const std::vector<SubjectSessions>& data, const ThetaFitOptions& opts);

}  // namespace shrinkparc
