#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "shrinkparc/types.hpp"
#include "shrinkparc/variance.hpp"

namespace shrinkparc {

enum class DataMode { SingleSession, TestRetest };

inline const char* to_string(DataMode m) {
    return m == DataMode::SingleSession ? "single_session" : "test_retest";
}

/// Which noise estimator is subtracted from the total variance to form the
/// signal variance. MatchMethod uses the global scalar for the global
/// method and the common field for the others.
enum class SignalNoiseSource { Common, Global, MatchMethod };

/// How the global noise scalar is formed when the variance source is a
/// pseudo test-retest split of a longer scan.
///   AnalyticTheta: scale by the sampling-variance ratio implied by the
///                  working space (timepoint counts).
///   ThetaModelFit: scale by a fitted or stock theta(t) model (minutes).
///   SecondSession: compute from the two full sessions instead.
///   None:          use the pseudo-split estimate unadjusted.
enum class PseudoGlobalAdjust { AnalyticTheta, ThetaModelFit, SecondSession, None };

struct EngineOptions {
    Space space = Space::FisherZ;
    SignalNoiseSource signal_source = SignalNoiseSource::MatchMethod;
    PseudoGlobalAdjust global_adjust = PseudoGlobalAdjust::AnalyticTheta;
    ThetaModel theta;             // used by ThetaModelFit
    double scan_minutes = 0.0;    // full-scan length in minutes, for ThetaModelFit
};

/// Per-subject inputs to one shrinkage pass, all in correlation space.
struct EngineInput {
    // Raw estimates being shrunk (full session or part 1), one per subject.
    std::vector<SymMatrix> raw;
    // Variance-source replicate pair (two sessions, two parts, or the two
    // pseudo halves of the raw scan).
    std::vector<SymMatrix> source1;
    std::vector<SymMatrix> source2;
    // Full second-session estimates; required only by SecondSession.
    std::optional<std::vector<SymMatrix>> full_session2;
    DataMode mode = DataMode::TestRetest;
    int timepoints_raw = 0;     // scan length behind `raw`
    int timepoints_source = 0;  // scan length behind each source replicate
};

struct SubjectShrinkage {
    SymMatrix lambda;       // per-pair weights in [0,1]
    SymMatrix shrunk_corr;  // correlation space
    double mean_lambda = 0.0;
};

struct MethodShrinkage {
    NoiseMethod method = NoiseMethod::Common;
    std::vector<SubjectShrinkage> subjects;
    long signal_clamped = 0;
};

struct EngineResult {
    std::vector<MethodShrinkage> methods;
    SymMatrix group_mean_raw;  // working-space mean of the raw estimates
};

/// Runs the full variance-component / shrinkage pass for every requested
/// noise method.
///
/// The raw estimates are moved to the working space, shrunk toward their
/// group mean with per-method lambda fields, and mapped back to correlation
/// space. Noise variances come from the source pair; the total variance
/// comes from the source pair in test-retest mode and from the between-
/// subject spread of the raw estimates in single-session mode.
EngineResult shrink_all_methods(const EngineInput& input, const std::vector<NoiseMethod>& methods,
                                const EngineOptions& options);

/// Stable seed for the spectral-clustering call of one (subject, arm) cell
/// so independent drivers reproduce each other's parcellations.
std::uint64_t cluster_seed(std::uint64_t base, int subject, int arm);

/// Arm indices used with cluster_seed: 0 is the raw arm; shrunk arms are
/// enumerated by (mode, method).
int shrunk_arm_index(DataMode mode, NoiseMethod method);
inline constexpr int kRawArm = 0;
inline constexpr int kTestSetArm = 63;

}  // namespace shrinkparc
