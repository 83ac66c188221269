#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shrinkparc/engine.hpp"
#include "shrinkparc/types.hpp"
#include "shrinkparc/variance.hpp"

namespace shrinkparc {

enum class LayoutMode { TestRetest3Part, SingleScanPseudo };

inline const char* to_string(LayoutMode m) {
    return m == LayoutMode::TestRetest3Part ? "test-retest-3part" : "single-scan-pseudo";
}

/// One contiguous slice of a session's timeline.
struct PartSegment {
    int session = 0;  // index into the subject's session list
    int t_begin = 0;
    int t_end = 0;        // exclusive
    bool demean = false;  // demean this segment before concatenation
};

struct SubjectLayout {
    std::string subject_id;
    std::vector<std::vector<PartSegment>> parts;
    int test_part = -1;  // index into parts; -1 when no test data exists
};

struct StudyLayout {
    LayoutMode mode = LayoutMode::SingleScanPseudo;
    std::vector<SubjectLayout> subjects;
};

/// TestRetest3Part: equal thirds of the concatenated two-session data
/// (remainder dropped from the end); the middle part spans the session
/// boundary and each of its session segments is demeaned separately.
/// SingleScanPseudo: contiguous halves of session 1; session 2, when
/// present, is reserved whole as the test set.
StudyLayout build_layout(const std::vector<SubjectSessions>& subjects, LayoutMode mode);

/// Materializes one part: slices, per-segment demeaning, concatenation.
TimeSeriesMatrix extract_part(const SubjectSessions& subject, const std::vector<PartSegment>& part);

struct PipelineOptions {
    LayoutMode mode = LayoutMode::SingleScanPseudo;
    std::vector<NoiseMethod> methods = {NoiseMethod::Common, NoiseMethod::Individual,
                                        NoiseMethod::Scaled, NoiseMethod::Global};
    Space space = Space::FisherZ;  // shrinkage space for the estimate analysis
    SignalNoiseSource signal_source = SignalNoiseSource::MatchMethod;
    PseudoGlobalAdjust global_adjust = PseudoGlobalAdjust::SecondSession;
    ThetaModel theta = default_theta_model();
    double scan_minutes = 7.0;
    int k = 4;
    int n_init = 10;
    std::uint64_t seed = 0;
    int threads = 0;
};

struct R1SubjectRow {
    std::string subject_id;
    std::string method;
    double mean_lambda = 0.0;
    double mse_raw = 0.0;
    double mse_shrunk = 0.0;
};

struct R1MethodSummary {
    std::string method;
    double median_mse_raw = 0.0;
    double median_mse_shrunk = 0.0;
    double pct_mse_decrease = 0.0;
};

struct R1Result {
    std::vector<R1SubjectRow> rows;
    std::vector<R1MethodSummary> summary;
    // Correlation-space estimates, per method then subject, for inspection
    // and downstream clustering.
    std::vector<SymMatrix> raw_estimates;
    std::vector<SymMatrix> test_estimates;
    std::vector<std::vector<SymMatrix>> shrunk_estimates;  // [method][subject]
    std::vector<std::string> subject_ids;
};

/// Shrinkage-estimate reliability: raw estimates from part/session 1,
/// variance components per the layout mode, MSE of raw and shrunk
/// estimates against the test-set raw estimate.
R1Result run_analysis_r1(const std::vector<SubjectSessions>& subjects, const PipelineOptions& opts);

struct R2SubjectRow {
    std::string subject_id;
    std::string method;
    double mean_lambda = 0.0;
    double dice_raw = 0.0;
    double dice_shrunk = 0.0;
};

struct R2MethodSummary {
    std::string method;
    double median_dice_raw = 0.0;
    double median_dice_shrunk = 0.0;
    double pct_dice_increase = 0.0;
};

struct R2Result {
    std::vector<R2SubjectRow> rows;
    std::vector<R2MethodSummary> summary;
    std::vector<Parcellation> raw_parcellations;
    std::vector<Parcellation> test_parcellations;
    std::vector<std::vector<Parcellation>> shrunk_parcellations;  // [method][subject]
    std::vector<std::string> subject_ids;
};

/// Parcellation reliability: clusters raw and shrunk estimates (shrinkage
/// performed directly on correlations) and scores Dice against the
/// test-set parcellation.
R2Result run_analysis_r2(const std::vector<SubjectSessions>& subjects, const PipelineOptions& opts);

std::string r1_results_csv(const R1Result& r);
std::string r1_summary_csv(const R1Result& r);
std::string r2_results_csv(const R2Result& r);
std::string r2_summary_csv(const R2Result& r);

}  // namespace shrinkparc
