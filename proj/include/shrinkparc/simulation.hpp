#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shrinkparc/engine.hpp"
#include "shrinkparc/rng.hpp"
#include "shrinkparc/spectral.hpp"
#include "shrinkparc/types.hpp"

namespace shrinkparc {

struct SimulationDesign {
    int subjects = 20;
    int timepoints = 200;
    double rho = 0.05;           // population within-cluster correlation
    double sigma2_x = 0.02;      // between-subject variance on the z scale
    int iterations = 200;
    std::uint64_t seed = 0;
    double flip_prob = 0.5;      // border-voxel label swap probability
    int grid_side = 10;          // fixed by the synthetic design
    int k = 4;                   // fixed by the synthetic design
    int n_init = 10;
    int threads = 0;             // 0 = auto
    Space space = Space::FisherZ;
    SignalNoiseSource signal_source = SignalNoiseSource::MatchMethod;
    PseudoGlobalAdjust global_adjust = PseudoGlobalAdjust::AnalyticTheta;
    std::vector<NoiseMethod> methods = {NoiseMethod::Common, NoiseMethod::Individual,
                                        NoiseMethod::Scaled, NoiseMethod::Global};
    std::vector<DataMode> modes = {DataMode::SingleSession, DataMode::TestRetest};

    void validate() const;
};

/// 10x10 grid, row-major voxel indexing, one cluster per quadrant.
Parcellation generate_group_parcellation();

/// Each voxel on the horizontal border (grid rows 4 and 5) independently
/// swaps to the vertically adjacent quadrant's label with probability
/// flip_prob; all other voxels are untouched. Border voxels are visited in
/// ascending voxel order.
Parcellation perturb_subject_parcellation(const Parcellation& group, double flip_prob,
                                          rng::Rng& rng);

/// rho_i = z^{-1}(z(rho) + u), u ~ N(0, sigma2_x), resampled until
/// positive. Throws ResampleLimitExceeded after 10,000 rejections.
double draw_subject_rho(double rho, double sigma2_x, rng::Rng& rng);

/// Exchangeable block matrix: rho_i within a cluster, 0 between clusters,
/// unit diagonal.
ConnectivityMatrix build_true_connectivity(const Parcellation& parcellation, double rho_i);

/// T rows drawn from N(0, truth) through a Cholesky factor. Normals are
/// consumed in (timepoint, voxel) order.
TimeSeriesMatrix sample_session(const ConnectivityMatrix& truth, int timepoints, rng::Rng& rng);

/// Everything one iteration generates before any estimation happens.
struct IterationData {
    std::vector<Parcellation> truth_parcellations;
    std::vector<double> rho;
    std::vector<ConnectivityMatrix> truths;
    std::vector<TimeSeriesMatrix> session1;
    std::vector<TimeSeriesMatrix> session2;
};

std::uint64_t iteration_seed(std::uint64_t master, int iteration);
IterationData generate_iteration_data(const SimulationDesign& design, int iteration);

/// Voxels of the rows where all subjects share the group parcellation
/// (grid rows 0-3 and 6-9) and of the rows where subject-level differences
/// occur (grid rows 4-5).
std::vector<int> same_region_voxels(int grid_side = 10);
std::vector<int> differing_region_voxels(int grid_side = 10);

struct SimResultRow {
    int iteration = 0;
    int subject = 0;
    std::string method;  // "raw", "common", "individual", "scaled", "global"
    std::string mode;    // "none" for raw rows
    double mse = 0.0;
    double dice_full = 0.0;
    double dice_same = 0.0;
    double dice_diff = 0.0;
    double mean_lambda = 0.0;
};

struct SimSummaryRow {
    std::string method;
    std::string mode;
    double median_mse = 0.0;
    double median_dice_full = 0.0;
    double median_dice_same = 0.0;
    double median_dice_diff = 0.0;
    double median_mean_lambda = 0.0;
    double pct_mse_decrease = 0.0;
    double pct_dice_full_increase = 0.0;
    double pct_dice_same_increase = 0.0;
    double pct_dice_diff_increase = 0.0;
};

struct SimulationOutput {
    std::vector<SimResultRow> rows;
    std::vector<SimSummaryRow> summary;  // raw row first, then method/mode rows
};

/// Default-design study: per iteration and subject, generate truth and two
/// sessions, shrink the session-1 estimates under every requested method
/// and data mode, cluster raw and shrunk estimates, and score MSE against
/// the true matrix and Dice against the true parcellation.
SimulationOutput run_analysis_s1(const SimulationDesign& design);

std::string results_raw_csv(const SimulationOutput& out);
std::string results_summary_csv(const SimulationOutput& out);

struct S2Design {
    std::string parameter;  // "default", "I", "T", "rho", "sigma2x"
    double value = 0.0;
    SimulationDesign design;
};

/// One design per single-parameter deviation from the defaults. The
/// default design appears once, first.
std::vector<S2Design> table1_designs(const SimulationDesign& base);

struct S2Output {
    std::vector<S2Design> designs;
    std::vector<SimulationOutput> outputs;  // aligned with designs
};

S2Output run_analysis_s2(const SimulationDesign& base, const std::vector<S2Design>& grid);

std::string s2_summary_csv(const S2Output& out);

}  // namespace shrinkparc
