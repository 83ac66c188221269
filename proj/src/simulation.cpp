#include "shrinkparc/simulation.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "shrinkparc/connectivity.hpp"
#include "shrinkparc/io.hpp"
#include "shrinkparc/metrics.hpp"
#include "shrinkparc/parallel.hpp"
#include "shrinkparc/spectral.hpp"

namespace shrinkparc {

void SimulationDesign::validate() const {
    if (subjects < 2) throw InvalidInput("simulation: need at least 2 subjects");
    if (timepoints < 8)
        throw InvalidInput("simulation: need at least 8 timepoints so pseudo halves stay valid");
    if (!(rho > 0.0 && rho < 1.0)) throw InvalidInput("simulation: rho must be in (0,1)");
    if (!(sigma2_x > 0.0)) throw InvalidInput("simulation: sigma2_x must be positive");
    if (iterations < 1) throw InvalidInput("simulation: iterations must be >= 1");
    if (!(flip_prob >= 0.0 && flip_prob <= 1.0))
        throw InvalidInput("simulation: flip_prob must be in [0,1]");
    if (grid_side != 10) throw InvalidInput("simulation: the synthetic design is a 10x10 grid");
    if (k != 4) throw InvalidInput("simulation: the synthetic design has 4 clusters");
    if (methods.empty() || modes.empty())
        throw InvalidInput("simulation: methods and modes must be nonempty");
}

Parcellation generate_group_parcellation() {
    const int side = 10;
    Parcellation p;
    p.k = 4;
    p.labels.resize(side * side);
    for (int v = 0; v < side * side; ++v) {
        const int row = v / side;
        const int col = v % side;
        p.labels[v] = (row >= side / 2 ? 2 : 0) + (col >= side / 2 ? 1 : 0);
    }
    return p;
}

Parcellation perturb_subject_parcellation(const Parcellation& group, double flip_prob,
                                          rng::Rng& rng) {
    const int side = 10;
    if (group.n_voxels() != side * side || group.k != 4)
        throw InvalidInput("perturb_subject_parcellation: expected the 10x10 quadrant parcellation");
    Parcellation p = group;
    for (int v = 0; v < side * side; ++v) {
        const int row = v / side;
        if (row != 4 && row != 5) continue;
        if (rng.uniform() < flip_prob) p.labels[v] ^= 2;  // swap top<->bottom quadrant label
    }
    return p;
}

double draw_subject_rho(double rho, double sigma2_x, rng::Rng& rng) {
    if (!(rho > 0.0 && rho < 1.0)) throw InvalidInput("draw_subject_rho: rho must be in (0,1)");
    if (!(sigma2_x > 0.0)) throw InvalidInput("draw_subject_rho: sigma2_x must be positive");
    const double z0 = fisher_z(rho);
    const double sd = std::sqrt(sigma2_x);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        const double z = z0 + sd * rng.normal();
        if (z > 0.0) return std::tanh(z);
    }
    throw ResampleLimitExceeded("draw_subject_rho: 10,000 draws produced no positive correlation");
}

ConnectivityMatrix build_true_connectivity(const Parcellation& parcellation, double rho_i) {
    if (!(rho_i > 0.0 && rho_i < 1.0))
        throw InvalidInput("build_true_connectivity: rho_i must be in (0,1)");
    const int v = parcellation.n_voxels();
    ConnectivityMatrix c;
    c.space = Space::Correlation;
    c.values = SymMatrix(v, 1.0);
    auto& tri = c.values.tri();
    std::int64_t idx = 0;
    for (int a = 0; a < v; ++a)
        for (int b = a + 1; b < v; ++b)
            tri[idx++] = parcellation.labels[a] == parcellation.labels[b] ? rho_i : 0.0;
    return c;
}

TimeSeriesMatrix sample_session(const ConnectivityMatrix& truth, int timepoints, rng::Rng& rng) {
    if (timepoints < 1) throw InvalidInput("sample_session: timepoints must be >= 1");
    const Eigen::MatrixXd cov = truth.values.to_dense();
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    Eigen::MatrixXd factor;
    if (llt.info() == Eigen::Success) {
        factor = llt.matrixL();
    } else {
        // Semidefinite fallback: clamp tiny negative eigenvalues, reject
        // genuinely indefinite inputs.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
        if (es.info() != Eigen::Success)
            throw FactorizationFailure("sample_session: eigendecomposition failed");
        const double tol = 1e-10 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
        Eigen::VectorXd ev = es.eigenvalues();
        for (int i = 0; i < ev.size(); ++i) {
            if (ev(i) < -tol)
                throw FactorizationFailure("sample_session: covariance is not positive semidefinite");
            ev(i) = std::sqrt(std::max(ev(i), 0.0));
        }
        factor = es.eigenvectors() * ev.asDiagonal();
    }

    const int v = truth.n_voxels();
    Eigen::MatrixXd z(timepoints, v);
    for (int t = 0; t < timepoints; ++t)
        for (int j = 0; j < v; ++j) z(t, j) = rng.normal();

    TimeSeriesMatrix ts;
    ts.values = z * factor.transpose();
    ts.subject_id = truth.subject_id;
    ts.session_id = truth.session_id;
    return ts;
}

std::uint64_t iteration_seed(std::uint64_t master, int iteration) {
    return rng::substream(master, "s1-iter", static_cast<std::uint64_t>(iteration));
}

IterationData generate_iteration_data(const SimulationDesign& design, int iteration) {
    const Parcellation group = generate_group_parcellation();
    const std::uint64_t iter_seed = iteration_seed(design.seed, iteration);
    IterationData data;
    data.truth_parcellations.reserve(design.subjects);
    data.rho.reserve(design.subjects);
    data.truths.reserve(design.subjects);
    data.session1.reserve(design.subjects);
    data.session2.reserve(design.subjects);
    for (int i = 0; i < design.subjects; ++i) {
        rng::Rng r(rng::substream(iter_seed, "subject", static_cast<std::uint64_t>(i)));
        Parcellation truth_p = perturb_subject_parcellation(group, design.flip_prob, r);
        const double rho_i = draw_subject_rho(design.rho, design.sigma2_x, r);
        ConnectivityMatrix truth = build_true_connectivity(truth_p, rho_i);
        truth.subject_id = std::to_string(i);
        TimeSeriesMatrix s1 = sample_session(truth, design.timepoints, r);
        s1.subject_id = std::to_string(i);
        s1.session_id = "1";
        TimeSeriesMatrix s2 = sample_session(truth, design.timepoints, r);
        s2.subject_id = std::to_string(i);
        s2.session_id = "2";
        data.truth_parcellations.push_back(std::move(truth_p));
        data.rho.push_back(rho_i);
        data.truths.push_back(std::move(truth));
        data.session1.push_back(std::move(s1));
        data.session2.push_back(std::move(s2));
    }
    return data;
}

std::vector<int> same_region_voxels(int grid_side) {
    std::vector<int> out;
    for (int v = 0; v < grid_side * grid_side; ++v) {
        const int row = v / grid_side;
        if (row <= 3 || row >= 6) out.push_back(v);
    }
    return out;
}

std::vector<int> differing_region_voxels(int grid_side) {
    std::vector<int> out;
    for (int v = 0; v < grid_side * grid_side; ++v) {
        const int row = v / grid_side;
        if (row == 4 || row == 5) out.push_back(v);
    }
    return out;
}

namespace {

struct ScoredParcellation {
    double dice_full = 0.0;
    double dice_same = 0.0;
    double dice_diff = 0.0;
};

ScoredParcellation score_parcellation(const Parcellation& estimate, const Parcellation& truth,
                                      const std::vector<int>& same_region,
                                      const std::vector<int>& diff_region) {
    ScoredParcellation s;
    s.dice_full = dice(estimate, truth);
    s.dice_same = dice_restricted(estimate, truth, same_region);
    s.dice_diff = dice_restricted(estimate, truth, diff_region);
    return s;
}

std::vector<SimResultRow> run_iteration(const SimulationDesign& design, int iteration) {
    const IterationData data = generate_iteration_data(design, iteration);
    const std::uint64_t iter_seed = iteration_seed(design.seed, iteration);
    const std::vector<int> same_region = same_region_voxels(design.grid_side);
    const std::vector<int> diff_region = differing_region_voxels(design.grid_side);

    std::vector<SymMatrix> raw_corr, sess2_corr, half1, half2;
    raw_corr.reserve(design.subjects);
    for (int i = 0; i < design.subjects; ++i) {
        raw_corr.push_back(compute_correlation(data.session1[i]).values);
        sess2_corr.push_back(compute_correlation(data.session2[i]).values);
        auto halves = split_pseudo_sessions(data.session1[i]);
        half1.push_back(compute_correlation(halves.first).values);
        half2.push_back(compute_correlation(halves.second).values);
    }

    std::vector<SimResultRow> rows;

    // Raw arm: session-1 estimates scored directly.
    for (int i = 0; i < design.subjects; ++i) {
        SimResultRow row;
        row.iteration = iteration;
        row.subject = i;
        row.method = "raw";
        row.mode = "none";
        row.mse = matrix_mse(raw_corr[i], data.truths[i].values);
        ConnectivityMatrix c;
        c.values = raw_corr[i];
        c.space = Space::Correlation;
        const Parcellation p = spectral_cluster(build_affinity(c), design.k,
                                                cluster_seed(iter_seed, i, kRawArm), design.n_init);
        const auto s = score_parcellation(p, data.truth_parcellations[i], same_region, diff_region);
        row.dice_full = s.dice_full;
        row.dice_same = s.dice_same;
        row.dice_diff = s.dice_diff;
        row.mean_lambda = 0.0;
        rows.push_back(row);
    }

    for (DataMode mode : design.modes) {
        EngineInput input;
        input.raw = raw_corr;
        input.mode = mode;
        input.timepoints_raw = design.timepoints;
        if (mode == DataMode::TestRetest) {
            input.source1 = raw_corr;
            input.source2 = sess2_corr;
            input.timepoints_source = design.timepoints;
        } else {
            input.source1 = half1;
            input.source2 = half2;
            input.timepoints_source = design.timepoints / 2;
            input.full_session2 = sess2_corr;
        }
        EngineOptions opts;
        opts.space = design.space;
        opts.signal_source = design.signal_source;
        opts.global_adjust = design.global_adjust;

        const EngineResult result = shrink_all_methods(input, design.methods, opts);
        for (const auto& ms : result.methods) {
            const int arm = shrunk_arm_index(mode, ms.method);
            for (int i = 0; i < design.subjects; ++i) {
                const auto& subj = ms.subjects[i];
                SimResultRow row;
                row.iteration = iteration;
                row.subject = i;
                row.method = to_string(ms.method);
                row.mode = to_string(mode);
                row.mse = matrix_mse(subj.shrunk_corr, data.truths[i].values);
                ConnectivityMatrix c;
                c.values = subj.shrunk_corr;
                c.space = Space::Correlation;
                const Parcellation p = spectral_cluster(build_affinity(c), design.k,
                                                        cluster_seed(iter_seed, i, arm),
                                                        design.n_init);
                const auto s =
                    score_parcellation(p, data.truth_parcellations[i], same_region, diff_region);
                row.dice_full = s.dice_full;
                row.dice_same = s.dice_same;
                row.dice_diff = s.dice_diff;
                row.mean_lambda = subj.mean_lambda;
                rows.push_back(row);
            }
        }
    }
    return rows;
}

SimSummaryRow summarize_cell(const std::vector<SimResultRow>& rows, const std::string& method,
                             const std::string& mode, const SimSummaryRow* raw) {
    std::vector<double> mse, full, same, diff, lam;
    for (const auto& r : rows) {
        if (r.method != method || r.mode != mode) continue;
        mse.push_back(r.mse);
        full.push_back(r.dice_full);
        same.push_back(r.dice_same);
        diff.push_back(r.dice_diff);
        lam.push_back(r.mean_lambda);
    }
    SimSummaryRow s;
    s.method = method;
    s.mode = mode;
    s.median_mse = median(mse);
    s.median_dice_full = median(full);
    s.median_dice_same = median(same);
    s.median_dice_diff = median(diff);
    s.median_mean_lambda = median(lam);
    if (raw) {
        s.pct_mse_decrease = 100.0 * (raw->median_mse - s.median_mse) / raw->median_mse;
        s.pct_dice_full_increase =
            100.0 * (s.median_dice_full - raw->median_dice_full) / raw->median_dice_full;
        s.pct_dice_same_increase =
            100.0 * (s.median_dice_same - raw->median_dice_same) / raw->median_dice_same;
        s.pct_dice_diff_increase =
            100.0 * (s.median_dice_diff - raw->median_dice_diff) / raw->median_dice_diff;
    }
    return s;
}

}  // namespace

SimulationOutput run_analysis_s1(const SimulationDesign& design) {
    design.validate();
    std::vector<std::vector<SimResultRow>> per_iteration(design.iterations);
    parallel_for(design.iterations, design.threads,
                 [&](int it) { per_iteration[it] = run_iteration(design, it); });

    SimulationOutput out;
    for (const auto& rows : per_iteration)
        out.rows.insert(out.rows.end(), rows.begin(), rows.end());

    const SimSummaryRow raw = summarize_cell(out.rows, "raw", "none", nullptr);
    out.summary.push_back(raw);
    for (DataMode mode : design.modes)
        for (NoiseMethod method : design.methods)
            out.summary.push_back(summarize_cell(out.rows, to_string(method), to_string(mode), &raw));
    return out;
}

std::string results_raw_csv(const SimulationOutput& out) {
    std::string csv = "iteration,subject,method,mode,mse,dice_full,dice_same,dice_diff,mean_lambda\n";
    for (const auto& r : out.rows) {
        csv += std::to_string(r.iteration) + ',' + std::to_string(r.subject) + ',' + r.method + ',' +
               r.mode + ',' + io::fmt_g17(r.mse) + ',' + io::fmt_g17(r.dice_full) + ',' +
               io::fmt_g17(r.dice_same) + ',' + io::fmt_g17(r.dice_diff) + ',' +
               io::fmt_g17(r.mean_lambda) + '\n';
    }
    return csv;
}

std::string results_summary_csv(const SimulationOutput& out) {
    std::string csv =
        "method,mode,median_mse,median_dice_full,median_dice_same,median_dice_diff,"
        "median_mean_lambda,pct_mse_decrease,pct_dice_full_increase,pct_dice_same_increase,"
        "pct_dice_diff_increase\n";
    for (const auto& s : out.summary) {
        csv += s.method + ',' + s.mode + ',' + io::fmt_g17(s.median_mse) + ',' +
               io::fmt_g17(s.median_dice_full) + ',' + io::fmt_g17(s.median_dice_same) + ',' +
               io::fmt_g17(s.median_dice_diff) + ',' + io::fmt_g17(s.median_mean_lambda) + ',' +
               io::fmt_g17(s.pct_mse_decrease) + ',' + io::fmt_g17(s.pct_dice_full_increase) + ',' +
               io::fmt_g17(s.pct_dice_same_increase) + ',' + io::fmt_g17(s.pct_dice_diff_increase) +
               '\n';
    }
    return csv;
}

std::vector<S2Design> table1_designs(const SimulationDesign& base) {
    std::vector<S2Design> grid;
    grid.push_back({"default", 0.0, base});

    for (int i : {10, 20, 30, 100}) {
        if (i == base.subjects) continue;
        S2Design d{"I", static_cast<double>(i), base};
        d.design.subjects = i;
        grid.push_back(std::move(d));
    }
    for (int t : {100, 200, 300, 1000}) {
        if (t == base.timepoints) continue;
        S2Design d{"T", static_cast<double>(t), base};
        d.design.timepoints = t;
        grid.push_back(std::move(d));
    }
    for (double rho : {0.01, 0.05, 0.1}) {
        if (rho == base.rho) continue;
        S2Design d{"rho", rho, base};
        d.design.rho = rho;
        grid.push_back(std::move(d));
    }
    for (double s2x : {0.01, 0.02, 0.03, 0.04, 0.05}) {
        if (s2x == base.sigma2_x) continue;
        S2Design d{"sigma2x", s2x, base};
        d.design.sigma2_x = s2x;
        grid.push_back(std::move(d));
    }
    return grid;
}

S2Output run_analysis_s2(const SimulationDesign& base, const std::vector<S2Design>& grid) {
    base.validate();
    S2Output out;
    out.designs = grid;
    out.outputs.reserve(grid.size());
    for (const auto& d : grid) out.outputs.push_back(run_analysis_s1(d.design));
    return out;
}

std::string s2_summary_csv(const S2Output& out) {
    std::string csv =
        "parameter,value,subjects,timepoints,rho,sigma2x,method,mode,median_mse,"
        "median_dice_full,median_dice_same,median_dice_diff,median_mean_lambda\n";
    for (std::size_t d = 0; d < out.designs.size(); ++d) {
        const auto& dsg = out.designs[d];
        for (const auto& s : out.outputs[d].summary) {
            csv += dsg.parameter + ',' + io::fmt_g17(dsg.value) + ',' +
                   std::to_string(dsg.design.subjects) + ',' +
                   std::to_string(dsg.design.timepoints) + ',' + io::fmt_g17(dsg.design.rho) + ',' +
                   io::fmt_g17(dsg.design.sigma2_x) + ',' + s.method + ',' + s.mode + ',' +
                   io::fmt_g17(s.median_mse) + ',' + io::fmt_g17(s.median_dice_full) + ',' +
                   io::fmt_g17(s.median_dice_same) + ',' + io::fmt_g17(s.median_dice_diff) + ',' +
                   io::fmt_g17(s.median_mean_lambda) + '\n';
        }
    }
    return csv;
}

}  // namespace shrinkparc
