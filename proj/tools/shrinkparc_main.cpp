#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shrinkparc/appendix.hpp"
#include "shrinkparc/connectivity.hpp"
#include "shrinkparc/engine.hpp"
#include "shrinkparc/io.hpp"
#include "shrinkparc/metrics.hpp"
#include "shrinkparc/parallel.hpp"
#include "shrinkparc/pipeline.hpp"
#include "shrinkparc/simulation.hpp"
#include "shrinkparc/spectral.hpp"
#include "shrinkparc/variance.hpp"

namespace fs = std::filesystem;
using namespace shrinkparc;

namespace {

constexpr int kExitComputation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

std::vector<NoiseMethod> parse_methods(const std::vector<std::string>& names) {
    std::vector<NoiseMethod> out;
    for (const auto& n : names) {
        if (n == "common") out.push_back(NoiseMethod::Common);
        else if (n == "individual") out.push_back(NoiseMethod::Individual);
        else if (n == "scaled") out.push_back(NoiseMethod::Scaled);
        else if (n == "global") out.push_back(NoiseMethod::Global);
        else if (n == "all")
            return {NoiseMethod::Common, NoiseMethod::Individual, NoiseMethod::Scaled,
                    NoiseMethod::Global};
        else throw CLI::ValidationError("--methods", "unknown method '" + n + "'");
    }
    return out;
}

std::vector<DataMode> parse_modes(const std::vector<std::string>& names) {
    std::vector<DataMode> out;
    for (const auto& n : names) {
        if (n == "single-session") out.push_back(DataMode::SingleSession);
        else if (n == "test-retest") out.push_back(DataMode::TestRetest);
        else if (n == "all") return {DataMode::SingleSession, DataMode::TestRetest};
        else throw CLI::ValidationError("--modes", "unknown mode '" + n + "'");
    }
    return out;
}

Space parse_space(const std::string& name) {
    if (name == "correlation") return Space::Correlation;
    if (name == "fisherz") return Space::FisherZ;
    throw CLI::ValidationError("--space", "unknown space '" + name + "'");
}

SignalNoiseSource parse_signal_source(const std::string& name) {
    if (name == "common") return SignalNoiseSource::Common;
    if (name == "global") return SignalNoiseSource::Global;
    if (name == "match") return SignalNoiseSource::MatchMethod;
    throw CLI::ValidationError("--signal-source", "unknown source '" + name + "'");
}

PseudoGlobalAdjust parse_global_adjust(const std::string& name) {
    if (name == "theta-analytic") return PseudoGlobalAdjust::AnalyticTheta;
    if (name == "theta-model") return PseudoGlobalAdjust::ThetaModelFit;
    if (name == "second-session") return PseudoGlobalAdjust::SecondSession;
    if (name == "none") return PseudoGlobalAdjust::None;
    throw CLI::ValidationError("--global-noise-source", "unknown source '" + name + "'");
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += ',';
        out += p;
    }
    return out;
}

struct SimulateArgs {
    SimulationDesign design;
    std::string out_dir;
    std::vector<std::string> methods{"all"};
    std::vector<std::string> modes{"all"};
    std::string space = "fisherz";
    std::string signal_source = "match";
    std::string global_adjust = "theta-analytic";
    bool s2 = false;
};

int cmd_simulate(const SimulateArgs& args) {
    SimulationDesign design = args.design;
    design.methods = parse_methods(args.methods);
    design.modes = parse_modes(args.modes);
    design.space = parse_space(args.space);
    design.signal_source = parse_signal_source(args.signal_source);
    design.global_adjust = parse_global_adjust(args.global_adjust);

    const fs::path out_dir(args.out_dir);
    std::map<std::string, std::string> config{
        {"subcommand", args.s2 ? "simulate(s2)" : "simulate"},
        {"subjects", std::to_string(design.subjects)},
        {"timepoints", std::to_string(design.timepoints)},
        {"rho", io::fmt_g17(design.rho)},
        {"sigma2x", io::fmt_g17(design.sigma2_x)},
        {"iterations", std::to_string(design.iterations)},
        {"seed", std::to_string(design.seed)},
        {"flip_prob", io::fmt_g17(design.flip_prob)},
        {"k", std::to_string(design.k)},
        {"n_init", std::to_string(design.n_init)},
        {"space", args.space},
        {"signal_source", args.signal_source},
        {"global_noise_source", args.global_adjust},
        {"methods", join(args.methods)},
        {"modes", join(args.modes)},
        {"threads", std::to_string(resolve_threads(design.threads))},
    };

    if (!args.s2) {
        const SimulationOutput out = run_analysis_s1(design);
        io::write_config_resolved(out_dir, config);
        io::atomic_write(out_dir / "results_raw.csv", results_raw_csv(out));
        io::atomic_write(out_dir / "results_summary.csv", results_summary_csv(out));
        std::printf("wrote %s and %s\n", (out_dir / "results_raw.csv").c_str(),
                    (out_dir / "results_summary.csv").c_str());
    } else {
        const auto grid = table1_designs(design);
        const S2Output out = run_analysis_s2(design, grid);
        io::write_config_resolved(out_dir, config);
        for (std::size_t i = 0; i < out.designs.size(); ++i) {
            std::string name = out.designs[i].parameter;
            if (name != "default") name += "_" + io::fmt_g17(out.designs[i].value);
            const fs::path dir = out_dir / ("design_" + name);
            io::atomic_write(dir / "results_raw.csv", results_raw_csv(out.outputs[i]));
            io::atomic_write(dir / "results_summary.csv", results_summary_csv(out.outputs[i]));
        }
        io::atomic_write(out_dir / "s2_summary.csv", s2_summary_csv(out));
        std::printf("wrote %s (%zu designs)\n", (out_dir / "s2_summary.csv").c_str(),
                    out.designs.size());
    }
    return 0;
}

struct EstimateArgs {
    std::string manifest;
    std::string out_dir;
    std::string mode = "single-scan-pseudo";
    std::vector<std::string> methods{"all"};
    std::string space = "fisherz";
    std::string signal_source = "match";
    std::string global_adjust = "second-session";
    std::string theta_file;
    double theta_beta0 = 0.590;
    double theta_beta1 = 0.129;
    double scan_minutes = 7.0;
    std::uint64_t seed = 0;
    int k = 4;
    int n_init = 10;
    int threads = 0;
    bool write_estimates = false;
};

PipelineOptions pipeline_options(const EstimateArgs& args) {
    PipelineOptions opts;
    if (args.mode == "test-retest-3part") opts.mode = LayoutMode::TestRetest3Part;
    else if (args.mode == "single-scan-pseudo") opts.mode = LayoutMode::SingleScanPseudo;
    else throw CLI::ValidationError("--mode", "unknown mode '" + args.mode + "'");
    opts.methods = parse_methods(args.methods);
    opts.space = parse_space(args.space);
    opts.signal_source = parse_signal_source(args.signal_source);
    opts.global_adjust = parse_global_adjust(args.global_adjust);
    if (!args.theta_file.empty()) {
        opts.theta = io::read_theta_model(args.theta_file);
    } else {
        opts.theta = default_theta_model();
        opts.theta.beta0 = args.theta_beta0;
        opts.theta.beta1 = args.theta_beta1;
    }
    opts.scan_minutes = args.scan_minutes;
    opts.k = args.k;
    opts.n_init = args.n_init;
    opts.seed = args.seed;
    opts.threads = args.threads;
    return opts;
}

std::map<std::string, std::string> pipeline_config(const EstimateArgs& args, const char* subcommand) {
    return {
        {"subcommand", subcommand},
        {"manifest", args.manifest},
        {"mode", args.mode},
        {"methods", join(args.methods)},
        {"space", args.space},
        {"signal_source", args.signal_source},
        {"global_noise_source", args.global_adjust},
        {"theta_file", args.theta_file},
        {"theta_beta0", io::fmt_g17(args.theta_beta0)},
        {"theta_beta1", io::fmt_g17(args.theta_beta1)},
        {"scan_minutes", io::fmt_g17(args.scan_minutes)},
        {"seed", std::to_string(args.seed)},
        {"k", std::to_string(args.k)},
        {"n_init", std::to_string(args.n_init)},
        {"threads", std::to_string(resolve_threads(args.threads))},
    };
}

int cmd_estimate(const EstimateArgs& args) {
    const auto subjects = io::load_sessions(args.manifest);
    const PipelineOptions opts = pipeline_options(args);
    const R1Result result = run_analysis_r1(subjects, opts);

    const fs::path out_dir(args.out_dir);
    io::write_config_resolved(out_dir, pipeline_config(args, "estimate"));
    io::atomic_write(out_dir / "r1_results.csv", r1_results_csv(result));
    io::atomic_write(out_dir / "r1_summary.csv", r1_summary_csv(result));
    if (args.write_estimates) {
        const fs::path est = out_dir / "estimates";
        for (std::size_t i = 0; i < result.subject_ids.size(); ++i) {
            io::write_matrix_csv(est / ("subject_" + result.subject_ids[i] + "_raw.csv"),
                                 result.raw_estimates[i].to_dense());
            io::write_matrix_csv(est / ("subject_" + result.subject_ids[i] + "_test.csv"),
                                 result.test_estimates[i].to_dense());
        }
        for (std::size_t m = 0; m < result.summary.size(); ++m)
            for (std::size_t i = 0; i < result.subject_ids.size(); ++i)
                io::write_matrix_csv(est / ("subject_" + result.subject_ids[i] + "_" +
                                            result.summary[m].method + ".csv"),
                                     result.shrunk_estimates[m][i].to_dense());
    }
    std::printf("wrote %s\n", (out_dir / "r1_summary.csv").c_str());
    return 0;
}

int cmd_parcellate(const EstimateArgs& args, bool write_parcellations) {
    const auto subjects = io::load_sessions(args.manifest);
    const PipelineOptions opts = pipeline_options(args);
    const R2Result result = run_analysis_r2(subjects, opts);

    const fs::path out_dir(args.out_dir);
    io::write_config_resolved(out_dir, pipeline_config(args, "parcellate"));
    io::atomic_write(out_dir / "r2_results.csv", r2_results_csv(result));
    io::atomic_write(out_dir / "r2_summary.csv", r2_summary_csv(result));
    if (write_parcellations) {
        const fs::path dir = out_dir / "parcellations";
        for (std::size_t i = 0; i < result.subject_ids.size(); ++i) {
            io::write_parcellation_csv(dir / ("subject_" + result.subject_ids[i] + "_raw.csv"),
                                       result.raw_parcellations[i]);
            io::write_parcellation_csv(dir / ("subject_" + result.subject_ids[i] + "_test.csv"),
                                       result.test_parcellations[i]);
        }
        for (std::size_t m = 0; m < result.summary.size(); ++m)
            for (std::size_t i = 0; i < result.subject_ids.size(); ++i)
                io::write_parcellation_csv(dir / ("subject_" + result.subject_ids[i] + "_" +
                                                  result.summary[m].method + ".csv"),
                                           result.shrunk_parcellations[m][i]);
    }
    std::printf("wrote %s\n", (out_dir / "r2_summary.csv").c_str());
    return 0;
}

struct FitThetaArgs {
    std::string manifest;
    std::string out_dir;
    std::vector<double> lengths{2, 3, 4, 5, 6, 7};
    int resamples = 50;
    double timepoints_per_minute = 60.0;
    std::string space = "fisherz";
    std::uint64_t seed = 0;
};

int cmd_fit_theta(const FitThetaArgs& args) {
    const auto subjects = io::load_sessions(args.manifest);
    ThetaFitOptions opts;
    opts.lengths_minutes = args.lengths;
    opts.resamples = args.resamples;
    opts.timepoints_per_minute = args.timepoints_per_minute;
    opts.space = parse_space(args.space);
    opts.seed = args.seed;
    const ThetaModel model = fit_theta_model(subjects, opts);

    const fs::path out_dir(args.out_dir);
    std::vector<std::string> lens;
    for (double t : args.lengths) lens.push_back(io::fmt_g17(t));
    io::write_config_resolved(out_dir, {{"subcommand", "fit-theta"},
                                        {"manifest", args.manifest},
                                        {"lengths", join(lens)},
                                        {"resamples", std::to_string(args.resamples)},
                                        {"timepoints_per_minute", io::fmt_g17(args.timepoints_per_minute)},
                                        {"space", args.space},
                                        {"seed", std::to_string(args.seed)}});
    io::write_theta_model(out_dir / "theta_model.txt", model);
    std::printf("beta0=%s beta1=%s (se %s, %s)\n", io::fmt_g17(model.beta0).c_str(),
                io::fmt_g17(model.beta1).c_str(), io::fmt_g17(model.se_beta0).c_str(),
                io::fmt_g17(model.se_beta1).c_str());
    return 0;
}

struct AppendixArgs {
    int subjects = 20;
    long long replicates = 100000;
    std::uint64_t seed = 0;
    std::vector<double> noise_sds;
    std::string out_dir;
    int threads = 0;
};

int cmd_verify_appendix(const AppendixArgs& args) {
    std::vector<double> sds = args.noise_sds;
    if (sds.empty()) {
        // Heterogeneous default: sigma2_i = i/10, i = 1..I.
        for (int i = 1; i <= args.subjects; ++i) sds.push_back(std::sqrt(i / 10.0));
    }
    const AppendixReport report =
        verify_expectation_identity(args.subjects, args.replicates, sds, args.seed, args.threads);
    std::fputs(report.to_text().c_str(), stdout);
    if (!args.out_dir.empty()) {
        const fs::path out_dir(args.out_dir);
        io::write_config_resolved(out_dir, {{"subcommand", "verify-appendix"},
                                            {"subjects", std::to_string(args.subjects)},
                                            {"replicates", std::to_string(args.replicates)},
                                            {"seed", std::to_string(args.seed)}});
        io::atomic_write(out_dir / "appendix_report.txt", report.to_text());
    }
    return 0;
}

struct ClusterArgs {
    std::string input;
    std::string out_dir;
    int k = 4;
    std::uint64_t seed = 0;
    int n_init = 10;
};

int cmd_cluster(const ClusterArgs& args) {
    ConnectivityMatrix c;
    c.values = SymMatrix::from_dense(io::read_matrix(args.input), 1.0);
    c.space = Space::Correlation;
    const Parcellation p = spectral_cluster(build_affinity(c), args.k, args.seed, args.n_init);
    const fs::path out_dir(args.out_dir);
    io::write_config_resolved(out_dir, {{"subcommand", "cluster"},
                                        {"input", args.input},
                                        {"k", std::to_string(args.k)},
                                        {"seed", std::to_string(args.seed)},
                                        {"n_init", std::to_string(args.n_init)}});
    io::write_parcellation_csv(out_dir / "parcellation.csv", p);
    std::printf("wrote %s\n", (out_dir / "parcellation.csv").c_str());
    return 0;
}

struct MetricsArgs {
    std::string estimate, truth;
    std::string parcellation_a, parcellation_b;
    std::vector<int> subset;
    std::string out_dir;
};

int cmd_metrics(const MetricsArgs& args) {
    std::string csv = "metric,value\n";
    std::string text;
    if (!args.estimate.empty() || !args.truth.empty()) {
        if (args.estimate.empty() || args.truth.empty())
            throw CLI::ValidationError("--estimate/--truth", "both matrices are required for MSE");
        ConnectivityMatrix a, b;
        a.values = SymMatrix::from_dense(io::read_matrix(args.estimate), 1.0);
        b.values = SymMatrix::from_dense(io::read_matrix(args.truth), 1.0);
        const double mse = matrix_mse(a.values, b.values);
        csv += "mse," + io::fmt_g17(mse) + '\n';
        text += "mse=" + io::fmt_g17(mse) + '\n';
    }
    if (!args.parcellation_a.empty() || !args.parcellation_b.empty()) {
        if (args.parcellation_a.empty() || args.parcellation_b.empty())
            throw CLI::ValidationError("--parcellation-a/-b", "both parcellations are required");
        const Parcellation a = io::read_parcellation_csv(args.parcellation_a);
        const Parcellation b = io::read_parcellation_csv(args.parcellation_b);
        const double d = dice(a, b);
        csv += "dice," + io::fmt_g17(d) + '\n';
        text += "dice=" + io::fmt_g17(d) + '\n';
        if (!args.subset.empty()) {
            const double dr = dice_restricted(a, b, args.subset);
            csv += "dice_restricted," + io::fmt_g17(dr) + '\n';
            text += "dice_restricted=" + io::fmt_g17(dr) + '\n';
        }
    }
    if (text.empty())
        throw CLI::ValidationError("metrics", "nothing to compute; pass matrices or parcellations");
    std::fputs(text.c_str(), stdout);
    if (!args.out_dir.empty()) io::atomic_write(fs::path(args.out_dir) / "metrics.csv", csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shrinkage estimation of voxel-pairwise connectivity and spectral parcellation"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Run the synthetic reliability study");
    simulate->add_option("--subjects", sim.design.subjects, "Subjects per dataset")
        ->capture_default_str();
    simulate->add_option("--timepoints", sim.design.timepoints, "Timepoints per session")
        ->capture_default_str();
    simulate->add_option("--rho", sim.design.rho, "Population within-cluster correlation")
        ->capture_default_str();
    simulate->add_option("--sigma2x", sim.design.sigma2_x, "Between-subject variance (z scale)")
        ->capture_default_str();
    simulate->add_option("--iterations", sim.design.iterations, "Simulated datasets per design")
        ->capture_default_str();
    simulate->add_option("--seed", sim.design.seed, "Master seed")->capture_default_str();
    simulate->add_option("--flip-prob", sim.design.flip_prob, "Border label swap probability")
        ->capture_default_str();
    simulate->add_option("--n-init", sim.design.n_init, "k-means restarts")->capture_default_str();
    simulate->add_option("--threads", sim.design.threads, "Worker threads (0 = auto)")
        ->capture_default_str();
    simulate->add_option("--methods", sim.methods, "Noise methods (common,individual,scaled,global,all)")
        ->delimiter(',')
        ->capture_default_str();
    simulate->add_option("--modes", sim.modes, "Data modes (single-session,test-retest,all)")
        ->delimiter(',')
        ->capture_default_str();
    simulate->add_option("--space", sim.space, "Shrinkage space (correlation,fisherz)")
        ->capture_default_str();
    simulate->add_option("--signal-source", sim.signal_source,
                         "Noise estimator subtracted from total variance (common,global,match)")
        ->capture_default_str();
    simulate->add_option("--global-noise-source", sim.global_adjust,
                         "Pseudo-split global adjustment (theta-analytic,theta-model,"
                         "second-session,none)")
        ->capture_default_str();
    simulate->add_flag("--s2", sim.s2, "Run the one-parameter-at-a-time sensitivity grid");
    simulate->add_option("--out-dir", sim.out_dir, "Output directory")->required();

    EstimateArgs est;
    auto* estimate = app.add_subcommand("estimate", "Shrinkage-estimate reliability on real data");
    auto add_pipeline_flags = [&](CLI::App* cmd, EstimateArgs& a) {
        cmd->add_option("--manifest", a.manifest, "CSV of subject_id,session_id,path")->required();
        cmd->add_option("--mode", a.mode, "Layout (test-retest-3part,single-scan-pseudo)")
            ->capture_default_str();
        cmd->add_option("--methods", a.methods, "Noise methods")->delimiter(',')->capture_default_str();
        cmd->add_option("--seed", a.seed, "Master seed")->capture_default_str();
        cmd->add_option("--signal-source", a.signal_source, "Signal-variance noise source")
            ->capture_default_str();
        cmd->add_option("--global-noise-source", a.global_adjust,
                        "Global noise for pseudo splits (second-session,theta-analytic,"
                        "theta-model,none)")
            ->capture_default_str();
        cmd->add_option("--theta-file", a.theta_file, "Fitted theta model file");
        cmd->add_option("--theta-beta0", a.theta_beta0, "Theta model intercept")
            ->capture_default_str();
        cmd->add_option("--theta-beta1", a.theta_beta1, "Theta model slope")->capture_default_str();
        cmd->add_option("--scan-minutes", a.scan_minutes, "Full-scan length in minutes")
            ->capture_default_str();
        cmd->add_option("--threads", a.threads, "Worker threads (0 = auto)")->capture_default_str();
        cmd->add_option("--out-dir", a.out_dir, "Output directory")->required();
    };
    add_pipeline_flags(estimate, est);
    estimate->add_option("--space", est.space, "Shrinkage space (correlation,fisherz)")
        ->capture_default_str();
    estimate->add_flag("--write-estimates", est.write_estimates,
                       "Write raw/test/shrunk matrices under estimates/");

    EstimateArgs par;
    bool write_parcellations = true;
    auto* parcellate = app.add_subcommand("parcellate", "Parcellation reliability on real data");
    add_pipeline_flags(parcellate, par);
    parcellate->add_option("--k", par.k, "Cluster count")->capture_default_str();
    parcellate->add_option("--n-init", par.n_init, "k-means restarts")->capture_default_str();
    parcellate->add_flag("--write-parcellations,!--no-write-parcellations", write_parcellations,
                         "Write per-subject parcellation CSVs");

    FitThetaArgs theta;
    auto* fit_theta = app.add_subcommand("fit-theta", "Fit the scan-length adjustment model");
    fit_theta->add_option("--manifest", theta.manifest, "CSV of subject_id,session_id,path")
        ->required();
    fit_theta->add_option("--lengths", theta.lengths, "Scan lengths in minutes")
        ->delimiter(',')
        ->capture_default_str();
    fit_theta->add_option("--resamples", theta.resamples, "Windows per (subject,session,length)")
        ->capture_default_str();
    fit_theta->add_option("--timepoints-per-minute", theta.timepoints_per_minute,
                          "Sampling rate used to convert minutes to timepoints")
        ->capture_default_str();
    fit_theta->add_option("--space", theta.space, "Working space")->capture_default_str();
    fit_theta->add_option("--seed", theta.seed, "Master seed")->capture_default_str();
    fit_theta->add_option("--out-dir", theta.out_dir, "Output directory")->required();

    AppendixArgs appendix;
    auto* verify = app.add_subcommand("verify-appendix",
                                      "Monte-Carlo check that the common and mean-individual "
                                      "noise estimators share an expectation");
    verify->add_option("--subjects", appendix.subjects, "Subjects")->capture_default_str();
    verify->add_option("--replicates", appendix.replicates, "Monte-Carlo replicates")
        ->capture_default_str();
    verify->add_option("--seed", appendix.seed, "Master seed")->capture_default_str();
    verify->add_option("--noise-sds", appendix.noise_sds,
                       "Per-subject noise standard deviations (default sqrt(i/10))")
        ->delimiter(',');
    verify->add_option("--threads", appendix.threads, "Worker threads (0 = auto)")
        ->capture_default_str();
    verify->add_option("--out-dir", appendix.out_dir, "Optional output directory");

    ClusterArgs cluster;
    auto* cluster_cmd = app.add_subcommand("cluster", "Spectral clustering of one matrix");
    cluster_cmd->add_option("--input", cluster.input, "Correlation matrix (CSV or SHPC)")
        ->required();
    cluster_cmd->add_option("--k", cluster.k, "Cluster count")->capture_default_str();
    cluster_cmd->add_option("--seed", cluster.seed, "Seed")->capture_default_str();
    cluster_cmd->add_option("--n-init", cluster.n_init, "k-means restarts")->capture_default_str();
    cluster_cmd->add_option("--out-dir", cluster.out_dir, "Output directory")->required();

    MetricsArgs metrics;
    auto* metrics_cmd = app.add_subcommand("metrics", "MSE and Dice between stored results");
    metrics_cmd->add_option("--estimate", metrics.estimate, "Estimated matrix");
    metrics_cmd->add_option("--truth", metrics.truth, "Reference matrix");
    metrics_cmd->add_option("--parcellation-a", metrics.parcellation_a, "First parcellation CSV");
    metrics_cmd->add_option("--parcellation-b", metrics.parcellation_b, "Second parcellation CSV");
    metrics_cmd->add_option("--subset", metrics.subset, "Voxel subset for restricted Dice")
        ->delimiter(',');
    metrics_cmd->add_option("--out-dir", metrics.out_dir, "Optional output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim);
        if (estimate->parsed()) return cmd_estimate(est);
        if (parcellate->parsed()) return cmd_parcellate(par, write_parcellations);
        if (fit_theta->parsed()) return cmd_fit_theta(theta);
        if (verify->parsed()) return cmd_verify_appendix(appendix);
        if (cluster_cmd->parsed()) return cmd_cluster(cluster);
        if (metrics_cmd->parsed()) return cmd_metrics(metrics);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitComputation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitComputation;
    }
    return kExitUsage;
}
