#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "shrinkparc/appendix.hpp"
#include "shrinkparc/connectivity.hpp"
#include "shrinkparc/engine.hpp"
#include "shrinkparc/metrics.hpp"
#include "shrinkparc/simulation.hpp"
#include "shrinkparc/spectral.hpp"
#include "shrinkparc/variance.hpp"

namespace py = pybind11;
using namespace shrinkparc;

namespace {

// The Python surface works in dense numpy matrices; symmetric packing is an
// internal storage concern.

ConnectivityMatrix corr_from_dense(const Eigen::MatrixXd& m) {
    ConnectivityMatrix c;
    c.values = SymMatrix::from_dense(m, 1.0);
    c.space = Space::Correlation;
    return c;
}

ConnectivityMatrix z_from_dense(const Eigen::MatrixXd& m) {
    ConnectivityMatrix c;
    c.values = SymMatrix::from_dense(m, 0.0);
    c.space = Space::FisherZ;
    return c;
}

Eigen::MatrixXd py_compute_correlation(const Eigen::MatrixXd& ts) {
    TimeSeriesMatrix t;
    t.values = ts;
    return compute_correlation(t).values.to_dense();
}

Eigen::MatrixXd py_fisher(const Eigen::MatrixXd& r) {
    return fisher_transform(corr_from_dense(r)).values.to_dense();
}

Eigen::MatrixXd py_inverse_fisher(const Eigen::MatrixXd& z) {
    return inverse_fisher(z_from_dense(z)).values.to_dense();
}

Eigen::MatrixXd py_group_mean(const std::vector<Eigen::MatrixXd>& mats) {
    std::vector<ConnectivityMatrix> cs;
    for (const auto& m : mats) cs.push_back(corr_from_dense(m));
    return group_mean(cs).values.to_dense();
}

Eigen::MatrixXd py_apply_shrinkage(const Eigen::MatrixXd& raw, const Eigen::MatrixXd& mean,
                                   const Eigen::MatrixXd& lam) {
    ConnectivityMatrix r = corr_from_dense(raw);
    GroupMeanMatrix m;
    m.values = SymMatrix::from_dense(mean, 1.0);
    m.space = Space::Correlation;
    ShrinkageField l;
    l.values = SymMatrix::from_dense(lam, 0.0);
    return apply_shrinkage(r, m, l).values.to_dense();
}

std::vector<SymMatrix> packed(const std::vector<Eigen::MatrixXd>& mats) {
    std::vector<SymMatrix> out;
    for (const auto& m : mats) out.push_back(SymMatrix::from_dense(m, 0.0));
    return out;
}

Eigen::MatrixXd py_noise_common(const std::vector<Eigen::MatrixXd>& d) {
    return noise_variance_common(packed(d)).values.to_dense();
}

Eigen::MatrixXd py_noise_individual(const Eigen::MatrixXd& d) {
    return noise_variance_individual(SymMatrix::from_dense(d, 0.0)).values.to_dense();
}

std::vector<double> py_scaling_factor(const std::vector<Eigen::MatrixXd>& d) {
    return scaling_factor(packed(d)).gamma;
}

double py_global_noise(const std::vector<Eigen::MatrixXd>& d) {
    return global_noise_scalar(noise_variance_common(packed(d)));
}

Eigen::MatrixXd py_total_variance(const std::vector<std::vector<Eigen::MatrixXd>>& sessions) {
    std::vector<std::vector<SymMatrix>> s;
    for (const auto& sess : sessions) s.push_back(packed(sess));
    return total_variance(s).to_dense();
}

py::tuple py_signal_variance(const Eigen::MatrixXd& total, const Eigen::MatrixXd& noise) {
    const SignalVarianceField f =
        signal_variance(SymMatrix::from_dense(total, 0.0), SymMatrix::from_dense(noise, 0.0));
    return py::make_tuple(f.values.to_dense(), f.clamped_count);
}

Eigen::MatrixXd py_shrinkage_parameter(const Eigen::MatrixXd& noise, const Eigen::MatrixXd& signal) {
    NoiseVarianceField n;
    n.values = SymMatrix::from_dense(noise, 0.0);
    SignalVarianceField s;
    s.values = SymMatrix::from_dense(signal, 0.0);
    return shrinkage_parameter(n, s).values.to_dense();
}

Eigen::MatrixXd py_build_affinity(const Eigen::MatrixXd& corr) {
    return build_affinity(corr_from_dense(corr)).to_dense();
}

std::vector<int> py_spectral_cluster(const Eigen::MatrixXd& affinity, int k, std::uint64_t seed,
                                     int n_init) {
    return spectral_cluster(SymMatrix::from_dense(affinity, 0.0), k, seed, n_init).labels;
}

Parcellation parcellation_of(const std::vector<int>& labels) {
    Parcellation p;
    p.labels = labels;
    p.k = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
    return p;
}

double py_dice(const std::vector<int>& a, const std::vector<int>& b) {
    return dice(parcellation_of(a), parcellation_of(b));
}

double py_dice_restricted(const std::vector<int>& a, const std::vector<int>& b,
                          const std::vector<int>& subset) {
    return dice_restricted(parcellation_of(a), parcellation_of(b), subset);
}

double py_matrix_mse(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return matrix_mse(SymMatrix::from_dense(a, 0.0), SymMatrix::from_dense(b, 0.0));
}

py::dict py_verify_appendix(int subjects, long long replicates, const std::vector<double>& sds,
                            std::uint64_t seed) {
    const AppendixReport r = verify_expectation_identity(subjects, replicates, sds, seed);
    py::dict d;
    d["subjects"] = r.subjects;
    d["replicates"] = r.replicates;
    d["analytic_value"] = r.analytic_value;
    d["mean_common"] = r.mean_common;
    d["mean_individual"] = r.mean_individual;
    d["z_common"] = r.z_common;
    d["z_individual"] = r.z_individual;
    d["z_paired"] = r.z_paired;
    return d;
}

py::list py_simulate(int subjects, int timepoints, double rho, double sigma2x, int iterations,
                     std::uint64_t seed, int threads) {
    SimulationDesign design;
    design.subjects = subjects;
    design.timepoints = timepoints;
    design.rho = rho;
    design.sigma2_x = sigma2x;
    design.iterations = iterations;
    design.seed = seed;
    design.threads = threads;
    const SimulationOutput out = run_analysis_s1(design);
    py::list rows;
    for (const auto& r : out.rows) {
        py::dict d;
        d["iteration"] = r.iteration;
        d["subject"] = r.subject;
        d["method"] = r.method;
        d["mode"] = r.mode;
        d["mse"] = r.mse;
        d["dice_full"] = r.dice_full;
        d["dice_same"] = r.dice_same;
        d["dice_diff"] = r.dice_diff;
        d["mean_lambda"] = r.mean_lambda;
        rows.append(d);
    }
    return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Shrinkage estimation of pairwise connectivity and spectral parcellation";

    py::register_exception<Error>(m, "ShrinkparcError");

    m.def("compute_correlation", &py_compute_correlation, py::arg("timeseries"),
          "Pearson correlation matrix of a T-by-V time series");
    m.def("fisher_transform", &py_fisher, py::arg("correlation"));
    m.def("inverse_fisher", &py_inverse_fisher, py::arg("z"));
    m.def("group_mean", &py_group_mean, py::arg("matrices"));
    m.def("apply_shrinkage", &py_apply_shrinkage, py::arg("raw"), py::arg("mean"),
          py::arg("lambda_field"));

    m.def("noise_variance_common", &py_noise_common, py::arg("differences"));
    m.def("noise_variance_individual", &py_noise_individual, py::arg("difference"));
    m.def("scaling_factors", &py_scaling_factor, py::arg("differences"));
    m.def("global_noise_variance", &py_global_noise, py::arg("differences"));
    m.def("total_variance", &py_total_variance, py::arg("sessions"));
    m.def("signal_variance", &py_signal_variance, py::arg("total"), py::arg("noise"),
          "Returns (field, clamped_count)");
    m.def("shrinkage_parameter", &py_shrinkage_parameter, py::arg("noise"), py::arg("signal"));

    m.def("build_affinity", &py_build_affinity, py::arg("correlation"));
    m.def("spectral_cluster", &py_spectral_cluster, py::arg("affinity"), py::arg("k"),
          py::arg("seed") = 0, py::arg("n_init") = 10);

    m.def("dice", &py_dice, py::arg("labels_a"), py::arg("labels_b"));
    m.def("dice_restricted", &py_dice_restricted, py::arg("labels_a"), py::arg("labels_b"),
          py::arg("voxel_subset"));
    m.def("matrix_mse", &py_matrix_mse, py::arg("estimate"), py::arg("truth"));

    m.def("generate_group_parcellation", [] { return generate_group_parcellation().labels; });

    m.def("verify_appendix", &py_verify_appendix, py::arg("subjects") = 20,
          py::arg("replicates") = 100000, py::arg("noise_sds"), py::arg("seed") = 0);

    m.def("simulate", &py_simulate, py::arg("subjects") = 20, py::arg("timepoints") = 200,
          py::arg("rho") = 0.05, py::arg("sigma2x") = 0.02, py::arg("iterations") = 10,
          py::arg("seed") = 0, py::arg("threads") = 0,
          "Default-design reliability study; returns per-subject result rows");
}
