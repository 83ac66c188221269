#include "shrinkparc/connectivity.hpp"

#include <algorithm>
#include <cmath>

namespace shrinkparc {

namespace {

double clamp_correlation(double r, int& clamped) {
    const double limit = 1.0 - kCorrelationClamp;
    if (r > limit) { ++clamped; return limit; }
    if (r < -limit) { ++clamped; return -limit; }
    return r;
}

}  // namespace

ConnectivityMatrix compute_correlation(const TimeSeriesMatrix& ts) {
    ts.validate();
    const int t = ts.n_timepoints();
    const int v = ts.n_voxels();

    Eigen::MatrixXd centered = ts.values;
    const Eigen::RowVectorXd means = centered.colwise().mean();
    centered.rowwise() -= means;

    Eigen::VectorXd norms(v);
    for (int j = 0; j < v; ++j) {
        norms(j) = centered.col(j).norm();
        if (norms(j) <= 0.0) throw ZeroVarianceVoxel(j);
        centered.col(j) /= norms(j);
    }
    (void)t;

    const Eigen::MatrixXd r = centered.transpose() * centered;

    ConnectivityMatrix out;
    out.space = Space::Correlation;
    out.subject_id = ts.subject_id;
    out.session_id = ts.session_id;
    out.values = SymMatrix(v, 1.0);
    int clamped = 0;
    auto& tri = out.values.tri();
    std::int64_t idx = 0;
    for (int a = 0; a < v; ++a)
        for (int b = a + 1; b < v; ++b)
            tri[idx++] = clamp_correlation(r(a, b), clamped);
    out.clamped_pairs = clamped;
    return out;
}

double fisher_z(double r) {
    return 0.5 * std::log((1.0 + r) / (1.0 - r));
}

double inverse_fisher_z(double z) {
    const double limit = 1.0 - kCorrelationClamp;
    const double r = std::tanh(z);
    return std::clamp(r, -limit, limit);
}

ConnectivityMatrix fisher_transform(const ConnectivityMatrix& c) {
    if (c.space != Space::Correlation)
        throw MixedSpace("fisher_transform: input must be in correlation space");
    ConnectivityMatrix out;
    out.space = Space::FisherZ;
    out.subject_id = c.subject_id;
    out.session_id = c.session_id;
    out.values = SymMatrix(c.n_voxels(), 0.0);
    int clamped = c.clamped_pairs;
    const auto& in = c.values.tri();
    auto& tri = out.values.tri();
    for (std::size_t i = 0; i < in.size(); ++i) {
        double r = in[i];
        if (!(std::abs(r) <= 1.0))
            throw OutOfRange("fisher_transform: |r| > 1 at a voxel pair");
        r = clamp_correlation(r, clamped);
        tri[i] = fisher_z(r);
    }
    out.clamped_pairs = clamped;
    return out;
}

ConnectivityMatrix inverse_fisher(const ConnectivityMatrix& z) {
    if (z.space != Space::FisherZ)
        throw MixedSpace("inverse_fisher: input must be in Fisher-z space");
    ConnectivityMatrix out;
    out.space = Space::Correlation;
    out.subject_id = z.subject_id;
    out.session_id = z.session_id;
    out.values = SymMatrix(z.n_voxels(), 1.0);
    const auto& in = z.values.tri();
    auto& tri = out.values.tri();
    for (std::size_t i = 0; i < in.size(); ++i) tri[i] = inverse_fisher_z(in[i]);
    out.clamped_pairs = z.clamped_pairs;
    return out;
}

SymMatrix mean_values(const std::vector<SymMatrix>& ms) {
    if (ms.empty()) throw EmptyInput("mean_values: no matrices");
    SymMatrix out = ms.front();
    auto& tri = out.tri();
    std::vector<double> acc(tri.size(), 0.0);
    // Summation order is fixed as subject-index order.
    for (const auto& m : ms) {
        require_same_shape(ms.front(), m, "mean_values");
        const auto& in = m.tri();
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += in[i] - tri[i];
    }
    const double inv = 1.0 / static_cast<double>(ms.size());
    for (std::size_t i = 0; i < acc.size(); ++i) tri[i] += acc[i] * inv;
    return out;
}

GroupMeanMatrix group_mean(const std::vector<ConnectivityMatrix>& cs) {
    if (cs.size() < 2) throw TooFewSubjects("group_mean: need at least 2 matrices");
    const int v = cs.front().n_voxels();
    const Space space = cs.front().space;
    std::vector<SymMatrix> values;
    values.reserve(cs.size());
    for (const auto& c : cs) {
        if (c.n_voxels() != v) throw DimensionMismatch("group_mean: voxel counts differ");
        if (c.space != space) throw MixedSpace("group_mean: inputs mix spaces");
        values.push_back(c.values);
    }
    GroupMeanMatrix out;
    out.space = space;
    out.session_id = cs.front().session_id;
    out.n_subjects = static_cast<int>(cs.size());
    out.values = mean_values(values);
    out.values.set_diag(space == Space::Correlation ? 1.0 : 0.0);
    return out;
}

ConnectivityMatrix apply_shrinkage(const ConnectivityMatrix& raw, const GroupMeanMatrix& mean,
                                   const ShrinkageField& lambda) {
    require_same_shape(raw.values, mean.values, "apply_shrinkage");
    require_same_shape(raw.values, lambda.values, "apply_shrinkage");
    if (raw.space != mean.space) throw MixedSpace("apply_shrinkage: raw and mean spaces differ");

    ConnectivityMatrix out;
    out.space = raw.space;
    out.subject_id = raw.subject_id;
    out.session_id = raw.session_id;
    out.values = SymMatrix(raw.n_voxels(), raw.values.diag());
    const auto& r = raw.values.tri();
    const auto& m = mean.values.tri();
    const auto& l = lambda.values.tri();
    auto& o = out.values.tri();
    for (std::size_t i = 0; i < o.size(); ++i) {
        const double w = l[i];
        if (!(w >= 0.0 && w <= 1.0))
            throw LambdaOutOfRange("apply_shrinkage: lambda outside [0,1]");
        if (w == 0.0) { o[i] = r[i]; continue; }
        if (w == 1.0) { o[i] = m[i]; continue; }
        const double lo = std::min(r[i], m[i]);
        const double hi = std::max(r[i], m[i]);
        o[i] = std::clamp(r[i] + w * (m[i] - r[i]), lo, hi);
    }
    return out;
}

TimeSeriesMatrix demean_voxels(const TimeSeriesMatrix& ts) {
    TimeSeriesMatrix out = ts;
    const Eigen::RowVectorXd means = out.values.colwise().mean();
    out.values.rowwise() -= means;
    return out;
}

std::pair<TimeSeriesMatrix, TimeSeriesMatrix> split_pseudo_sessions(const TimeSeriesMatrix& ts) {
    const int half = ts.n_timepoints() / 2;
    if (half < 4)
        throw InsufficientLength("split_pseudo_sessions: halves would have fewer than 4 timepoints");
    TimeSeriesMatrix a;
    a.values = ts.values.topRows(half);
    a.subject_id = ts.subject_id;
    a.session_id = ts.session_id + ".h1";
    TimeSeriesMatrix b;
    b.values = ts.values.middleRows(half, half);
    b.subject_id = ts.subject_id;
    b.session_id = ts.session_id + ".h2";
    return {demean_voxels(a), demean_voxels(b)};
}

}  // namespace shrinkparc
