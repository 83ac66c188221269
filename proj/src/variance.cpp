#include "shrinkparc/variance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "shrinkparc/connectivity.hpp"
#include "shrinkparc/rng.hpp"

namespace shrinkparc {

double ThetaModel::predict(double t_minutes) const {
    return beta0 + beta1 * std::log(t_minutes);
}

ThetaModel default_theta_model() {
    ThetaModel m;
    m.beta0 = 0.590;
    m.beta1 = 0.129;
    m.se_beta0 = 0.00732;
    m.se_beta1 = 0.00493;
    return m;
}

std::vector<SymMatrix> difference_matrices(const std::vector<ConnectivityMatrix>& session1,
                                           const std::vector<ConnectivityMatrix>& session2) {
    if (session1.size() != session2.size())
        throw UnpairedSubject("difference_matrices: session lists have different subject counts");
    if (session1.empty()) throw EmptyInput("difference_matrices: no subjects");
    std::vector<SymMatrix> d;
    d.reserve(session1.size());
    for (std::size_t i = 0; i < session1.size(); ++i) {
        const auto& a = session1[i];
        const auto& b = session2[i];
        if (!a.subject_id.empty() && !b.subject_id.empty() && a.subject_id != b.subject_id)
            throw UnpairedSubject("difference_matrices: subject '" + a.subject_id +
                                  "' paired with '" + b.subject_id + "'");
        require_same_shape(a.values, b.values, "difference_matrices");
        if (a.space != b.space) throw MixedSpace("difference_matrices: sessions mix spaces");
        SymMatrix di(a.n_voxels(), 0.0);
        auto& out = di.tri();
        const auto& t1 = a.values.tri();
        const auto& t2 = b.values.tri();
        for (std::size_t p = 0; p < out.size(); ++p) out[p] = t2[p] - t1[p];
        d.push_back(std::move(di));
    }
    return d;
}

NoiseVarianceField noise_variance_common(const std::vector<SymMatrix>& d) {
    const auto n = d.size();
    if (n < 2) throw TooFewSubjects("noise_variance_common: need at least 2 subjects");
    const int v = d.front().size();
    for (const auto& m : d) require_same_shape(d.front(), m, "noise_variance_common");

    NoiseVarianceField out;
    out.method = NoiseMethod::Common;
    out.values = SymMatrix(v, 0.0);
    auto& tri = out.values.tri();
    // first + mean(offsets); identical inputs yield exactly zero residuals
    std::vector<double> mean = d.front().tri();
    {
        std::vector<double> acc(mean.size(), 0.0);
        for (const auto& m : d) {
            const auto& t = m.tri();
            for (std::size_t p = 0; p < acc.size(); ++p) acc[p] += t[p] - mean[p];
        }
        const double inv_n = 1.0 / static_cast<double>(n);
        for (std::size_t p = 0; p < mean.size(); ++p) mean[p] += acc[p] * inv_n;
    }
    for (const auto& m : d) {
        const auto& t = m.tri();
        for (std::size_t p = 0; p < tri.size(); ++p) {
            const double r = t[p] - mean[p];
            tri[p] += r * r;
        }
    }
    const double denom = 2.0 * static_cast<double>(n - 1);
    for (auto& x : tri) x /= denom;
    return out;
}

NoiseVarianceField noise_variance_individual(const SymMatrix& d_i, const std::string& subject_id) {
    NoiseVarianceField out;
    out.method = NoiseMethod::Individual;
    out.subject_id = subject_id;
    out.values = SymMatrix(d_i.size(), 0.0);
    const auto& in = d_i.tri();
    auto& tri = out.values.tri();
    for (std::size_t p = 0; p < tri.size(); ++p) tri[p] = 0.5 * in[p] * in[p];
    return out;
}

ScalingFactors scaling_factor(const std::vector<SymMatrix>& d) {
    if (d.size() < 2) throw TooFewSubjects("scaling_factor: need at least 2 subjects");
    if (d.front().size() < 2) throw InvalidInput("scaling_factor: need at least 2 voxels");
    ScalingFactors out;
    out.gamma.reserve(d.size());
    double grand = 0.0;
    for (const auto& m : d) {
        const auto& t = m.tri();
        double s = 0.0;
        for (double x : t) s += x * x;
        const double msd = s / static_cast<double>(t.size());
        out.gamma.push_back(msd);
        grand += msd;
    }
    grand /= static_cast<double>(d.size());
    if (grand <= 0.0)
        throw AllZeroDifferences("scaling_factor: all session differences are zero");
    for (auto& g : out.gamma) g /= grand;
    return out;
}

NoiseVarianceField noise_variance_scaled(const NoiseVarianceField& common, double gamma_i,
                                         const std::string& subject_id) {
    if (common.method != NoiseMethod::Common)
        throw InvalidInput("noise_variance_scaled: input field is not the common estimator");
    if (!(gamma_i > 0.0)) throw InvalidInput("noise_variance_scaled: gamma must be positive");
    NoiseVarianceField out;
    out.method = NoiseMethod::Scaled;
    out.subject_id = subject_id;
    out.values = common.values;
    for (auto& x : out.values.tri()) x *= gamma_i;
    return out;
}

double global_noise_scalar(const NoiseVarianceField& common) {
    return common.values.tri_mean();
}

NoiseVarianceField noise_variance_global(const NoiseVarianceField& common) {
    NoiseVarianceField out;
    out.method = NoiseMethod::Global;
    const double g = global_noise_scalar(common);
    out.values = SymMatrix(common.values.size(), 0.0, g);
    return out;
}

double adjust_global_for_split(double global_half, const ThetaModel& theta, double t_minutes) {
    if (global_half < 0.0) throw InvalidInput("adjust_global_for_split: negative variance");
    const double th = theta.predict(t_minutes);
    if (!(th > 0.0))
        throw NonpositiveTheta("adjust_global_for_split: predicted theta <= 0 at t = " +
                               std::to_string(t_minutes));
    return th * global_half;
}

double analytic_theta(int t_full, int t_half, Space space) {
    const double off = space == Space::FisherZ ? 3.0 : 1.0;
    if (t_half <= off || t_full <= off)
        throw InsufficientLength("analytic_theta: scan lengths too short");
    return (static_cast<double>(t_half) - off) / (static_cast<double>(t_full) - off);
}

SymMatrix total_variance(const std::vector<std::vector<SymMatrix>>& sessions) {
    if (sessions.empty()) throw EmptyInput("total_variance: no sessions");
    const int v = sessions.front().front().size();
    SymMatrix out(v, 0.0);
    auto& tri = out.tri();
    for (const auto& subjects : sessions) {
        if (subjects.size() < 2)
            throw TooFewSubjects("total_variance: a session has fewer than 2 subjects");
        std::vector<double> mean = subjects.front().tri();
        {
            std::vector<double> acc(mean.size(), 0.0);
            for (const auto& m : subjects) {
                require_same_shape(sessions.front().front(), m, "total_variance");
                const auto& t = m.tri();
                for (std::size_t p = 0; p < acc.size(); ++p) acc[p] += t[p] - mean[p];
            }
            const double inv_n = 1.0 / static_cast<double>(subjects.size());
            for (std::size_t p = 0; p < mean.size(); ++p) mean[p] += acc[p] * inv_n;
        }
        const double denom = static_cast<double>(subjects.size() - 1);
        for (const auto& m : subjects) {
            const auto& t = m.tri();
            for (std::size_t p = 0; p < tri.size(); ++p) {
                const double r = t[p] - mean[p];
                tri[p] += r * r / denom;
            }
        }
    }
    const double inv_j = 1.0 / static_cast<double>(sessions.size());
    for (auto& x : tri) x *= inv_j;
    return out;
}

SignalVarianceField signal_variance(const SymMatrix& total, const SymMatrix& noise) {
    require_same_shape(total, noise, "signal_variance");
    SignalVarianceField out;
    out.values = SymMatrix(total.size(), 0.0);
    auto& tri = out.values.tri();
    const auto& t = total.tri();
    const auto& n = noise.tri();
    long clamped = 0;
    for (std::size_t p = 0; p < tri.size(); ++p) {
        const double s = t[p] - n[p];
        if (s < 0.0) {
            tri[p] = 0.0;
            ++clamped;
        } else {
            tri[p] = s;
        }
    }
    out.clamped_count = clamped;
    return out;
}

ShrinkageField shrinkage_parameter(const NoiseVarianceField& noise, const SignalVarianceField& signal) {
    require_same_shape(noise.values, signal.values, "shrinkage_parameter");
    ShrinkageField out;
    out.subject_id = noise.subject_id;
    out.values = SymMatrix(noise.values.size(), 0.0);
    auto& tri = out.values.tri();
    const auto& n = noise.values.tri();
    const auto& s = signal.values.tri();
    for (std::size_t p = 0; p < tri.size(); ++p) {
        const double denom = s[p] + n[p];
        // Zero signal variance means the group mean equals the subject value;
        // lambda = 1 is the continuous limit.
        tri[p] = denom == 0.0 ? 1.0 : std::clamp(n[p] / denom, 0.0, 1.0);
    }
    return out;
}

namespace {

struct WindowDataset {
    // One resampled dataset: per subject, two session windows of equal length.
    std::vector<SymMatrix> w1;
    std::vector<SymMatrix> w2;
};

double global_noise_of(const std::vector<SymMatrix>& w1, const std::vector<SymMatrix>& w2) {
    std::vector<SymMatrix> d;
    d.reserve(w1.size());
    for (std::size_t i = 0; i < w1.size(); ++i) {
        SymMatrix di(w1[i].size(), 0.0);
        auto& out = di.tri();
        const auto& a = w1[i].tri();
        const auto& b = w2[i].tri();
        for (std::size_t p = 0; p < out.size(); ++p) out[p] = b[p] - a[p];
        d.push_back(std::move(di));
    }
    return global_noise_scalar(noise_variance_common(d));
}

SymMatrix window_matrix(const TimeSeriesMatrix& ts, int start, int len, Space space) {
    TimeSeriesMatrix w;
    w.values = ts.values.middleRows(start, len);
    w.subject_id = ts.subject_id;
    w.session_id = ts.session_id;
    ConnectivityMatrix c = compute_correlation(demean_voxels(w));
    if (space == Space::FisherZ) c = fisher_transform(c);
    return c.values;
}

}  // namespace

ThetaModel fit_theta_model(const std::vector<SubjectSessions>& data, const ThetaFitOptions& opts) {
    if (data.empty()) throw EmptyInput("fit_theta_model: no subjects");
    if (opts.lengths_minutes.size() < 2)
        throw InsufficientLength("fit_theta_model: need at least 2 scan lengths to fit a line");
    if (opts.resamples < 1) throw InvalidInput("fit_theta_model: resamples must be >= 1");
    for (const auto& subj : data) {
        if (subj.sessions.size() < 2)
            throw UnpairedSubject("fit_theta_model: subject '" + subj.subject_id +
                                  "' has fewer than 2 sessions");
    }

    // sigma2 is needed at every requested length and at every half length.
    std::set<double> length_set;
    for (double t : opts.lengths_minutes) {
        if (!(t > 0)) throw InvalidInput("fit_theta_model: nonpositive scan length");
        length_set.insert(t);
        length_set.insert(t / 2.0);
    }

    std::map<double, double> sigma2;  // minutes -> mean global noise variance
    for (double t : length_set) {
        const int len = static_cast<int>(std::llround(t * opts.timepoints_per_minute));
        if (len < 4)
            throw InsufficientLength("fit_theta_model: windows at t = " + std::to_string(t) +
                                     " min have fewer than 4 timepoints");
        for (const auto& subj : data)
            for (const auto& sess : subj.sessions)
                if (sess.n_timepoints() < len)
                    throw InsufficientLength("fit_theta_model: session too short for t = " +
                                             std::to_string(t) + " min");

        // Window starts are drawn per (subject, session, length); one stream
        // each so the estimate is independent of evaluation order.
        std::vector<std::vector<std::vector<int>>> starts(data.size());
        int length_index = static_cast<int>(std::distance(length_set.begin(), length_set.find(t)));
        for (std::size_t i = 0; i < data.size(); ++i) {
            starts[i].resize(data[i].sessions.size());
            for (std::size_t j = 0; j < data[i].sessions.size(); ++j) {
                rng::Rng r(rng::substream(opts.seed, "theta-window",
                                          (static_cast<std::uint64_t>(length_index) << 32) ^
                                              (static_cast<std::uint64_t>(i) << 8) ^ j));
                const int span = data[i].sessions[j].n_timepoints() - len + 1;
                for (int k = 0; k < opts.resamples; ++k)
                    starts[i][j].push_back(static_cast<int>(r.uniform_index(span)));
            }
        }

        double acc = 0.0;
        for (int k = 0; k < opts.resamples; ++k) {
            WindowDataset ds;
            for (std::size_t i = 0; i < data.size(); ++i) {
                ds.w1.push_back(window_matrix(data[i].sessions[0], starts[i][0][k], len, opts.space));
                ds.w2.push_back(window_matrix(data[i].sessions[1], starts[i][1][k], len, opts.space));
            }
            acc += global_noise_of(ds.w1, ds.w2);
        }
        sigma2[t] = acc / static_cast<double>(opts.resamples);
    }

    ThetaModel model;
    for (double t : opts.lengths_minutes) {
        const double denom = sigma2.at(t / 2.0);
        if (denom <= 0.0)
            throw InsufficientLength("fit_theta_model: zero noise variance at t/2");
        model.fitted_points.emplace_back(t, sigma2.at(t) / denom);
    }

    // OLS of theta-hat on log(t).
    const auto n = model.fitted_points.size();
    double sx = 0, sy = 0;
    for (const auto& [t, th] : model.fitted_points) {
        sx += std::log(t);
        sy += th;
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (const auto& [t, th] : model.fitted_points) {
        const double dx = std::log(t) - mx;
        sxx += dx * dx;
        sxy += dx * (th - my);
    }
    if (sxx <= 0.0) throw InsufficientLength("fit_theta_model: degenerate length design");
    model.beta1 = sxy / sxx;
    model.beta0 = my - model.beta1 * mx;
    if (n > 2) {
        double rss = 0;
        for (const auto& [t, th] : model.fitted_points) {
            const double e = th - (model.beta0 + model.beta1 * std::log(t));
            rss += e * e;
        }
        const double s2 = rss / static_cast<double>(n - 2);
        model.se_beta1 = std::sqrt(s2 / sxx);
        model.se_beta0 = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
    }
    return model;
}

}  // namespace shrinkparc
