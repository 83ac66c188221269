#include "shrinkparc/engine.hpp"

#include "shrinkparc/connectivity.hpp"
#include "shrinkparc/rng.hpp"

namespace shrinkparc {

namespace {

SymMatrix to_working_space(const SymMatrix& corr, Space space) {
    if (space == Space::Correlation) return corr;
    ConnectivityMatrix c;
    c.values = corr;
    c.space = Space::Correlation;
    return fisher_transform(c).values;
}

SymMatrix to_correlation_space(const SymMatrix& work, Space space) {
    if (space == Space::Correlation) return work;
    ConnectivityMatrix z;
    z.values = work;
    z.space = Space::FisherZ;
    return inverse_fisher(z).values;
}

SymMatrix shrink_one(const SymMatrix& raw, const SymMatrix& mean, const SymMatrix& lambda) {
    ConnectivityMatrix r;
    r.values = raw;
    r.space = Space::Correlation;  // space tag is irrelevant to the arithmetic
    GroupMeanMatrix m;
    m.values = mean;
    m.space = Space::Correlation;
    ShrinkageField l;
    l.values = lambda;
    return apply_shrinkage(r, m, l).values;
}

}  // namespace

EngineResult shrink_all_methods(const EngineInput& input, const std::vector<NoiseMethod>& methods,
                                const EngineOptions& options) {
    const std::size_t n_subjects = input.raw.size();
    if (n_subjects < 2) throw TooFewSubjects("shrink_all_methods: need at least 2 subjects");
    if (input.source1.size() != n_subjects || input.source2.size() != n_subjects)
        throw UnpairedSubject("shrink_all_methods: source pair does not cover every subject");

    // Working-space copies.
    std::vector<SymMatrix> w_raw, w_src1, w_src2;
    w_raw.reserve(n_subjects);
    w_src1.reserve(n_subjects);
    w_src2.reserve(n_subjects);
    for (std::size_t i = 0; i < n_subjects; ++i) {
        w_raw.push_back(to_working_space(input.raw[i], options.space));
        w_src1.push_back(to_working_space(input.source1[i], options.space));
        w_src2.push_back(to_working_space(input.source2[i], options.space));
    }

    // Session differences and the estimators built from them.
    std::vector<SymMatrix> d;
    d.reserve(n_subjects);
    for (std::size_t i = 0; i < n_subjects; ++i) {
        SymMatrix di(w_src1[i].size(), 0.0);
        auto& out = di.tri();
        const auto& a = w_src1[i].tri();
        const auto& b = w_src2[i].tri();
        for (std::size_t p = 0; p < out.size(); ++p) out[p] = b[p] - a[p];
        d.push_back(std::move(di));
    }

    const NoiseVarianceField common = noise_variance_common(d);
    ScalingFactors gamma;
    for (NoiseMethod m : methods)
        if (m == NoiseMethod::Scaled && gamma.gamma.empty()) gamma = scaling_factor(d);

    double global_scalar = global_noise_scalar(common);
    if (input.mode == DataMode::SingleSession) {
        switch (options.global_adjust) {
            case PseudoGlobalAdjust::AnalyticTheta:
                global_scalar *= analytic_theta(input.timepoints_raw, input.timepoints_source,
                                                options.space);
                break;
            case PseudoGlobalAdjust::ThetaModelFit:
                global_scalar =
                    adjust_global_for_split(global_scalar, options.theta, options.scan_minutes);
                break;
            case PseudoGlobalAdjust::SecondSession: {
                if (!input.full_session2)
                    throw InvalidInput("shrink_all_methods: second-session global adjustment "
                                       "requires full second sessions");
                std::vector<SymMatrix> d2;
                d2.reserve(n_subjects);
                for (std::size_t i = 0; i < n_subjects; ++i) {
                    SymMatrix w2 = to_working_space((*input.full_session2)[i], options.space);
                    SymMatrix di(w2.size(), 0.0);
                    auto& out = di.tri();
                    const auto& a = w_raw[i].tri();
                    const auto& b = w2.tri();
                    for (std::size_t p = 0; p < out.size(); ++p) out[p] = b[p] - a[p];
                    d2.push_back(std::move(di));
                }
                global_scalar = global_noise_scalar(noise_variance_common(d2));
                break;
            }
            case PseudoGlobalAdjust::None:
                break;
        }
    }
    NoiseVarianceField global_field;
    global_field.method = NoiseMethod::Global;
    global_field.values = SymMatrix(common.values.size(), 0.0, global_scalar);

    // Total variance: in test-retest mode both replicates are genuine
    // sessions; in single-session mode the only full-length session is the
    // one behind the raw estimates.
    SymMatrix total = input.mode == DataMode::TestRetest
                          ? total_variance({w_src1, w_src2})
                          : total_variance({w_raw});

    const SignalVarianceField signal_common = signal_variance(total, common.values);
    const SignalVarianceField signal_global = signal_variance(total, global_field.values);

    auto signal_for = [&](NoiseMethod m) -> const SignalVarianceField& {
        switch (options.signal_source) {
            case SignalNoiseSource::Common: return signal_common;
            case SignalNoiseSource::Global: return signal_global;
            case SignalNoiseSource::MatchMethod:
                return m == NoiseMethod::Global ? signal_global : signal_common;
        }
        return signal_common;
    };

    EngineResult result;
    result.group_mean_raw = mean_values(w_raw);

    for (NoiseMethod method : methods) {
        MethodShrinkage ms;
        ms.method = method;
        const SignalVarianceField& signal = signal_for(method);
        ms.signal_clamped = signal.clamped_count;
        ms.subjects.reserve(n_subjects);

        ShrinkageField shared_lambda;  // common/global fields do not vary by subject
        if (method == NoiseMethod::Common) shared_lambda = shrinkage_parameter(common, signal);
        if (method == NoiseMethod::Global) shared_lambda = shrinkage_parameter(global_field, signal);

        for (std::size_t i = 0; i < n_subjects; ++i) {
            SubjectShrinkage subj;
            switch (method) {
                case NoiseMethod::Common:
                case NoiseMethod::Global:
                    subj.lambda = shared_lambda.values;
                    break;
                case NoiseMethod::Individual:
                    subj.lambda = shrinkage_parameter(noise_variance_individual(d[i]), signal).values;
                    break;
                case NoiseMethod::Scaled:
                    subj.lambda =
                        shrinkage_parameter(noise_variance_scaled(common, gamma.gamma[i]), signal)
                            .values;
                    break;
            }
            const SymMatrix shrunk_work = shrink_one(w_raw[i], result.group_mean_raw, subj.lambda);
            subj.shrunk_corr = to_correlation_space(shrunk_work, options.space);
            subj.mean_lambda = subj.lambda.tri_mean();
            ms.subjects.push_back(std::move(subj));
        }
        result.methods.push_back(std::move(ms));
    }
    return result;
}

std::uint64_t cluster_seed(std::uint64_t base, int subject, int arm) {
    return rng::substream(base, "cluster",
                          (static_cast<std::uint64_t>(subject) << 8) |
                              static_cast<std::uint64_t>(arm & 0xFF));
}

int shrunk_arm_index(DataMode mode, NoiseMethod method) {
    const int mode_index = mode == DataMode::SingleSession ? 0 : 1;
    return 1 + mode_index * 4 + static_cast<int>(method);
}

}  // namespace shrinkparc
