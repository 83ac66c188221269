#include "shrinkparc/appendix.hpp"

#include <cmath>

#include "shrinkparc/errors.hpp"
#include "shrinkparc/io.hpp"
#include "shrinkparc/parallel.hpp"
#include "shrinkparc/rng.hpp"

namespace shrinkparc {

std::string AppendixReport::to_text() const {
    std::string out;
    out += "subjects=" + std::to_string(subjects) + '\n';
    out += "replicates=" + std::to_string(replicates) + '\n';
    out += "analytic_value=" + io::fmt_g17(analytic_value) + '\n';
    out += "mean_common=" + io::fmt_g17(mean_common) + '\n';
    out += "mean_individual=" + io::fmt_g17(mean_individual) + '\n';
    out += "se_common=" + io::fmt_g17(se_common) + '\n';
    out += "se_individual=" + io::fmt_g17(se_individual) + '\n';
    out += "z_common=" + io::fmt_g17(z_common) + '\n';
    out += "z_individual=" + io::fmt_g17(z_individual) + '\n';
    out += "z_paired=" + io::fmt_g17(z_paired) + '\n';
    return out;
}

namespace {

struct Sums {
    double c = 0, c2 = 0;    // common estimator
    double m = 0, m2 = 0;    // mean-individual estimator
    double d = 0, d2 = 0;    // paired difference
};

}  // namespace

AppendixReport verify_expectation_identity(int subjects, long long replicates,
                                           const std::vector<double>& noise_sds,
                                           std::uint64_t seed, int threads) {
    if (subjects < 2) throw TooFewSubjects("verify_expectation_identity: need >= 2 subjects");
    if (replicates < 1000)
        throw InvalidInput("verify_expectation_identity: need >= 1000 replicates");
    if (static_cast<int>(noise_sds.size()) != subjects)
        throw DimensionMismatch("verify_expectation_identity: one noise sd per subject required");
    for (double s : noise_sds)
        if (!(s > 0.0)) throw InvalidInput("verify_expectation_identity: noise sds must be positive");

    AppendixReport report;
    report.subjects = subjects;
    report.replicates = replicates;
    double analytic = 0.0;
    for (double s : noise_sds) analytic += s * s;
    analytic /= static_cast<double>(subjects);
    report.analytic_value = analytic;

    // Replicates are chunked; each chunk owns a derived stream and an
    // output slot, merged in chunk order.
    const long long chunk = 4096;
    const int n_chunks = static_cast<int>((replicates + chunk - 1) / chunk);
    std::vector<Sums> partial(n_chunks);

    parallel_for(n_chunks, threads, [&](int ci) {
        rng::Rng r(rng::substream(seed, "appendix-chunk", static_cast<std::uint64_t>(ci)));
        const long long begin = static_cast<long long>(ci) * chunk;
        const long long end = std::min(replicates, begin + chunk);
        Sums s;
        std::vector<double> d(subjects);
        for (long long rep = begin; rep < end; ++rep) {
            double dbar = 0.0;
            double mean_indiv = 0.0;
            for (int i = 0; i < subjects; ++i) {
                const double u1 = noise_sds[i] * r.normal();
                const double u2 = noise_sds[i] * r.normal();
                d[i] = u2 - u1;
                dbar += d[i];
                mean_indiv += 0.5 * d[i] * d[i];
            }
            dbar /= subjects;
            mean_indiv /= subjects;
            double common = 0.0;
            for (int i = 0; i < subjects; ++i) {
                const double e = d[i] - dbar;
                common += e * e;
            }
            common /= 2.0 * (subjects - 1);
            const double diff = common - mean_indiv;
            s.c += common;
            s.c2 += common * common;
            s.m += mean_indiv;
            s.m2 += mean_indiv * mean_indiv;
            s.d += diff;
            s.d2 += diff * diff;
        }
        partial[ci] = s;
    });

    Sums total;
    for (const auto& s : partial) {
        total.c += s.c; total.c2 += s.c2;
        total.m += s.m; total.m2 += s.m2;
        total.d += s.d; total.d2 += s.d2;
    }

    const double n = static_cast<double>(replicates);
    auto finish = [&](double sum, double sumsq, double& mean, double& se) {
        mean = sum / n;
        const double var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0));
        se = std::sqrt(var / n);
    };
    double se_d, mean_d;
    finish(total.c, total.c2, report.mean_common, report.se_common);
    finish(total.m, total.m2, report.mean_individual, report.se_individual);
    finish(total.d, total.d2, mean_d, se_d);
    report.z_common = (report.mean_common - analytic) / report.se_common;
    report.z_individual = (report.mean_individual - analytic) / report.se_individual;
    report.z_paired = se_d > 0.0 ? mean_d / se_d : 0.0;
    return report;
}

}  // namespace shrinkparc
