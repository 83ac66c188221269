#include "shrinkparc/pipeline.hpp"

#include <algorithm>

#include "shrinkparc/connectivity.hpp"
#include "shrinkparc/io.hpp"
#include "shrinkparc/metrics.hpp"
#include "shrinkparc/parallel.hpp"
#include "shrinkparc/spectral.hpp"

namespace shrinkparc {

namespace {

constexpr int kMinPartLength = 10;

SubjectLayout layout_three_part(const SubjectSessions& subj) {
    if (subj.sessions.size() < 2)
        throw UnpairedSubject("build_layout: subject '" + subj.subject_id +
                              "' needs two sessions for the three-part layout");
    const int t1 = subj.sessions[0].n_timepoints();
    const int t2 = subj.sessions[1].n_timepoints();
    if (t1 != t2)
        throw UnequalSessionLengths("build_layout: subject '" + subj.subject_id +
                                    "' has sessions of different lengths");
    const int part_len = (t1 + t2) / 3;
    if (part_len < kMinPartLength)
        throw TooShort("build_layout: parts for subject '" + subj.subject_id +
                       "' would have fewer than 10 timepoints");

    SubjectLayout out;
    out.subject_id = subj.subject_id;
    // Parts tile the concatenated timeline [0, 2*t1); the remainder falls
    // off the end. Part 2 straddles the session boundary and its two
    // segments are demeaned separately.
    const int b1 = part_len;
    const int b2 = 2 * part_len;
    const int b3 = 3 * part_len;
    auto segments_for = [&](int begin, int end, bool demean) {
        std::vector<PartSegment> segs;
        if (begin < t1) segs.push_back({0, begin, std::min(end, t1), demean});
        if (end > t1) segs.push_back({1, std::max(begin - t1, 0), end - t1, demean});
        return segs;
    };
    out.parts.push_back(segments_for(0, b1, true));
    out.parts.push_back(segments_for(b1, b2, true));
    out.parts.push_back(segments_for(b2, b3, true));
    out.test_part = 2;
    return out;
}

SubjectLayout layout_pseudo(const SubjectSessions& subj) {
    if (subj.sessions.empty())
        throw UnpairedSubject("build_layout: subject '" + subj.subject_id + "' has no sessions");
    const int t1 = subj.sessions[0].n_timepoints();
    const int half = t1 / 2;
    if (half < kMinPartLength)
        throw TooShort("build_layout: pseudo halves for subject '" + subj.subject_id +
                       "' would have fewer than 10 timepoints");
    SubjectLayout out;
    out.subject_id = subj.subject_id;
    out.parts.push_back({{0, 0, half, true}});
    out.parts.push_back({{0, half, 2 * half, true}});
    if (subj.sessions.size() > 1) {
        out.parts.push_back({{1, 0, subj.sessions[1].n_timepoints(), true}});
        out.test_part = 2;
    }
    return out;
}

}  // namespace

StudyLayout build_layout(const std::vector<SubjectSessions>& subjects, LayoutMode mode) {
    if (subjects.empty()) throw EmptyInput("build_layout: no subjects");
    StudyLayout layout;
    layout.mode = mode;
    for (const auto& subj : subjects)
        layout.subjects.push_back(mode == LayoutMode::TestRetest3Part ? layout_three_part(subj)
                                                                      : layout_pseudo(subj));
    return layout;
}

TimeSeriesMatrix extract_part(const SubjectSessions& subject, const std::vector<PartSegment>& part) {
    if (part.empty()) throw InvalidInput("extract_part: empty part");
    int total = 0;
    int voxels = -1;
    for (const auto& seg : part) {
        if (seg.session < 0 || seg.session >= static_cast<int>(subject.sessions.size()))
            throw InvalidInput("extract_part: segment references a missing session");
        const auto& ts = subject.sessions[seg.session];
        if (seg.t_begin < 0 || seg.t_end > ts.n_timepoints() || seg.t_begin >= seg.t_end)
            throw InvalidInput("extract_part: segment range out of bounds");
        if (voxels < 0) voxels = ts.n_voxels();
        if (ts.n_voxels() != voxels)
            throw DimensionMismatch("extract_part: sessions have different voxel counts");
        total += seg.t_end - seg.t_begin;
    }
    TimeSeriesMatrix out;
    out.subject_id = subject.subject_id;
    out.values.resize(total, voxels);
    int row = 0;
    for (const auto& seg : part) {
        const auto& ts = subject.sessions[seg.session];
        Eigen::MatrixXd block = ts.values.middleRows(seg.t_begin, seg.t_end - seg.t_begin);
        if (seg.demean) {
            const Eigen::RowVectorXd means = block.colwise().mean();
            block.rowwise() -= means;
        }
        out.values.middleRows(row, block.rows()) = block;
        row += static_cast<int>(block.rows());
    }
    return out;
}

namespace {

struct PreparedStudy {
    std::vector<std::string> subject_ids;
    EngineInput input;                    // correlation-space engine inputs
    std::vector<SymMatrix> test_corr;     // test-set raw estimates
};

PreparedStudy prepare(const std::vector<SubjectSessions>& subjects, const PipelineOptions& opts) {
    const StudyLayout layout = build_layout(subjects, opts.mode);
    PreparedStudy study;
    study.input.mode = opts.mode == LayoutMode::TestRetest3Part ? DataMode::TestRetest
                                                                : DataMode::SingleSession;

    const int n = static_cast<int>(subjects.size());
    study.subject_ids.resize(n);
    study.input.raw.resize(n);
    study.input.source1.resize(n);
    study.input.source2.resize(n);
    study.test_corr.resize(n);
    std::vector<SymMatrix> full2(n);
    bool have_full2 = true;
    std::vector<int> t_raw(n), t_src(n);

    parallel_for(n, opts.threads, [&](int i) {
        const auto& subj = subjects[i];
        const auto& sl = layout.subjects[i];
        study.subject_ids[i] = subj.subject_id;
        if (opts.mode == LayoutMode::TestRetest3Part) {
            const TimeSeriesMatrix p1 = extract_part(subj, sl.parts[0]);
            const TimeSeriesMatrix p2 = extract_part(subj, sl.parts[1]);
            const TimeSeriesMatrix p3 = extract_part(subj, sl.parts[2]);
            study.input.raw[i] = compute_correlation(p1).values;
            study.input.source1[i] = study.input.raw[i];
            study.input.source2[i] = compute_correlation(p2).values;
            study.test_corr[i] = compute_correlation(p3).values;
            t_raw[i] = p1.n_timepoints();
            t_src[i] = p1.n_timepoints();
        } else {
            const TimeSeriesMatrix h1 = extract_part(subj, sl.parts[0]);
            const TimeSeriesMatrix h2 = extract_part(subj, sl.parts[1]);
            // Pearson centering already demeans; the full scan is used as-is
            // so this path matches correlation of the raw session exactly.
            study.input.raw[i] = compute_correlation(subj.sessions[0]).values;
            study.input.source1[i] = compute_correlation(h1).values;
            study.input.source2[i] = compute_correlation(h2).values;
            t_raw[i] = subj.sessions[0].n_timepoints();
            t_src[i] = h1.n_timepoints();
            if (sl.test_part >= 0) {
                const TimeSeriesMatrix test = extract_part(subj, sl.parts[sl.test_part]);
                study.test_corr[i] = compute_correlation(test).values;
                full2[i] = study.test_corr[i];
            }
        }
    });

    if (opts.mode == LayoutMode::SingleScanPseudo) {
        for (int i = 0; i < n; ++i)
            if (full2[i].size() == 0) have_full2 = false;
        if (have_full2) study.input.full_session2 = std::move(full2);
    }
    study.input.timepoints_raw = t_raw.front();
    study.input.timepoints_source = t_src.front();
    return study;
}

EngineOptions engine_options(const PipelineOptions& opts, Space space) {
    EngineOptions eo;
    eo.space = space;
    eo.signal_source = opts.signal_source;
    eo.global_adjust = opts.global_adjust;
    eo.theta = opts.theta;
    eo.scan_minutes = opts.scan_minutes;
    return eo;
}

void require_test_data(const PreparedStudy& study, const char* what) {
    for (const auto& t : study.test_corr)
        if (t.size() == 0)
            throw InvalidInput(std::string(what) +
                               ": no test set available (single-scan data needs a second session)");
}

}  // namespace

R1Result run_analysis_r1(const std::vector<SubjectSessions>& subjects, const PipelineOptions& opts) {
    PreparedStudy study = prepare(subjects, opts);
    require_test_data(study, "run_analysis_r1");
    const EngineResult engine =
        shrink_all_methods(study.input, opts.methods, engine_options(opts, opts.space));

    R1Result out;
    out.subject_ids = study.subject_ids;
    out.raw_estimates = study.input.raw;
    out.test_estimates = study.test_corr;
    const int n = static_cast<int>(subjects.size());

    std::vector<double> mse_raw(n);
    for (int i = 0; i < n; ++i) mse_raw[i] = matrix_mse(study.input.raw[i], study.test_corr[i]);

    for (const auto& ms : engine.methods) {
        std::vector<SymMatrix> shrunk;
        std::vector<double> raw_v, shr_v;
        for (int i = 0; i < n; ++i) {
            const auto& subj = ms.subjects[i];
            R1SubjectRow row;
            row.subject_id = study.subject_ids[i];
            row.method = to_string(ms.method);
            row.mean_lambda = subj.mean_lambda;
            row.mse_raw = mse_raw[i];
            row.mse_shrunk = matrix_mse(subj.shrunk_corr, study.test_corr[i]);
            out.rows.push_back(row);
            raw_v.push_back(row.mse_raw);
            shr_v.push_back(row.mse_shrunk);
            shrunk.push_back(subj.shrunk_corr);
        }
        R1MethodSummary s;
        s.method = to_string(ms.method);
        s.median_mse_raw = median(raw_v);
        s.median_mse_shrunk = median(shr_v);
        s.pct_mse_decrease = 100.0 * (s.median_mse_raw - s.median_mse_shrunk) / s.median_mse_raw;
        out.summary.push_back(s);
        out.shrunk_estimates.push_back(std::move(shrunk));
    }
    return out;
}

R2Result run_analysis_r2(const std::vector<SubjectSessions>& subjects, const PipelineOptions& opts) {
    if (opts.k < 2) throw InvalidInput("run_analysis_r2: k must be >= 2");
    PreparedStudy study = prepare(subjects, opts);
    require_test_data(study, "run_analysis_r2");
    // Parcellations come from correlation-space shrinkage.
    const EngineResult engine =
        shrink_all_methods(study.input, opts.methods, engine_options(opts, Space::Correlation));

    const int n = static_cast<int>(subjects.size());
    const DataMode mode = study.input.mode;

    R2Result out;
    out.subject_ids = study.subject_ids;
    out.raw_parcellations.resize(n);
    out.test_parcellations.resize(n);
    out.shrunk_parcellations.assign(engine.methods.size(), std::vector<Parcellation>(n));

    parallel_for(n, opts.threads, [&](int i) {
        ConnectivityMatrix raw;
        raw.values = study.input.raw[i];
        raw.space = Space::Correlation;
        out.raw_parcellations[i] = spectral_cluster(build_affinity(raw), opts.k,
                                                    cluster_seed(opts.seed, i, kRawArm), opts.n_init);
        ConnectivityMatrix test;
        test.values = study.test_corr[i];
        test.space = Space::Correlation;
        out.test_parcellations[i] = spectral_cluster(
            build_affinity(test), opts.k, cluster_seed(opts.seed, i, kTestSetArm), opts.n_init);
        for (std::size_t m = 0; m < engine.methods.size(); ++m) {
            ConnectivityMatrix shr;
            shr.values = engine.methods[m].subjects[i].shrunk_corr;
            shr.space = Space::Correlation;
            const int arm = shrunk_arm_index(mode, engine.methods[m].method);
            out.shrunk_parcellations[m][i] = spectral_cluster(
                build_affinity(shr), opts.k, cluster_seed(opts.seed, i, arm), opts.n_init);
        }
    });

    for (std::size_t m = 0; m < engine.methods.size(); ++m) {
        std::vector<double> raw_v, shr_v;
        for (int i = 0; i < n; ++i) {
            R2SubjectRow row;
            row.subject_id = study.subject_ids[i];
            row.method = to_string(engine.methods[m].method);
            row.mean_lambda = engine.methods[m].subjects[i].mean_lambda;
            row.dice_raw = dice(out.raw_parcellations[i], out.test_parcellations[i]);
            row.dice_shrunk = dice(out.shrunk_parcellations[m][i], out.test_parcellations[i]);
            out.rows.push_back(row);
            raw_v.push_back(row.dice_raw);
            shr_v.push_back(row.dice_shrunk);
        }
        R2MethodSummary s;
        s.method = to_string(engine.methods[m].method);
        s.median_dice_raw = median(raw_v);
        s.median_dice_shrunk = median(shr_v);
        s.pct_dice_increase = 100.0 * (s.median_dice_shrunk - s.median_dice_raw) / s.median_dice_raw;
        out.summary.push_back(s);
    }
    return out;
}

std::string r1_results_csv(const R1Result& r) {
    std::string csv = "subject_id,method,mean_lambda,mse_raw,mse_shrunk\n";
    for (const auto& row : r.rows)
        csv += row.subject_id + ',' + row.method + ',' + io::fmt_g17(row.mean_lambda) + ',' +
               io::fmt_g17(row.mse_raw) + ',' + io::fmt_g17(row.mse_shrunk) + '\n';
    return csv;
}

std::string r1_summary_csv(const R1Result& r) {
    std::string csv = "method,median_mse_raw,median_mse_shrunk,pct_mse_decrease\n";
    for (const auto& s : r.summary)
        csv += s.method + ',' + io::fmt_g17(s.median_mse_raw) + ',' +
               io::fmt_g17(s.median_mse_shrunk) + ',' + io::fmt_g17(s.pct_mse_decrease) + '\n';
    return csv;
}

std::string r2_results_csv(const R2Result& r) {
    std::string csv = "subject_id,method,mean_lambda,dice_raw,dice_shrunk\n";
    for (const auto& row : r.rows)
        csv += row.subject_id + ',' + row.method + ',' + io::fmt_g17(row.mean_lambda) + ',' +
               io::fmt_g17(row.dice_raw) + ',' + io::fmt_g17(row.dice_shrunk) + '\n';
    return csv;
}

std::string r2_summary_csv(const R2Result& r) {
    std::string csv = "method,median_dice_raw,median_dice_shrunk,pct_dice_increase\n";
    for (const auto& s : r.summary)
        csv += s.method + ',' + io::fmt_g17(s.median_dice_raw) + ',' +
               io::fmt_g17(s.median_dice_shrunk) + ',' + io::fmt_g17(s.pct_dice_increase) + '\n';
    return csv;
}

}  // namespace shrinkparc
