#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "shrinkparc/errors.hpp"
#include "shrinkparc/sym_matrix.hpp"

namespace shrinkparc {

enum class Space { Correlation, FisherZ };

inline const char* to_string(Space s) {
    return s == Space::Correlation ? "correlation" : "fisherz";
}

/// T-by-V observed signal matrix for one subject-session.
struct TimeSeriesMatrix {
    Eigen::MatrixXd values;  // rows = timepoints, cols = voxels
    std::string subject_id;
    std::string session_id;

    int n_timepoints() const { return static_cast<int>(values.rows()); }
    int n_voxels() const { return static_cast<int>(values.cols()); }

    void validate() const {
        if (n_timepoints() < 4)
            throw InvalidInput("time series for subject '" + subject_id +
                               "' has fewer than 4 timepoints");
        if (n_voxels() < 1) throw InvalidInput("time series has no voxels");
        if (!values.allFinite())
            throw InvalidInput("time series for subject '" + subject_id +
                               "' contains non-finite values");
    }
};

/// Symmetric V-by-V matrix of pairwise correlations or Fisher-z values.
/// Correlation space keeps off-diagonals in (-1,1) with unit diagonal;
/// Fisher-z space stores 0 on the diagonal.
struct ConnectivityMatrix {
    SymMatrix values;
    Space space = Space::Correlation;
    std::string subject_id;
    std::string session_id;
    int clamped_pairs = 0;  // entries pulled inside the open interval

    int n_voxels() const { return values.size(); }
};

struct GroupMeanMatrix {
    SymMatrix values;
    Space space = Space::Correlation;
    std::string session_id;
    int n_subjects = 0;
};

/// Per-voxel-pair shrinkage weights in [0,1].
struct ShrinkageField {
    SymMatrix values;
    std::string subject_id;  // empty when shared across subjects
};

enum class NoiseMethod { Common, Individual, Scaled, Global };

inline const char* to_string(NoiseMethod m) {
    switch (m) {
        case NoiseMethod::Common: return "common";
        case NoiseMethod::Individual: return "individual";
        case NoiseMethod::Scaled: return "scaled";
        case NoiseMethod::Global: return "global";
    }
    return "?";
}

struct NoiseVarianceField {
    NoiseMethod method = NoiseMethod::Common;
    SymMatrix values;
    std::string subject_id;  // set for Individual/Scaled fields
};

struct SignalVarianceField {
    SymMatrix values;
    long clamped_count = 0;  // pairs where total - noise was negative
};

/// Subject-specific scaling factors with mean 1 by construction.
struct ScalingFactors {
    std::vector<double> gamma;
};

/// Voxel-to-cluster assignment. Labels are integers in [0, k).
struct Parcellation {
    std::vector<int> labels;
    int k = 0;

    int n_voxels() const { return static_cast<int>(labels.size()); }

    void validate() const {
        if (k < 1) throw InvalidInput("parcellation: k must be >= 1");
        for (int l : labels)
            if (l < 0 || l >= k) throw InvalidInput("parcellation: label out of [0,k)");
    }
};

}  // namespace shrinkparc
