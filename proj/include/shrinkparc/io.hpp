#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "shrinkparc/types.hpp"
#include "shrinkparc/variance.hpp"

namespace shrinkparc::io {

/// Formats a double with %.17g (round-trips exactly).
std::string fmt_g17(double x);

/// Writes `content` to `path` through a temporary file in the same
/// directory, renaming on success so no partial file is ever visible.
void atomic_write(const std::filesystem::path& path, const std::string& content);

/// Headered CSV: first line names the columns (v0,...,v{n-1}), then one
/// row per line, comma separated, %.17g precision.
void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

/// Raw binary matrix: 16-byte header (magic "SHPC", u32 version, u32 rows,
/// u32 cols, little endian) followed by row-major float64 data.
void write_matrix_binary(const std::filesystem::path& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_binary(const std::filesystem::path& path);

/// Reads either format, sniffing the binary magic.
Eigen::MatrixXd read_matrix(const std::filesystem::path& path);

/// Two-column CSV (voxel_index,label).
void write_parcellation_csv(const std::filesystem::path& path, const Parcellation& p);
Parcellation read_parcellation_csv(const std::filesystem::path& path);

/// Key-value text serialization of a fitted theta model.
void write_theta_model(const std::filesystem::path& path, const ThetaModel& m);
ThetaModel read_theta_model(const std::filesystem::path& path);

struct ManifestEntry {
    std::string subject_id;
    std::string session_id;
    std::filesystem::path path;  // resolved against the manifest directory
};

/// CSV manifest of (subject_id,session_id,path) rows.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries);

/// Loads every session listed in a manifest, grouped by subject in first-
/// appearance order; sessions keep their listed order.
std::vector<SubjectSessions> load_sessions(const std::filesystem::path& manifest_path);

/// Sorted key=value dump of a resolved run configuration.
void write_config_resolved(const std::filesystem::path& out_dir,
                           const std::map<std::string, std::string>& config);

}  // namespace shrinkparc::io
