#include "shrinkparc/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace shrinkparc::io {

namespace fs = std::filesystem;

std::string fmt_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void atomic_write(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw IoError("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("rename to '" + path.string() + "' failed: " + ec.message());
}

void write_matrix_csv(const fs::path& path, const Eigen::MatrixXd& m) {
    std::string out;
    out.reserve(static_cast<std::size_t>(m.size()) * 20 + 64);
    for (int c = 0; c < m.cols(); ++c) {
        if (c) out += ',';
        out += 'v';
        out += std::to_string(c);
    }
    out += '\n';
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) {
            if (c) out += ',';
            out += fmt_g17(m(r, c));
        }
        out += '\n';
    }
    atomic_write(path, out);
}

namespace {

std::vector<double> parse_csv_line(const std::string& line, const fs::path& path, int lineno) {
    std::vector<double> row;
    std::size_t start = 0;
    while (start <= line.size()) {
        std::size_t end = line.find(',', start);
        if (end == std::string::npos) end = line.size();
        const std::string cell = line.substr(start, end - start);
        try {
            std::size_t used = 0;
            const double v = std::stod(cell, &used);
            if (used == 0) throw std::invalid_argument("empty");
            row.push_back(v);
        } catch (const std::exception&) {
            throw IoError("'" + path.string() + "' line " + std::to_string(lineno) +
                          ": cannot parse '" + cell + "' as a number");
        }
        if (end == line.size()) break;
        start = end + 1;
    }
    return row;
}

}  // namespace

Eigen::MatrixXd read_matrix_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw IoError("'" + path.string() + "' is empty");
    // Header row: count columns.
    std::size_t cols = 1;
    for (char c : line) cols += c == ',';
    std::vector<std::vector<double>> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto row = parse_csv_line(line, path, lineno);
        if (row.size() != cols)
            throw IoError("'" + path.string() + "' line " + std::to_string(lineno) +
                          ": expected " + std::to_string(cols) + " columns, got " +
                          std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError("'" + path.string() + "' has a header but no data rows");
    Eigen::MatrixXd m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols; ++c) m(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
    return m;
}

namespace {

constexpr char kMagic[4] = {'S', 'H', 'P', 'C'};
constexpr std::uint32_t kBinaryVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xFF);
}

std::uint32_t get_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

void write_matrix_binary(const fs::path& path, const Eigen::MatrixXd& m) {
    std::string out;
    out.reserve(16 + static_cast<std::size_t>(m.size()) * 8);
    out.append(kMagic, 4);
    put_u32(out, kBinaryVersion);
    put_u32(out, static_cast<std::uint32_t>(m.rows()));
    put_u32(out, static_cast<std::uint32_t>(m.cols()));
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) {
            const double v = m(r, c);
            std::uint64_t bits;
            std::memcpy(&bits, &v, 8);
            for (int i = 0; i < 8; ++i) out += static_cast<char>((bits >> (8 * i)) & 0xFF);
        }
    }
    atomic_write(path, out);
}

Eigen::MatrixXd read_matrix_binary(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (data.size() < 16 || std::memcmp(data.data(), kMagic, 4) != 0)
        throw IoError("'" + path.string() + "' is not a SHPC matrix file");
    const auto* p = reinterpret_cast<const unsigned char*>(data.data());
    const std::uint32_t version = get_u32(p + 4);
    if (version != kBinaryVersion)
        throw IoError("'" + path.string() + "': unsupported SHPC version " + std::to_string(version));
    const std::uint32_t rows = get_u32(p + 8);
    const std::uint32_t cols = get_u32(p + 12);
    const std::size_t expect = 16 + static_cast<std::size_t>(rows) * cols * 8;
    if (data.size() != expect)
        throw IoError("'" + path.string() + "': truncated SHPC payload");
    Eigen::MatrixXd m(rows, cols);
    std::size_t off = 16;
    for (std::uint32_t r = 0; r < rows; ++r) {
        for (std::uint32_t c = 0; c < cols; ++c) {
            std::uint64_t bits = 0;
            for (int i = 0; i < 8; ++i)
                bits |= static_cast<std::uint64_t>(p[off + i]) << (8 * i);
            double v;
            std::memcpy(&v, &bits, 8);
            m(r, c) = v;
            off += 8;
        }
    }
    return m;
}

Eigen::MatrixXd read_matrix(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    char head[4] = {};
    in.read(head, 4);
    in.close();
    if (std::memcmp(head, kMagic, 4) == 0) return read_matrix_binary(path);
    return read_matrix_csv(path);
}

void write_parcellation_csv(const fs::path& path, const Parcellation& p) {
    std::string out = "voxel_index,label\n";
    for (std::size_t v = 0; v < p.labels.size(); ++v)
        out += std::to_string(v) + ',' + std::to_string(p.labels[v]) + '\n';
    atomic_write(path, out);
}

Parcellation read_parcellation_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw IoError("'" + path.string() + "' is empty");
    Parcellation p;
    int lineno = 1;
    int max_label = -1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw IoError("'" + path.string() + "' line " + std::to_string(lineno) +
                          ": expected voxel_index,label");
        const int voxel = std::stoi(line.substr(0, comma));
        const int label = std::stoi(line.substr(comma + 1));
        if (voxel != static_cast<int>(p.labels.size()))
            throw IoError("'" + path.string() + "': voxel indices must be 0..V-1 in order");
        p.labels.push_back(label);
        max_label = std::max(max_label, label);
    }
    p.k = max_label + 1;
    return p;
}

void write_theta_model(const fs::path& path, const ThetaModel& m) {
    std::string out;
    out += "beta0=" + fmt_g17(m.beta0) + '\n';
    out += "beta1=" + fmt_g17(m.beta1) + '\n';
    out += "se_beta0=" + fmt_g17(m.se_beta0) + '\n';
    out += "se_beta1=" + fmt_g17(m.se_beta1) + '\n';
    out += "n_points=" + std::to_string(m.fitted_points.size()) + '\n';
    for (std::size_t i = 0; i < m.fitted_points.size(); ++i)
        out += "point." + std::to_string(i) + '=' + fmt_g17(m.fitted_points[i].first) + ',' +
               fmt_g17(m.fitted_points[i].second) + '\n';
    atomic_write(path, out);
}

ThetaModel read_theta_model(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    ThetaModel m;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw IoError("'" + path.string() + "': expected key=value");
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        if (key == "beta0") m.beta0 = std::stod(value);
        else if (key == "beta1") m.beta1 = std::stod(value);
        else if (key == "se_beta0") m.se_beta0 = std::stod(value);
        else if (key == "se_beta1") m.se_beta1 = std::stod(value);
        else if (key.rfind("point.", 0) == 0) {
            const auto comma = value.find(',');
            if (comma == std::string::npos)
                throw IoError("'" + path.string() + "': malformed fitted point");
            m.fitted_points.emplace_back(std::stod(value.substr(0, comma)),
                                         std::stod(value.substr(comma + 1)));
        }
    }
    return m;
}

std::vector<ManifestEntry> read_manifest(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest '" + path.string() + "'");
    const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
    std::vector<ManifestEntry> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (lineno == 1 && line.rfind("subject_id", 0) == 0) continue;  // header
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw IoError("manifest line " + std::to_string(lineno) +
                          ": expected subject_id,session_id,path");
        ManifestEntry e;
        e.subject_id = line.substr(0, c1);
        e.session_id = line.substr(c1 + 1, c2 - c1 - 1);
        fs::path file = line.substr(c2 + 1);
        e.path = file.is_absolute() ? file : base / file;
        entries.push_back(std::move(e));
    }
    if (entries.empty()) throw IoError("manifest '" + path.string() + "' lists no files");
    return entries;
}

void write_manifest(const fs::path& path, const std::vector<ManifestEntry>& entries) {
    std::string out = "subject_id,session_id,path\n";
    for (const auto& e : entries)
        out += e.subject_id + ',' + e.session_id + ',' + e.path.string() + '\n';
    atomic_write(path, out);
}

std::vector<SubjectSessions> load_sessions(const fs::path& manifest_path) {
    const auto entries = read_manifest(manifest_path);
    std::vector<SubjectSessions> subjects;
    for (const auto& e : entries) {
        SubjectSessions* slot = nullptr;
        for (auto& s : subjects)
            if (s.subject_id == e.subject_id) { slot = &s; break; }
        if (!slot) {
            subjects.push_back(SubjectSessions{e.subject_id, {}});
            slot = &subjects.back();
        }
        TimeSeriesMatrix ts;
        ts.values = read_matrix(e.path);
        ts.subject_id = e.subject_id;
        ts.session_id = e.session_id;
        ts.validate();
        slot->sessions.push_back(std::move(ts));
    }
    return subjects;
}

void write_config_resolved(const fs::path& out_dir, const std::map<std::string, std::string>& config) {
    std::string out;
    for (const auto& [k, v] : config) out += k + '=' + v + '\n';
    atomic_write(out_dir / "config.resolved", out);
}

}  // namespace shrinkparc::io
