#include "cyclecap/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cyclecap/rng.hpp"

namespace cyclecap {

void CsvTable::add_row(std::vector<std::string> row) {
    if (row.size() != header.size())
        throw std::invalid_argument("CSV row width does not match header");
    rows.push_back(std::move(row));
}

std::string CsvTable::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) os << ',';
        os << header[i];
    }
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << row[i];
        }
        os << '\n';
    }
    return os.str();
}

void write_text(const std::string& body, const std::string& path) {
    std::ofstream os(path, std::ios::binary);  // binary: keep LF endings everywhere
    if (!os) throw std::runtime_error("cannot write " + path);
    os << body;
    if (!os) throw std::runtime_error("short write to " + path);
}

void write_csv(const CsvTable& table, const std::string& path) {
    write_text(table.to_string(), path);
}

nlohmann::json make_manifest(const std::string& command) {
    nlohmann::json m;
    m["tool"] = "cyclecap";
    m["version"] = kToolVersion;
    m["format_version"] = kOutputFormatVersion;
    m["rng"] = Philox4x64::kAlgorithmId;
    m["command"] = command;
    return m;
}

void write_manifest(const nlohmann::json& manifest, const std::string& path) {
    write_text(manifest.dump(2) + "\n", path);
}

nlohmann::json read_manifest(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path);
    nlohmann::json m;
    is >> m;
    return m;
}

std::string manifest_path_for(const std::string& output_path) {
    auto dot = output_path.rfind(".csv");
    if (dot != std::string::npos && dot == output_path.size() - 4)
        return output_path.substr(0, dot) + ".manifest.json";
    return output_path + ".manifest.json";
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace cyclecap
