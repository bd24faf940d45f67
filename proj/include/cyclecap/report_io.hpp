#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace cyclecap {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kOutputFormatVersion = 1;

/// Plot-ready CSV: header row, UTF-8, LF line endings.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
    std::string to_string() const;
};

void write_csv(const CsvTable& table, const std::string& path);
void write_text(const std::string& body, const std::string& path);

/// Manifest skeleton with tool version, RNG id and format version filled in;
/// callers add "config" (the resolved run parameters) and "results".
nlohmann::json make_manifest(const std::string& command);
void write_manifest(const nlohmann::json& manifest, const std::string& path);
nlohmann::json read_manifest(const std::string& path);

/// "path.csv" -> "path.manifest.json"; other extensions get the suffix
/// appended.
std::string manifest_path_for(const std::string& output_path);

std::string format_double(double v);

}  // namespace cyclecap
