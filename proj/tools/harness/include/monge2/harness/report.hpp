#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace monge2::harness {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

using Cell = std::variant<double, std::int64_t, std::string>;

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

/// Round-trip formatting (%.17g) used for every number written to disk.
std::string format_number(double v);

/// Finite values as JSON numbers, NaN and infinities as strings.
Json json_number(double v);

void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Collects one campaign's results and writes summary.json, the artifacts and
/// manifest.txt under the output directory. Timing and other run-dependent text
/// goes to run.log only, which the manifest skips.
class Report {
public:
    Report(std::string command, std::uint64_t seed, std::filesystem::path output_dir);

    Json& config() noexcept { return config_; }
    Json& measurements() noexcept { return measurements_; }

    /// Records a named check; `relation` documents how value compares to threshold.
    bool check(const std::string& name, bool passed, double value, double threshold, const std::string& relation);
    void violation(Json row);

    void csv(const std::string& name, const CsvTable& table);
    void text(const std::string& name, const std::string& content);
    /// Lists a file already written under dir() in the manifest.
    void attach(const std::string& name);
    void log(const std::string& line);

    const std::filesystem::path& dir() const noexcept { return dir_; }
    std::int64_t failed() const noexcept { return failed_; }

    /// Writes summary.json and manifest.txt; returns 0 when every check passed, else 1.
    int finish();

private:
    std::string command_;
    std::uint64_t seed_;
    std::filesystem::path dir_;
    Json config_ = Json::object();
    Json measurements_ = Json::object();
    Json assertions_ = Json::array();
    Json violations_ = Json::array();
    std::vector<std::string> artifacts_;
    std::int64_t failed_ = 0;
};

} // namespace monge2::harness
