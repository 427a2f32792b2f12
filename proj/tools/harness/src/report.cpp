#include "monge2/harness/report.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <memory>
#include <stdexcept>

namespace monge2::harness {

namespace fs = std::filesystem;

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{:.17g}", v);
}

namespace {

std::string cell_text(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) return format_number(v);
            else if constexpr (std::is_same_v<T, std::int64_t>) return fmt::format("{}", v);
            else return v;
        },
        c);
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << content;
}

} // namespace

Json json_number(double v) {
    if (std::isfinite(v)) return v;
    return format_number(v);
}

void write_csv(const fs::path& path, const CsvTable& table) {
    std::string out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) out += ',';
        out += table.header[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += cell_text(row[i]);
        }
        out += '\n';
    }
    write_file(path, out);
}

std::string sha256_file(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + path.string());
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
    std::array<char, 1 << 16> buf;
    while (is) {
        is.read(buf.data(), buf.size());
        if (is.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(is.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
    return hex;
}

Report::Report(std::string command, std::uint64_t seed, fs::path output_dir)
    : command_(std::move(command)), seed_(seed), dir_(std::move(output_dir)) {
    fs::create_directories(dir_);
    write_file(dir_ / "run.log", "");
}

bool Report::check(const std::string& name, bool passed, double value, double threshold,
                   const std::string& relation) {
    assertions_.push_back(Json{{"name", name},
                               {"passed", passed},
                               {"value", json_number(value)},
                               {"threshold", json_number(threshold)},
                               {"relation", relation}});
    if (!passed) ++failed_;
    log(fmt::format("{} {}: {} {} {}", passed ? "PASS" : "FAIL", name, format_number(value), relation,
                    format_number(threshold)));
    return passed;
}

void Report::violation(Json row) { violations_.push_back(std::move(row)); }

void Report::csv(const std::string& name, const CsvTable& table) {
    write_csv(dir_ / name, table);
    artifacts_.push_back(name);
}

void Report::text(const std::string& name, const std::string& content) {
    write_file(dir_ / name, content);
    artifacts_.push_back(name);
}

void Report::attach(const std::string& name) {
    if (!fs::exists(dir_ / name)) throw std::runtime_error("missing artifact " + name);
    artifacts_.push_back(name);
}

void Report::log(const std::string& line) {
    const auto now = std::chrono::system_clock::now();
    std::ofstream os(dir_ / "run.log", std::ios::app);
    os << fmt::format("[{}] {}\n",
                      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count(), line);
}

int Report::finish() {
    Json summary;
    summary["schema_version"] = kSchemaVersion;
    summary["command"] = command_;
    summary["seed"] = seed_;
    summary["config"] = config_;
    summary["assertions"] = assertions_;
    summary["measurements"] = measurements_;
    summary["failed_assertions"] = failed_;
    summary["violations"] = violations_;
    write_file(dir_ / "summary.json", summary.dump(2) + "\n");
    artifacts_.push_back("summary.json");

    std::vector<std::string> names = artifacts_;
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    std::string manifest;
    for (const auto& n : names) manifest += sha256_file(dir_ / n) + "  " + n + "\n";
    write_file(dir_ / "manifest.txt", manifest);
    log(fmt::format("finished with {} failed assertion(s)", failed_));
    return failed_ == 0 ? 0 : 1;
}

} // namespace monge2::harness
