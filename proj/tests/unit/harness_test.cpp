#include "monge2/harness/cli.hpp"
#include "monge2/harness/report.hpp"
#include "monge2/harness/svg.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace monge2::harness {
namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("monge2_harness_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

Json summary(const fs::path& dir) { return Json::parse(slurp(dir / "summary.json")); }

TEST(Report, Sha256KnownVector) {
    const fs::path p = fs::temp_directory_path() / "monge2_abc.txt";
    std::ofstream(p, std::ios::binary) << "abc";
    EXPECT_EQ(sha256_file(p), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    fs::remove(p);
}

TEST(Report, NumberFormatting) {
    EXPECT_EQ(format_number(0.1), "0.10000000000000001");
    EXPECT_EQ(format_number(std::nan("")), "nan");
    EXPECT_EQ(json_number(-INFINITY), Json("-inf"));
    EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Svg, DropsNonPositiveOnLogAxes) {
    Plot p{"t", "x", "y", true, true, {Series{"s", {1, 10, -1}, {1, 100, 5}, false}}};
    const std::string svg = render_svg(p);
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Cli, DerivativesPassAndWriteArtifacts) {
    const fs::path dir = fresh_dir("deriv");
    EXPECT_EQ(run({"verify-derivatives", "--samples", "500", "--seed", "42", "--output-dir", dir.string()}), 0);
    const Json s = summary(dir);
    EXPECT_EQ(s["schema_version"], kSchemaVersion);
    EXPECT_EQ(s["command"], "verify-derivatives");
    EXPECT_EQ(s["seed"], 42);
    EXPECT_EQ(s["failed_assertions"], 0);
    EXPECT_LE(s["measurements"]["max_grad_error"].get<double>(), 1e-8);
    EXPECT_TRUE(fs::exists(dir / "derivatives.csv"));
    EXPECT_TRUE(fs::exists(dir / "run.log"));
}

TEST(Cli, ManifestHashesArtifacts) {
    const fs::path dir = fresh_dir("manifest");
    ASSERT_EQ(run({"verify-derivatives", "--samples", "200", "--output-dir", dir.string()}), 0);
    std::istringstream manifest(slurp(dir / "manifest.txt"));
    std::string hash, name;
    int entries = 0;
    while (manifest >> hash >> name) {
        EXPECT_EQ(sha256_file(dir / name), hash) << name;
        EXPECT_NE(name, "run.log");
        ++entries;
    }
    EXPECT_EQ(entries, 2);
}

TEST(Cli, ReproducibleBytes) {
    const fs::path a = fresh_dir("rep_a"), b = fresh_dir("rep_b");
    for (const auto& d : {a, b})
        ASSERT_EQ(run({"verify-concavity", "--samples", "3000", "--seed", "9", "--row-stride", "50", "--output-dir",
                       d.string()}),
                  0);
    for (const char* f : {"summary.json", "rows.csv", "buckets.csv", "violations.csv", "min_eig_a.svg", "manifest.txt"})
        EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
}

TEST(Cli, FailedAssertionExitsOne) {
    const fs::path dir = fresh_dir("fail");
    EXPECT_EQ(run({"verify-derivatives", "--samples", "200", "--fd-tolerance", "1e-30", "--output-dir", dir.string()}),
              1);
    EXPECT_GT(summary(dir)["failed_assertions"].get<int>(), 0);
}

TEST(Cli, UsageErrorsExitTwo) {
    const fs::path dir = fresh_dir("usage");
    EXPECT_EQ(run({"verify-derivatives", "--no-such-flag", "--output-dir", dir.string()}), 2);
    EXPECT_EQ(run({"frobnicate"}), 2);
    EXPECT_EQ(run(std::vector<std::string>{}), 2);
    EXPECT_EQ(run({"verify-derivatives", "--samples", "0", "--output-dir", dir.string()}), 2);
    EXPECT_EQ(run({"solve", "--domain", "torus", "--output-dir", dir.string()}), 2);
    EXPECT_EQ(run({"solve", "--cone", "p7", "--output-dir", dir.string()}), 2);
    EXPECT_EQ(run({"--help"}), 0);
}

TEST(Cli, ConfigFileWithFlagOverride) {
    const fs::path dir = fresh_dir("config");
    fs::create_directories(dir);
    const fs::path cfg = dir / "campaign.toml";
    std::ofstream(cfg) << "seed = 5\n[verify-derivatives]\nsamples = 300\nrow-stride = 7\n";
    ASSERT_EQ(run({"--config", cfg.string(), "verify-derivatives", "--samples", "250", "--output-dir",
                   (dir / "out").string()}),
              0);
    const Json s = summary(dir / "out");
    EXPECT_EQ(s["seed"], 5);
    EXPECT_EQ(s["config"]["samples"], 250);
    EXPECT_EQ(s["config"]["row_stride"], 7);
}

TEST(Cli, SolveBallReportsError) {
    const fs::path dir = fresh_dir("solve");
    ASSERT_EQ(run({"solve", "--domain", "ball", "--n", "13", "--output-dir", dir.string()}), 0);
    const Json s = summary(dir);
    EXPECT_TRUE(s["measurements"]["solve"]["converged"].get<bool>());
    EXPECT_LT(s["measurements"]["max_error"].get<double>(), 1e-9);
    EXPECT_TRUE(fs::exists(dir / "field.m2f"));
    EXPECT_TRUE(fs::exists(dir / "residual.svg"));
}

} // namespace
} // namespace monge2::harness
