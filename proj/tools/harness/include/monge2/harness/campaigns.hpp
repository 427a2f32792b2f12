#pragma once

#include "monge2/harness/audits.hpp"
#include "monge2/liouville.hpp"

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace monge2::harness {

struct DerivativesCampaign {
    DerivativeAuditConfig audit;
    double fd_tolerance = 1e-8;
    double identity_tolerance = 1e-12;
};

struct ConcavityCampaign {
    VerifierConfig verifier;
    /// Second scan for the threshold stability check; unset skips it.
    std::optional<std::uint64_t> stability_seed;
    /// Samples above the measured threshold required for the scan to count.
    std::int64_t min_samples_above = 0;
};

struct LemmaCampaign {
    LemmaAuditConfig audit;
};

struct PogorelovCampaign {
    SolverConfig solver;
    std::int64_t ball_n = 33;
    std::vector<std::int64_t> box_grids{17, 33, 65};
    double ball_tolerance = 0.01;
    double box_variation = 0.05;
};

struct SolveCampaign {
    SolverConfig solver;
    bool ball = true;
    std::int64_t n = 33;
    std::string problem = "quadratic";
    double bump_amplitude = 1.0;
    double bump_half_angle = std::numbers::pi / 3.0;
};

struct LiouvilleCampaign {
    LiouvilleConfig scan;
    /// Max oscillation allowed for the unperturbed (exactly quadratic) data.
    double unperturbed_tolerance = 1e-6;
};

/// Each campaign writes summary.json, its tables and plots and manifest.txt under
/// `out` and returns 0 when every assertion passed, 1 otherwise.
int run_verify_derivatives(const DerivativesCampaign& campaign, const std::filesystem::path& out);
int run_verify_concavity(const ConcavityCampaign& campaign, const std::filesystem::path& out);
int run_verify_lemma22(const LemmaCampaign& campaign, const std::filesystem::path& out);
int run_verify_pogorelov_bounds(const PogorelovCampaign& campaign, std::uint64_t seed,
                                const std::filesystem::path& out);
int run_solve(const SolveCampaign& campaign, std::uint64_t seed, const std::filesystem::path& out);
int run_liouville_scan(const LiouvilleCampaign& campaign, std::uint64_t seed, const std::filesystem::path& out);

} // namespace monge2::harness
