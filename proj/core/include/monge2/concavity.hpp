#pragma once

#include "monge2/spectral.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace monge2 {

/// Relative tolerance of the algebraic identity ledger.
inline constexpr double kIdentityTolerance = 1e-11;
/// Relative tolerance of two-path and closed-form cross-checks.
inline constexpr double kCrossCheckTolerance = 1e-9;

struct VerifierConfig {
    double epsilon = 1.0 / 9.0;
    double lambda1_min = 0.5;
    double lambda1_max = 1.0e6;
    std::int64_t samples = 100000;
    std::uint64_t seed = 42;
    /// A sample violates positivity when min_eig_a < -relative_tolerance * |a|_F.
    double relative_tolerance = 1.0e-10;
    int buckets_per_decade = 4;
    /// Every row_stride-th accepted sample is kept as a detail row (0 = none).
    std::int64_t row_stride = 1000;

    double delta() const noexcept { return 1.0 + epsilon; }
    /// Throws InputError when an invariant is broken.
    void validate() const;
};

struct ThirdDerivVector {
    Vec3 xi{};
};

/// Which row of the reduced 2x2 form is analysed: the pivot is the eigenvalue
/// whose diagonal entry is compared against the off-diagonal one.
enum class Pivot { Second = 1, Third = 2 };

/// Sign pattern relative to a pivot row: 1 both >= 0, 2 pivot < 0, 3 partner < 0.
int sign_case(const Spectrum& lambda, Pivot pivot) noexcept;

/// a_pp - a_pq split into its four grouped terms plus the two case quantities.
struct Step1Terms {
    std::array<double, 4> terms{};
    double case_v = 0.0;
    double case_vi = 0.0;
    double diff = 0.0;
    int case_id = 1;
    /// |(I + II) - 2 nu_1 nu_q / (sigma1 + lambda1)| relative, I and II from their definitions.
    double pair_identity_residual = 0.0;
    /// Relative residual of the b11/(F1)^2 - delta/(lambda1 F1) - 1/f closed form.
    double delta_identity_residual = 0.0;
    /// Relative residual of III + IV against the V/VI split.
    double split_identity_residual = 0.0;

    bool dominant() const noexcept { return diff >= 0.0; }
};

/// a_pp + a_pq split into its four grouped terms plus V, VI and the normalized VII.
struct Step2Terms {
    std::array<double, 4> terms{};
    double case_v = 0.0;
    double case_vi = 0.0;
    double case_vii = 0.0;
    /// The O(delta / lambda1^3) part of VII, evaluated exactly.
    double vii_remainder = 0.0;
    double sum = 0.0;
    int case_id = 1;
    /// III + (F_p V / (sigma1 + lambda1) + VI) / F_1, a lower bound for sum.
    double lower_bound = 0.0;
    /// lambda1^2 (sigma1 - lambda_p) VII, a lower bound for VI.
    double vi_floor = 0.0;

    bool dominant() const noexcept { return sum >= 0.0; }
};

struct QFormReport {
    double q_value = 0.0;
    /// Symmetrized reduced form in (xi_2, xi_3).
    std::array<std::array<double, 2>, 2> a_matrix{};
    Vec3 constraint_normal{};
    double min_eig_a = 0.0;
    double frobenius_a = 0.0;
    /// Step records for the pivot-2 and pivot-3 rows.
    std::array<Step1Terms, 2> step1{};
    std::array<Step2Terms, 2> step2{};
    /// Largest relative mismatch between the step closed forms and the
    /// extended-precision a-matrix (diff and sum of both rows).
    double step_crosscheck_residual = 0.0;
    /// Relative residual of F^{pp,pp} + F^{pp,qq} = F_p (F_p + F_q)/f - b_pp - b_pq (worst row).
    double step2_identity_residual = 0.0;
    /// Relative residual of f b11 = (sigma1 - l1)^2 (sigma1 + l1)^2 - 2 f (sigma1 - l1) against b12 + b13.
    double b11_identity_residual = 0.0;

    bool psd(double relative_tolerance) const noexcept {
        return min_eig_a >= -relative_tolerance * frobenius_a;
    }
};

/// Q evaluated from its defining display, with the jet of lambda.
/// Throws DegeneracyError if lambda1 == lambda2, DomainError if lambda1 <= 0 or outside P2.
double quadratic_form_Q(const Spectrum& lambda, const ThirdDerivVector& xi, double delta);

/// The xi_1 that puts (xi_1, xi_2, xi_3) on the constraint plane sum F^ii xi_i = 0.
ThirdDerivVector constraint_completion(const Spectrum& lambda, double xi2, double xi3);

/// Reduced 2x2 form after eliminating xi_1; fills a_matrix, constraint_normal, min_eig_a.
QFormReport reduced_a_matrix(const Spectrum& lambda, double delta);

Step1Terms step1_decomposition(const Spectrum& lambda, double delta, Pivot pivot = Pivot::Second);

/// Throws PreconditionError unless |f - 1| <= 1e-9.
Step2Terms step2_decomposition(const Spectrum& lambda, double delta, Pivot pivot = Pivot::Second);

/// Reduced form, both step decompositions and every identity residual.
QFormReport qform_report(const Spectrum& lambda, double delta);

/// Minimum eigenvalue of the full 3x3 form (no constraint), scaled by its Frobenius norm.
double unrestricted_min_eig_ratio(const Spectrum& lambda, double delta);

/// Deterministic sampler of the level set f = 1 inside P2Half.
class LevelSetSampler {
public:
    explicit LevelSetSampler(const VerifierConfig& config);

    /// The draw with the given index, or nullopt when it is rejected.
    std::optional<Spectrum> draw(std::int64_t index) const;

private:
    double log_min_;
    double log_span_;
    std::uint64_t seed_;
};

struct SampleBatch {
    std::vector<Spectrum> spectra;
    std::int64_t draws = 0;
    std::int64_t rejected = 0;
};

/// Draws config.samples candidates and keeps the admissible ones.
SampleBatch sample_level_set(const VerifierConfig& config);

struct LemmaKey2Report {
    std::int64_t samples = 0;
    std::int64_t violations = 0;
    /// max (lambda2 + lambda3) lambda1^2 / 4; at most 1 when the bound holds.
    double max_ratio = 0.0;
    std::vector<Spectrum> violating;
};

/// Throws PreconditionError for a sample off the level set or outside P2Half.
LemmaKey2Report verify_lemma_key2(std::span<const Spectrum> samples);

/// 2 F_l/(l1 - l_l) >= (1 + 2/beta) F_l / l1 for l = 2, 3, through 4/(3 l1).
/// Throws PreconditionError (beta < 6, outside P2) or DegeneracyError (l1 == l2).
bool verify_divided_difference_bound(const Spectrum& lambda, double beta);

/// sum_i F^ii >= lambda1^2 / 2. Throws PreconditionError if |f - 1| > 1e-9.
bool verify_trace_lower_bound(const Spectrum& lambda);
double trace_of_gradient(const Spectrum& lambda);

struct ScanBucket {
    double lower = 0.0;
    double upper = 0.0;
    std::int64_t samples = 0;
    std::int64_t psd_violations = 0;
    std::int64_t step1_failures = 0;
    std::int64_t step2_failures = 0;
    double min_eig_ratio = 0.0;
};

struct ScanRow {
    std::int64_t index = 0;
    Vec3 lambda{};
    double min_eig_a = 0.0;
    double frobenius_a = 0.0;
    double step1_diff = 0.0;
    double step2_sum = 0.0;
    int case_id = 1;
};

struct ScanReport {
    std::int64_t draws = 0;
    std::int64_t accepted = 0;
    std::int64_t rejected = 0;

    double global_min_eig = 0.0;
    double global_min_eig_ratio = 0.0;
    double global_min_eig_lambda1 = 0.0;

    bool threshold_found = false;
    double threshold_lambda1 = 0.0;
    int threshold_bucket = -1;

    std::int64_t samples_above_threshold = 0;
    std::int64_t psd_violations = 0;
    std::int64_t psd_violations_above_threshold = 0;
    std::int64_t step1_failures = 0;
    std::int64_t step2_failures = 0;
    std::int64_t step1_failures_above_threshold = 0;
    std::int64_t step2_failures_above_threshold = 0;

    double max_pair_identity_residual = 0.0;
    double max_delta_identity_residual = 0.0;
    double max_split_identity_residual = 0.0;
    double max_step2_identity_residual = 0.0;
    double max_b11_identity_residual = 0.0;
    double max_crosscheck_residual = 0.0;
    double max_two_path_residual = 0.0;
    std::int64_t identity_failures = 0;

    std::int64_t unrestricted_psd = 0;
    double max_abs_vii_remainder = 0.0;
    double min_case_v = 0.0;
    double min_vii = 0.0;
    std::int64_t step2_bound_failures = 0;
    std::array<std::int64_t, 3> case_counts{};

    std::vector<ScanBucket> buckets;
    std::vector<ScanRow> rows;
    std::vector<ScanRow> violations;

    double step1_pass_rate() const noexcept;
    double step2_pass_rate() const noexcept;
    double step1_pass_rate_above_threshold() const noexcept;
    double step2_pass_rate_above_threshold() const noexcept;
};

/// Bucket index of lambda1 (log10 buckets anchored at lambda1_min).
int scan_bucket(const VerifierConfig& config, double lambda1) noexcept;

ScanReport concavity_scan(const VerifierConfig& config);

} // namespace monge2
