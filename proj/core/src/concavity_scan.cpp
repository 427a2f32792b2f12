#include "monge2/concavity.hpp"
#include "monge2/parallel.hpp"
#include "monge2/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace monge2 {

namespace {

constexpr std::size_t kChunk = 4096;
constexpr std::size_t kViolationCap = 100;
constexpr std::uint64_t kXiStream = 0x7a3c9d1e5b2f4068ULL;

int bucket_count(const VerifierConfig& c) {
    const double decades = std::log10(c.lambda1_max / c.lambda1_min);
    return std::max(1, static_cast<int>(std::ceil(decades * c.buckets_per_decade - 1e-9)));
}

struct Partial {
    ScanReport report;
    std::vector<ScanBucket> buckets;
};

Partial empty_partial(const VerifierConfig& config) {
    Partial p;
    p.buckets.resize(static_cast<std::size_t>(bucket_count(config)));
    p.report.global_min_eig = std::numeric_limits<double>::infinity();
    p.report.global_min_eig_ratio = std::numeric_limits<double>::infinity();
    p.report.min_case_v = std::numeric_limits<double>::infinity();
    p.report.min_vii = std::numeric_limits<double>::infinity();
    for (auto& b : p.buckets) b.min_eig_ratio = std::numeric_limits<double>::infinity();
    return p;
}

void scan_sample(const VerifierConfig& config, std::int64_t index, const Spectrum& s, Partial& part) {
    ScanReport& r = part.report;
    const double delta = config.delta();
    const QFormReport q = qform_report(s, delta);
    const int b = scan_bucket(config, s[0]);
    ScanBucket& bucket = part.buckets[static_cast<std::size_t>(b)];

    ++r.accepted;
    ++bucket.samples;
    const double ratio = q.frobenius_a > 0.0 ? q.min_eig_a / q.frobenius_a : 0.0;
    if (q.min_eig_a < r.global_min_eig) r.global_min_eig = q.min_eig_a;
    if (ratio < r.global_min_eig_ratio) {
        r.global_min_eig_ratio = ratio;
        r.global_min_eig_lambda1 = s[0];
    }
    bucket.min_eig_ratio = std::min(bucket.min_eig_ratio, ratio);

    const bool psd = q.psd(config.relative_tolerance);
    const bool step1_ok = q.step1[0].dominant() && q.step1[1].dominant();
    const bool step2_ok = q.step2[0].dominant() && q.step2[1].dominant();
    if (!psd) ++bucket.psd_violations;
    if (!step1_ok) ++bucket.step1_failures;
    if (!step2_ok) ++bucket.step2_failures;

    // Two-path check of Q on a random direction of the constraint plane.
    CounterRng rng(config.seed ^ kXiStream, static_cast<std::uint64_t>(index));
    const double x2 = rng.uniform(-1.0, 1.0);
    const double x3 = rng.uniform(-1.0, 1.0);
    const double direct = quadratic_form_Q(s, constraint_completion(s, x2, x3), delta);
    const auto& a = q.a_matrix;
    const double reduced = a[0][0] * x2 * x2 + 2.0 * a[0][1] * x2 * x3 + a[1][1] * x3 * x3;
    const double two_path = std::abs(direct - reduced) / (q.frobenius_a * (x2 * x2 + x3 * x3));

    double pair_res = 0.0, delta_res = 0.0, split_res = 0.0;
    for (const auto& st : q.step1) {
        pair_res = std::max(pair_res, st.pair_identity_residual);
        delta_res = std::max(delta_res, st.delta_identity_residual);
        split_res = std::max(split_res, st.split_identity_residual);
    }
    r.max_pair_identity_residual = std::max(r.max_pair_identity_residual, pair_res);
    r.max_delta_identity_residual = std::max(r.max_delta_identity_residual, delta_res);
    r.max_split_identity_residual = std::max(r.max_split_identity_residual, split_res);
    r.max_step2_identity_residual = std::max(r.max_step2_identity_residual, q.step2_identity_residual);
    r.max_b11_identity_residual = std::max(r.max_b11_identity_residual, q.b11_identity_residual);
    r.max_crosscheck_residual = std::max(r.max_crosscheck_residual, q.step_crosscheck_residual);
    r.max_two_path_residual = std::max(r.max_two_path_residual, two_path);
    const bool identities_ok = pair_res <= kIdentityTolerance && delta_res <= kIdentityTolerance &&
                               q.step2_identity_residual <= kIdentityTolerance &&
                               q.b11_identity_residual <= kIdentityTolerance &&
                               q.step_crosscheck_residual <= kCrossCheckTolerance &&
                               two_path <= kCrossCheckTolerance;
    if (!identities_ok) ++r.identity_failures;

    if (unrestricted_min_eig_ratio(s, delta) >= -config.relative_tolerance) ++r.unrestricted_psd;

    for (std::size_t k = 0; k < 2; ++k) {
        const Step2Terms& st = q.step2[k];
        r.max_abs_vii_remainder = std::max(r.max_abs_vii_remainder, std::abs(st.vii_remainder));
        r.min_case_v = std::min(r.min_case_v, st.case_v);
        r.min_vii = std::min(r.min_vii, st.case_vii);
        const bool chain = st.sum >= st.lower_bound - kCrossCheckTolerance * std::abs(st.sum) &&
                           st.case_vi >= st.vi_floor - kCrossCheckTolerance * std::abs(st.case_vi);
        if (!chain) ++r.step2_bound_failures;
        ++r.case_counts[static_cast<std::size_t>(st.case_id - 1)];
    }

    ScanRow row;
    row.index = index;
    row.lambda = s.values();
    row.min_eig_a = q.min_eig_a;
    row.frobenius_a = q.frobenius_a;
    row.step1_diff = std::min(q.step1[0].diff, q.step1[1].diff);
    row.step2_sum = std::min(q.step2[0].sum, q.step2[1].sum);
    row.case_id = q.step2[0].case_id;
    if (config.row_stride > 0 && index % config.row_stride == 0) r.rows.push_back(row);
    if ((!psd || !step1_ok || !step2_ok || !identities_ok) && r.violations.size() < kViolationCap)
        r.violations.push_back(row);
}

Partial merge(Partial acc, Partial part) {
    ScanReport& a = acc.report;
    const ScanReport& p = part.report;
    a.draws += p.draws;
    a.accepted += p.accepted;
    a.rejected += p.rejected;
    if (p.global_min_eig < a.global_min_eig) a.global_min_eig = p.global_min_eig;
    if (p.global_min_eig_ratio < a.global_min_eig_ratio) {
        a.global_min_eig_ratio = p.global_min_eig_ratio;
        a.global_min_eig_lambda1 = p.global_min_eig_lambda1;
    }
    a.max_pair_identity_residual = std::max(a.max_pair_identity_residual, p.max_pair_identity_residual);
    a.max_delta_identity_residual = std::max(a.max_delta_identity_residual, p.max_delta_identity_residual);
    a.max_split_identity_residual = std::max(a.max_split_identity_residual, p.max_split_identity_residual);
    a.max_step2_identity_residual = std::max(a.max_step2_identity_residual, p.max_step2_identity_residual);
    a.max_b11_identity_residual = std::max(a.max_b11_identity_residual, p.max_b11_identity_residual);
    a.max_crosscheck_residual = std::max(a.max_crosscheck_residual, p.max_crosscheck_residual);
    a.max_two_path_residual = std::max(a.max_two_path_residual, p.max_two_path_residual);
    a.identity_failures += p.identity_failures;
    a.unrestricted_psd += p.unrestricted_psd;
    a.max_abs_vii_remainder = std::max(a.max_abs_vii_remainder, p.max_abs_vii_remainder);
    a.min_case_v = std::min(a.min_case_v, p.min_case_v);
    a.min_vii = std::min(a.min_vii, p.min_vii);
    a.step2_bound_failures += p.step2_bound_failures;
    for (std::size_t k = 0; k < 3; ++k) a.case_counts[k] += p.case_counts[k];
    a.rows.insert(a.rows.end(), p.rows.begin(), p.rows.end());
    for (const auto& v : p.violations)
        if (a.violations.size() < kViolationCap) a.violations.push_back(v);
    for (std::size_t b = 0; b < acc.buckets.size(); ++b) {
        ScanBucket& x = acc.buckets[b];
        const ScanBucket& y = part.buckets[b];
        x.samples += y.samples;
        x.psd_violations += y.psd_violations;
        x.step1_failures += y.step1_failures;
        x.step2_failures += y.step2_failures;
        x.min_eig_ratio = std::min(x.min_eig_ratio, y.min_eig_ratio);
    }
    return acc;
}

double rate(std::int64_t failures, std::int64_t total) noexcept {
    return total == 0 ? 1.0 : 1.0 - static_cast<double>(failures) / static_cast<double>(total);
}

} // namespace

int scan_bucket(const VerifierConfig& config, double lambda1) noexcept {
    const int n = bucket_count(config);
    const double pos = std::log10(lambda1 / config.lambda1_min) * config.buckets_per_decade;
    const int b = static_cast<int>(std::floor(pos));
    return std::clamp(b, 0, n - 1);
}

double ScanReport::step1_pass_rate() const noexcept { return rate(step1_failures, accepted); }
double ScanReport::step2_pass_rate() const noexcept { return rate(step2_failures, accepted); }
double ScanReport::step1_pass_rate_above_threshold() const noexcept {
    return rate(step1_failures_above_threshold, samples_above_threshold);
}
double ScanReport::step2_pass_rate_above_threshold() const noexcept {
    return rate(step2_failures_above_threshold, samples_above_threshold);
}

ScanReport concavity_scan(const VerifierConfig& config) {
    config.validate();
    const LevelSetSampler sampler(config);
    const auto n = static_cast<std::size_t>(config.samples);
    Partial total = chunked_reduce(
        n, kChunk, empty_partial(config),
        [&](std::size_t begin, std::size_t end) {
            Partial part = empty_partial(config);
            for (std::size_t i = begin; i < end; ++i) {
                const auto index = static_cast<std::int64_t>(i);
                ++part.report.draws;
                if (auto s = sampler.draw(index))
                    scan_sample(config, index, *s, part);
                else
                    ++part.report.rejected;
            }
            return part;
        },
        merge);

    ScanReport report = std::move(total.report);
    const int nb = static_cast<int>(total.buckets.size());
    for (int b = 0; b < nb; ++b) {
        ScanBucket& bucket = total.buckets[static_cast<std::size_t>(b)];
        bucket.lower = config.lambda1_min * std::pow(10.0, static_cast<double>(b) / config.buckets_per_decade);
        bucket.upper = std::min(config.lambda1_max,
                                config.lambda1_min * std::pow(10.0, static_cast<double>(b + 1) / config.buckets_per_decade));
        report.psd_violations += bucket.psd_violations;
        report.step1_failures += bucket.step1_failures;
        report.step2_failures += bucket.step2_failures;
    }
    int first_clean = nb;
    while (first_clean > 0 && total.buckets[static_cast<std::size_t>(first_clean - 1)].psd_violations == 0) --first_clean;
    if (first_clean < nb) {
        report.threshold_found = true;
        report.threshold_bucket = first_clean;
        report.threshold_lambda1 = total.buckets[static_cast<std::size_t>(first_clean)].lower;
        for (int b = first_clean; b < nb; ++b) {
            const ScanBucket& bucket = total.buckets[static_cast<std::size_t>(b)];
            report.samples_above_threshold += bucket.samples;
            report.psd_violations_above_threshold += bucket.psd_violations;
            report.step1_failures_above_threshold += bucket.step1_failures;
            report.step2_failures_above_threshold += bucket.step2_failures;
        }
    }
    report.buckets = std::move(total.buckets);
    return report;
}

} // namespace monge2
