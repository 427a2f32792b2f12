#include "monge2/concavity.hpp"
#include "monge2/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

namespace monge2 {
namespace {

constexpr double kDelta = 10.0 / 9.0;

double rel(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

// lambda = (l1, t, t) on the level set: (l1 + t)^2 * 2t = 1.
Spectrum twin_tail(double l1) {
    double t = 0.5 / (l1 * l1);
    for (int i = 0; i < 200; ++i) t = 0.5 / ((l1 + t) * (l1 + t));
    return Spectrum::from_level_set(l1, t, 2.0 * t);
}

Spectrum scaled_sample() {
    const Spectrum raw = Spectrum::from_values(1.0, 0.3, 0.2);
    return raw.scaled(std::cbrt(1.0 / m_p_value(raw, 2)));
}

// Oracle values below come from 50-digit mpmath evaluations of the defining displays.
TEST(ReducedForm, TwinTailOracle) {
    const Spectrum s = twin_tail(3.0);
    const QFormReport r = reduced_a_matrix(s, kDelta);
    EXPECT_LT(rel(r.a_matrix[0][0], 84.345654954573408158), 1e-12);
    EXPECT_LT(rel(r.a_matrix[1][1], 84.345654954573408158), 1e-12);
    EXPECT_LT(rel(r.a_matrix[0][1], 77.686582172426861797), 1e-12);
    EXPECT_LT(rel(r.min_eig_a, 6.6590727821465463614), 1e-11);
    const double q = quadratic_form_Q(s, constraint_completion(s, 1.0, -1.0), kDelta);
    EXPECT_LT(rel(q, 13.318145564293092723), 1e-11);
}

TEST(StepDecomposition, ScaledSampleOracle) {
    const Spectrum s = scaled_sample();
    const Step1Terms a = step1_decomposition(s, kDelta);
    const Step2Terms b = step2_decomposition(s, kDelta);
    EXPECT_LT(rel(a.case_v, 7.5411536522149393177), 1e-12);
    EXPECT_LT(rel(a.case_vi, 3.0421624888086696604), 1e-12);
    EXPECT_LT(rel(a.diff, 7.4051353243944805872), 1e-12);
    EXPECT_LT(rel(b.sum, 7.8172865870977819532), 1e-12);
    EXPECT_TRUE(a.dominant());
    EXPECT_TRUE(b.dominant());
}

TEST(StepDecomposition, SeventhTermLimit) {
    const Step2Terms b = step2_decomposition(twin_tail(1000.0), kDelta);
    EXPECT_LT(rel(b.case_vii, 2.7777777719999999946), 1e-9);
}

TEST(StepDecomposition, RequiresLevelSet) {
    EXPECT_THROW(step2_decomposition(Spectrum::from_values(3, 2, 1), kDelta), PreconditionError);
}

TEST(ReducedForm, DegenerateTopThrows) {
    const Spectrum s = Spectrum::from_values(2, 2, 1);
    EXPECT_THROW(quadratic_form_Q(s, {{0, 1, 0}}, kDelta), DegeneracyError);
}

TEST(SignCase, Patterns) {
    EXPECT_EQ(sign_case(Spectrum::from_values(3, 2, 1), Pivot::Second), 1);
    EXPECT_EQ(sign_case(Spectrum::from_values(3, 2, -1), Pivot::Second), 3);
    EXPECT_EQ(sign_case(Spectrum::from_values(3, 2, -1), Pivot::Third), 2);
}

class LevelSetProperty : public ::testing::Test {
protected:
    static SampleBatch batch() {
        VerifierConfig c;
        c.samples = 20000;
        c.seed = 7;
        return sample_level_set(c);
    }
};

TEST_F(LevelSetProperty, SamplerInvariants) {
    VerifierConfig c;
    c.samples = 20000;
    const SampleBatch b = batch();
    EXPECT_EQ(b.draws, 20000);
    EXPECT_EQ(b.draws, static_cast<std::int64_t>(b.spectra.size()) + b.rejected);
    EXPECT_GT(b.spectra.size(), 5000u);
    for (const Spectrum& s : b.spectra) {
        EXPECT_LE(std::abs(m_p_value(s, 2) - 1.0), 1e-10);
        EXPECT_TRUE(cone_membership(s, ConeSpec::p2_half()).inside);
        EXPECT_GE(s[0], c.lambda1_min);
        EXPECT_LE(s[0], c.lambda1_max);
        EXPECT_GE(s[0], s[1]);
        EXPECT_GE(s[1], s[2]);
    }
}

TEST_F(LevelSetProperty, SamplerIsCounterBased) {
    VerifierConfig c;
    c.seed = 7;
    const LevelSetSampler a(c), b(c);
    for (std::int64_t i = 0; i < 1000; ++i) {
        const auto x = a.draw(i), y = b.draw(i);
        ASSERT_EQ(x.has_value(), y.has_value());
        if (x) EXPECT_EQ(*x, *y);
    }
}

// Two routes to Q: the defining display on the completed xi, and the reduced 2x2 form.
TEST_F(LevelSetProperty, QuadraticFormTwoPaths) {
    const SampleBatch b = batch();
    for (std::size_t i = 0; i < b.spectra.size(); i += 7) {
        const Spectrum& s = b.spectra[i];
        if (s[0] == s[1]) continue;
        const QFormReport r = reduced_a_matrix(s, kDelta);
        for (const auto& [x2, x3] : {std::pair{1.0, 0.0}, std::pair{0.0, 1.0}, std::pair{1.0, -1.0},
                                     std::pair{0.3, 0.8}}) {
            const double q = quadratic_form_Q(s, constraint_completion(s, x2, x3), kDelta);
            const auto& a = r.a_matrix;
            const double reduced = a[0][0] * x2 * x2 + 2 * a[0][1] * x2 * x3 + a[1][1] * x3 * x3;
            EXPECT_LE(std::abs(q - reduced), kCrossCheckTolerance * r.frobenius_a * (x2 * x2 + x3 * x3)) << i;
        }
    }
}

TEST_F(LevelSetProperty, PsdMatchesQuadraticFormSign) {
    const SampleBatch b = batch();
    for (std::size_t i = 0; i < b.spectra.size(); i += 11) {
        const Spectrum& s = b.spectra[i];
        const QFormReport r = reduced_a_matrix(s, kDelta);
        if (!r.psd(1e-10)) continue;
        for (int k = 0; k < 16; ++k) {
            const double th = k * 3.141592653589793 / 16;
            const double q = quadratic_form_Q(s, constraint_completion(s, std::cos(th), std::sin(th)), kDelta);
            EXPECT_GE(q, -kCrossCheckTolerance * r.frobenius_a) << i;
        }
    }
}

TEST_F(LevelSetProperty, IdentityLedger) {
    const SampleBatch b = batch();
    for (const Spectrum& s : b.spectra) {
        const QFormReport r = qform_report(s, kDelta);
        for (const auto& st : r.step1) {
            EXPECT_LE(st.pair_identity_residual, kIdentityTolerance);
            EXPECT_LE(st.delta_identity_residual, kIdentityTolerance);
            EXPECT_LE(st.split_identity_residual, kIdentityTolerance);
        }
        EXPECT_LE(r.step2_identity_residual, kIdentityTolerance);
        EXPECT_LE(r.b11_identity_residual, kIdentityTolerance);
        EXPECT_LE(r.step_crosscheck_residual, kCrossCheckTolerance);
    }
}

TEST_F(LevelSetProperty, LemmaBounds) {
    const SampleBatch b = batch();
    const LemmaKey2Report k = verify_lemma_key2(b.spectra);
    EXPECT_EQ(k.violations, 0);
    EXPECT_LE(k.max_ratio, 1.0);
    for (const Spectrum& s : b.spectra) {
        EXPECT_TRUE(verify_trace_lower_bound(s));
        if (s[0] > s[1]) EXPECT_TRUE(verify_divided_difference_bound(s, 6.0));
    }
}

TEST(Lemma, OffLevelSetThrows) {
    const Spectrum s = Spectrum::from_values(3, 2, 1);
    EXPECT_THROW(verify_lemma_key2(std::span<const Spectrum>(&s, 1)), PreconditionError);
    EXPECT_THROW(verify_trace_lower_bound(s), PreconditionError);
}

TEST(Lemma, DividedDifferenceWitnesses) {
    EXPECT_FALSE(verify_divided_difference_bound(Spectrum::from_values(2.0, 1.5, -1.000001), 6.0));
    EXPECT_TRUE(verify_divided_difference_bound(Spectrum::from_values(2.0, 1.0, -0.9), 6.0));
    EXPECT_THROW(verify_divided_difference_bound(Spectrum::from_values(2.0, 1.0, -0.9), 5.0), PreconditionError);
}

TEST(Scan, IndependentOfWorkerCount) {
    VerifierConfig c;
    c.samples = 20000;
    c.row_stride = 97;
    ::setenv("MONGE2_THREADS", "1", 1);
    const ScanReport one = concavity_scan(c);
    ::setenv("MONGE2_THREADS", "4", 1);
    const ScanReport four = concavity_scan(c);
    ::unsetenv("MONGE2_THREADS");
    EXPECT_EQ(one.accepted, four.accepted);
    EXPECT_EQ(one.global_min_eig_ratio, four.global_min_eig_ratio);
    EXPECT_EQ(one.threshold_bucket, four.threshold_bucket);
    ASSERT_EQ(one.rows.size(), four.rows.size());
    for (std::size_t i = 0; i < one.rows.size(); ++i) EXPECT_EQ(one.rows[i].min_eig_a, four.rows[i].min_eig_a);
}

TEST(Scan, SmallRunPassesAboveThreshold) {
    VerifierConfig c;
    c.samples = 30000;
    const ScanReport r = concavity_scan(c);
    EXPECT_TRUE(r.threshold_found);
    EXPECT_EQ(r.psd_violations_above_threshold, 0);
    EXPECT_EQ(r.step1_failures_above_threshold, 0);
    EXPECT_EQ(r.step2_failures_above_threshold, 0);
    EXPECT_EQ(r.identity_failures, 0);
}

TEST(Config, Validation) {
    VerifierConfig c;
    c.epsilon = 0.0;
    EXPECT_THROW(c.validate(), InputError);
    c = {};
    c.lambda1_min = 2.0;
    c.lambda1_max = 1.0;
    EXPECT_THROW(c.validate(), InputError);
    c = {};
    c.samples = 0;
    EXPECT_THROW(concavity_scan(c), InputError);
}

} // namespace
} // namespace monge2
