#include "monge2/errors.hpp"
#include "monge2/random.hpp"
#include "monge2/spectral.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

namespace monge2 {
namespace {

double rel(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

SymMatrix3 random_symmetric(CounterRng& rng, double scale = 1.0) {
    SymMatrix3 m;
    m.xx = rng.uniform(-scale, scale);
    m.xy = rng.uniform(-scale, scale);
    m.xz = rng.uniform(-scale, scale);
    m.yy = rng.uniform(-scale, scale);
    m.yz = rng.uniform(-scale, scale);
    m.zz = rng.uniform(-scale, scale);
    return m;
}

Spectrum random_p2(CounterRng& rng) {
    for (;;) {
        const Spectrum s = Spectrum::from_values(rng.uniform(-3, 5), rng.uniform(-3, 5), rng.uniform(-3, 5));
        if (s.pair_sum_without(0) > 0.05) return s;
    }
}

TEST(Operator, PairwiseProductOnOnes) {
    const double ones[] = {1.0, 1.0, 1.0};
    EXPECT_EQ(m_p_value(ones, 2), 8.0);
    EXPECT_EQ(m_p_value(Spectrum::from_values(1, 1, 1), 2), 8.0);
}

TEST(Operator, EndpointsAreDeterminantAndLaplacian) {
    const double l[] = {2.0, 3.0, 5.0};
    EXPECT_EQ(m_p_value(l, 1), 30.0);
    EXPECT_EQ(m_p_value(l, 3), 10.0);
    EXPECT_EQ(m_p_value(l, 2), 5.0 * 7.0 * 8.0);
}

TEST(Operator, RejectsBadOrder) {
    const double l[] = {1.0, 2.0, 3.0};
    EXPECT_THROW(m_p_value(l, 0), InputError);
    EXPECT_THROW(m_p_value(l, 4), InputError);
}

TEST(Operator, CubicHomogeneity) {
    CounterRng rng(3, 0);
    for (int i = 0; i < 200; ++i) {
        const Spectrum s = random_p2(rng);
        const double t = rng.uniform(0.1, 10.0);
        EXPECT_LT(rel(m_p_value(s.scaled(t), 2), t * t * t * m_p_value(s, 2)), 1e-13);
    }
}

TEST(DetForm, MatchesEigenvaluePathOnRandomMatrices) {
    for (std::uint64_t i = 0; i < 2000; ++i) {
        CounterRng rng(11, i);
        const SymMatrix3 m = random_symmetric(rng, 2.0);
        const double det = m2_det_form(m);
        const double eig = m_p_value(eig_sym3(m).spectrum, 2);
        // Scale-aware: the product can cancel far below its factors.
        const double scale = std::pow(m.frobenius_norm(), 3);
        EXPECT_LE(std::abs(det - eig), 1e-13 * scale) << i;
    }
}

TEST(DetForm, DiagonalIsPairProduct) {
    EXPECT_DOUBLE_EQ(m2_det_form(SymMatrix3::diagonal(0.5, 0.5, 0.5)), 1.0);
    EXPECT_DOUBLE_EQ(m2_det_form(SymMatrix3::diagonal(1, 1, 1)), 8.0);
}

TEST(Eigen, ReconstructsAndOrders) {
    for (std::uint64_t i = 0; i < 2000; ++i) {
        CounterRng rng(12, i);
        const SymMatrix3 m = random_symmetric(rng);
        const EigenDecomposition e = eig_sym3(m);
        EXPECT_GE(e.spectrum[0], e.spectrum[1]);
        EXPECT_GE(e.spectrum[1], e.spectrum[2]);
        Mat3 back{};
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b)
                for (std::size_t k = 0; k < 3; ++k)
                    back[a][b] += e.rotation[k][a] * e.spectrum[k] * e.rotation[k][b];
        EXPECT_LT((SymMatrix3::from_dense(back) - m).frobenius_norm(), 1e-13 * std::max(1.0, m.frobenius_norm()));
        const Spectrum only = eigenvalues_sym3(m);
        for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(only[k], e.spectrum[k], 1e-13 * m.frobenius_norm());
    }
}

TEST(Eigen, RepeatedAndDiagonal) {
    const Spectrum s = eigenvalues_sym3(SymMatrix3::diagonal(2, 2, 2));
    EXPECT_EQ(s[0], 2.0);
    EXPECT_EQ(s[2], 2.0);
    const EigenDecomposition e = eig_sym3(SymMatrix3::diagonal(1, 3, 3));
    EXPECT_NEAR(e.spectrum[0], 3.0, 1e-15);
    EXPECT_NEAR(e.spectrum[2], 1.0, 1e-15);
}

TEST(Cone, Nesting) {
    for (std::uint64_t i = 0; i < 20000; ++i) {
        CounterRng rng(13, i);
        const Spectrum s = Spectrum::from_values(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
        const bool g3 = cone_membership(s, ConeSpec::gamma(3)).inside;
        const bool g2 = cone_membership(s, ConeSpec::gamma(2)).inside;
        const bool g1 = cone_membership(s, ConeSpec::gamma(1)).inside;
        const bool p2 = cone_membership(s, ConeSpec::p2()).inside;
        const bool half = cone_membership(s, ConeSpec::p2_half()).inside;
        if (g3) EXPECT_TRUE(g2);
        if (g2) EXPECT_TRUE(g1);
        if (g2) EXPECT_TRUE(p2);
        if (half) EXPECT_TRUE(p2);
        if (p2) EXPECT_TRUE(g1);
    }
}

TEST(Cone, Examples) {
    EXPECT_TRUE(cone_membership(Spectrum::from_values(1, 1, -0.5), ConeSpec::p2()).inside);
    EXPECT_FALSE(cone_membership(Spectrum::from_values(1, 1, -1), ConeSpec::p2()).inside);
    EXPECT_TRUE(cone_membership(Spectrum::from_values(2, 1, -0.9), ConeSpec::p2_half()).inside);
    EXPECT_FALSE(cone_membership(Spectrum::from_values(2, 1.5, -1.2), ConeSpec::p2_half()).inside);
    EXPECT_THROW(ConeSpec::gamma(4), InputError);
}

TEST(Jet, ClosedForms) {
    const Spectrum s = Spectrum::from_values(3, 2, -1);
    const OperatorJet j = operator_jet(s);
    const double sigma = 4.0;
    EXPECT_DOUBLE_EQ(j.f, 5.0 * 2.0 * 1.0);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_DOUBLE_EQ(j.grad[i], sigma * sigma - s[i] * s[i]);
        EXPECT_DOUBLE_EQ(j.hess(static_cast<int>(i), static_cast<int>(i)), 2.0 * (sigma - s[i]));
    }
    EXPECT_DOUBLE_EQ(j.hess(0, 1), 2.0 * sigma);
}

TEST(Jet, OutsideP2Throws) {
    EXPECT_THROW(operator_jet(Spectrum::from_values(1, 1, -2)), DomainError);
}

TEST(Jet, DividedDifferenceMatchesGradientQuotient) {
    CounterRng rng(14, 0);
    for (int n = 0; n < 500; ++n) {
        const Spectrum s = random_p2(rng);
        const OperatorJet j = operator_jet(s);
        for (std::size_t p = 0; p < 3; ++p)
            for (std::size_t q = 0; q < 3; ++q) {
                if (p == q || std::abs(s[p] - s[q]) < 1e-3) continue;
                const double quotient = (j.grad[p] - j.grad[q]) / (s[p] - s[q]);
                EXPECT_NEAR(divided_difference(s, p, q), quotient, 1e-9 * std::max(1.0, std::abs(quotient)));
            }
    }
}

// Directional derivative from the adjugate coefficients against a Richardson-extrapolated difference quotient.
TEST(Linearization, MatchesDifferenceQuotient) {
    for (std::uint64_t i = 0; i < 1000; ++i) {
        CounterRng rng(15, i);
        const SymMatrix3 a = random_symmetric(rng, 2.0);
        const SymMatrix3 b = random_symmetric(rng, 1.0);
        const double s = 1e-3;
        const auto quotient = [&](double t) { return (m2_det_form(a + t * b) - m2_det_form(a - t * b)) / (2 * t); };
        const double extrapolated = (4.0 * quotient(s / 2) - quotient(s)) / 3.0;
        const double exact = m2_directional_derivative(a, b);
        const double scale = std::max(std::abs(exact), a.frobenius_norm() * a.frobenius_norm() * b.frobenius_norm());
        EXPECT_LE(std::abs(exact - extrapolated), 1e-6 * scale) << i;
    }
}

// In the diagonal frame the second contraction is d^2/ds^2 m2(diag(lambda) + s eta).
TEST(Linearization, SecondContractionIsSecondDerivative) {
    for (std::uint64_t i = 0; i < 500; ++i) {
        CounterRng rng(16, i);
        const Spectrum s = random_p2(rng);
        if (s[0] - s[1] < 1e-2 || s[1] - s[2] < 1e-2) continue;
        const SymMatrix3 eta = random_symmetric(rng);
        const SymMatrix3 d = SymMatrix3::diagonal(s[0], s[1], s[2]);
        const double t = 1e-2;
        // m2 is a cubic polynomial in the entries, so the central second difference is exact up to rounding.
        const double second =
            (m2_det_form(d + t * eta) - 2.0 * m2_det_form(d) + m2_det_form(d - t * eta)) / (t * t);
        const double scale = std::pow(std::max(std::abs(s[0]), 1.0), 1) * eta.frobenius_norm() * eta.frobenius_norm();
        EXPECT_NEAR(second_contraction(s, eta), second, 1e-7 * std::max(1.0, scale)) << i;
    }
}

TEST(Spectrum, PairSumsSurviveCancellation) {
    const Spectrum s = Spectrum::from_level_set(1e6, 0.7, 4e-12);
    EXPECT_EQ(s.pair_sum_without(0), 4e-12);
    EXPECT_GT(m_p_value(s, 2), 0.0);
}

} // namespace
} // namespace monge2
