#include "monge2/spectral.hpp"

#include "monge2/errors.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <cmath>
#include <string>

namespace monge2 {

namespace {

constexpr std::size_t third_index(std::size_t p, std::size_t q) noexcept { return 3 - p - q; }

} // namespace

SymMatrix3 SymMatrix3::from_dense(const Mat3& m) noexcept {
    return {m[0][0], 0.5 * (m[0][1] + m[1][0]), 0.5 * (m[0][2] + m[2][0]),
            m[1][1], 0.5 * (m[1][2] + m[2][1]), m[2][2]};
}

double SymMatrix3::operator()(int i, int j) const noexcept {
    if (i > j) std::swap(i, j);
    switch (i * 3 + j) {
    case 0: return xx;
    case 1: return xy;
    case 2: return xz;
    case 4: return yy;
    case 5: return yz;
    default: return zz;
    }
}

double& SymMatrix3::at(int i, int j) noexcept {
    if (i > j) std::swap(i, j);
    switch (i * 3 + j) {
    case 0: return xx;
    case 1: return xy;
    case 2: return xz;
    case 4: return yy;
    case 5: return yz;
    default: return zz;
    }
}

double SymMatrix3::determinant() const noexcept {
    return xx * (yy * zz - yz * yz) - xy * (xy * zz - yz * xz) + xz * (xy * yz - yy * xz);
}

double SymMatrix3::frobenius_norm() const noexcept {
    return std::sqrt(xx * xx + yy * yy + zz * zz + 2.0 * (xy * xy + xz * xz + yz * yz));
}

bool SymMatrix3::is_finite() const noexcept {
    return std::isfinite(xx) && std::isfinite(xy) && std::isfinite(xz) && std::isfinite(yy) &&
           std::isfinite(yz) && std::isfinite(zz);
}

Mat3 SymMatrix3::dense() const noexcept {
    return {{{xx, xy, xz}, {xy, yy, yz}, {xz, yz, zz}}};
}

SymMatrix3& SymMatrix3::operator+=(const SymMatrix3& o) noexcept {
    xx += o.xx; xy += o.xy; xz += o.xz; yy += o.yy; yz += o.yz; zz += o.zz;
    return *this;
}

SymMatrix3& SymMatrix3::operator-=(const SymMatrix3& o) noexcept {
    xx -= o.xx; xy -= o.xy; xz -= o.xz; yy -= o.yy; yz -= o.yz; zz -= o.zz;
    return *this;
}

SymMatrix3& SymMatrix3::operator*=(double s) noexcept {
    xx *= s; xy *= s; xz *= s; yy *= s; yz *= s; zz *= s;
    return *this;
}

Spectrum Spectrum::from_values(double a, double b, double c) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c))
        throw InputError("spectrum entries must be finite");
    Vec3 v{a, b, c};
    std::sort(v.begin(), v.end(), std::greater<>());
    Spectrum s;
    s.lambda_ = v;
    s.pair_ = {v[1] + v[2], v[0] + v[2], v[0] + v[1]};
    s.sigma1_ = v[0] + v[1] + v[2];
    return s;
}

Spectrum Spectrum::from_level_set(double l1, double l2, double pair23) {
    if (!std::isfinite(l1) || !std::isfinite(l2) || !std::isfinite(pair23))
        throw InputError("spectrum entries must be finite");
    const double l3 = pair23 - l2;
    if (l2 > l1 || l3 > l2) throw InputError("level-set spectrum is not descending");
    Spectrum s;
    s.lambda_ = {l1, l2, l3};
    s.pair_ = {pair23, (l1 - l2) + pair23, l1 + l2};
    s.sigma1_ = l1 + pair23;
    return s;
}

double Spectrum::sigma_plus(std::size_t i) const noexcept {
    // sigma1 + lambda_i = (lambda_i + lambda_j) + (lambda_i + lambda_k)
    double acc = 0.0;
    for (std::size_t j = 0; j < 3; ++j)
        if (j != i) acc += pair_[j];
    return acc;
}

Spectrum Spectrum::scaled(double t) const {
    if (!(t > 0.0) || !std::isfinite(t)) throw InputError("scale factor must be positive");
    Spectrum s = *this;
    for (auto& v : s.lambda_) v *= t;
    for (auto& v : s.pair_) v *= t;
    s.sigma1_ *= t;
    return s;
}

ConeSpec ConeSpec::gamma(int k) {
    if (k < 1 || k > 3) throw InputError("GammaK requires 1 <= k <= 3, got " + std::to_string(k));
    return {Kind::GammaK, k};
}

double m_p_value(std::span<const double> lambda, int p) {
    const auto n = static_cast<int>(lambda.size());
    if (n < 1 || n > 24) throw InputError("m_p_value supports 1 <= n <= 24");
    if (p < 1 || p > n) throw InputError("m_p_value requires 1 <= p <= n");
    for (double v : lambda)
        if (!std::isfinite(v)) throw InputError("m_p_value entries must be finite");
    double product = 1.0;
    const std::uint32_t limit = 1u << n;
    for (std::uint32_t mask = 0; mask < limit; ++mask) {
        if (std::popcount(mask) != static_cast<int>(p)) continue;
        double sum = 0.0;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) sum += lambda[static_cast<std::size_t>(i)];
        product *= sum;
    }
    return product;
}

double m_p_value(const Spectrum& lambda, int p, int n) {
    if (n != 3) throw InputError("a Spectrum always has three entries");
    if (p == 2) {
        // Pairwise sums are carried by the spectrum; reuse them.
        return lambda.pair_sum_without(0) * lambda.pair_sum_without(1) * lambda.pair_sum_without(2);
    }
    return m_p_value(std::span<const double>(lambda.values()), p);
}

double m2_det_form(const SymMatrix3& m) {
    if (!m.is_finite()) throw InputError("matrix entries must be finite");
    const double t = m.trace();
    return (SymMatrix3::diagonal(t, t, t) - m).determinant();
}

SymMatrix3 m2_coefficients(const SymMatrix3& m) {
    if (!m.is_finite()) throw InputError("matrix entries must be finite");
    const double t = m.trace();
    const SymMatrix3 a = SymMatrix3::diagonal(t, t, t) - m;
    SymMatrix3 adj;
    adj.xx = a.yy * a.zz - a.yz * a.yz;
    adj.yy = a.xx * a.zz - a.xz * a.xz;
    adj.zz = a.xx * a.yy - a.xy * a.xy;
    adj.xy = a.xz * a.yz - a.xy * a.zz;
    adj.xz = a.xy * a.yz - a.xz * a.yy;
    adj.yz = a.xy * a.xz - a.xx * a.yz;
    const double ta = adj.trace();
    return SymMatrix3::diagonal(ta, ta, ta) - adj;
}

double m2_directional_derivative(const SymMatrix3& m, const SymMatrix3& direction) {
    const SymMatrix3 c = m2_coefficients(m);
    const SymMatrix3& d = direction;
    return c.xx * d.xx + c.yy * d.yy + c.zz * d.zz + 2.0 * (c.xy * d.xy + c.xz * d.xz + c.yz * d.yz);
}

ConeMembership cone_membership(const Spectrum& lambda, ConeSpec cone, double slack) {
    double margin = 0.0;
    switch (cone.kind) {
    case ConeSpec::Kind::P2:
    case ConeSpec::Kind::P2Half: {
        margin = std::min({lambda.pair_sum_without(0), lambda.pair_sum_without(1),
                           lambda.pair_sum_without(2)});
        if (cone.kind == ConeSpec::Kind::P2Half)
            margin = std::min(margin, lambda.smallest() + 0.5 * lambda.largest());
        break;
    }
    case ConeSpec::Kind::GammaK: {
        if (cone.k < 1 || cone.k > 3) throw InputError("GammaK requires 1 <= k <= 3");
        const auto& v = lambda.values();
        const double s1 = lambda.sigma1();
        const double s2 = v[0] * v[1] + v[0] * v[2] + v[1] * v[2];
        const double s3 = v[0] * v[1] * v[2];
        margin = s1;
        if (cone.k >= 2) margin = std::min(margin, s2);
        if (cone.k >= 3) margin = std::min(margin, s3);
        break;
    }
    }
    return {margin > slack, margin};
}

OperatorJet operator_jet(const Spectrum& lambda) {
    const double n0 = lambda.pair_sum_without(0);
    const double n1 = lambda.pair_sum_without(1);
    const double n2 = lambda.pair_sum_without(2);
    if (!(n0 > 0.0 && n1 > 0.0 && n2 > 0.0))
        throw DomainError("operator_jet requires a spectrum in P2 (all pairwise sums positive)");
    const Vec3 nu{n0, n1, n2};
    const double sigma = lambda.sigma1();

    OperatorJet jet;
    jet.f = n0 * n1 * n2;
    for (std::size_t i = 0; i < 3; ++i) jet.grad[i] = nu[i] * lambda.sigma_plus(i);

    jet.hess.xx = 2.0 * n0;
    jet.hess.yy = 2.0 * n1;
    jet.hess.zz = 2.0 * n2;
    jet.hess.xy = jet.hess.xz = jet.hess.yz = 2.0 * sigma;

    // b_ij = f / (lambda_i + lambda_j)^2 = nu_i nu_j / nu_k.
    auto off = [&](std::size_t i, std::size_t j) { return nu[i] * nu[j] / nu[third_index(i, j)]; };
    jet.b.xy = off(0, 1);
    jet.b.xz = off(0, 2);
    jet.b.yz = off(1, 2);
    jet.b.xx = jet.b.xy + jet.b.xz;
    jet.b.yy = jet.b.xy + jet.b.yz;
    jet.b.zz = jet.b.xz + jet.b.yz;
    return jet;
}

double divided_difference(const Spectrum& lambda, std::size_t p, std::size_t q) noexcept {
    if (p == q) return -2.0 * lambda[p];
    return -lambda.pair_sum_without(third_index(p, q));
}

double second_contraction(const Spectrum& lambda, const SymMatrix3& eta) {
    const OperatorJet jet = operator_jet(lambda);
    double diag = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) diag += jet.hess(i, j) * eta(i, i) * eta(j, j);
    double offdiag = 0.0;
    for (std::size_t p = 0; p < 3; ++p)
        for (std::size_t q = 0; q < 3; ++q)
            if (p != q) {
                const double e = eta(static_cast<int>(p), static_cast<int>(q));
                offdiag += divided_difference(lambda, p, q) * e * e;
            }
    return diag + offdiag;
}

} // namespace monge2
