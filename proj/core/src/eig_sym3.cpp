#include "monge2/errors.hpp"
#include "monge2/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace monge2 {

namespace {

Vec3 cross(const Vec3& a, const Vec3& b) noexcept {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double dot(const Vec3& a, const Vec3& b) noexcept { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 scale(const Vec3& a, double s) noexcept { return {a[0] * s, a[1] * s, a[2] * s}; }

Vec3 mat_vec(const SymMatrix3& m, const Vec3& v) noexcept {
    return {m.xx * v[0] + m.xy * v[1] + m.xz * v[2], m.xy * v[0] + m.yy * v[1] + m.yz * v[2],
            m.xz * v[0] + m.yz * v[1] + m.zz * v[2]};
}

double max_abs_entry(const SymMatrix3& m) noexcept {
    return std::max({std::abs(m.xx), std::abs(m.xy), std::abs(m.xz), std::abs(m.yy), std::abs(m.yz),
                     std::abs(m.zz)});
}

struct ShiftedRoots {
    double shift = 0.0;
    Vec3 roots{}; // descending, relative to shift
};

// Roots of det(C - y I) = -(y^3 - J y - D) for the traceless part C of m,
// from the trigonometric formula followed by one Newton step each.
ShiftedRoots characteristic_roots(const SymMatrix3& m) noexcept {
    const double q = m.trace() / 3.0;
    SymMatrix3 c = m;
    c.xx -= q;
    c.yy -= q;
    c.zz -= q;
    const double j2 = c.xx * c.xx + c.yy * c.yy + c.zz * c.zz +
                      2.0 * (c.xy * c.xy + c.xz * c.xz + c.yz * c.yz);
    ShiftedRoots out;
    out.shift = q;
    if (j2 == 0.0) return out;
    const double p = std::sqrt(j2 / 6.0);
    const double det = c.determinant();
    const double r = std::clamp(det / (2.0 * p * p * p), -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    constexpr double third_turn = 2.0 * std::numbers::pi / 3.0;
    Vec3 y{2.0 * p * std::cos(phi), 0.0, 2.0 * p * std::cos(phi + third_turn)};
    y[1] = -y[0] - y[2];
    const double jj = 0.5 * j2;
    for (double& root : y) {
        const double slope = 3.0 * root * root - jj;
        if (std::abs(slope) > 1e-8 * jj) root -= (root * root * root - jj * root - det) / slope;
    }
    std::sort(y.begin(), y.end(), std::greater<>());
    out.roots = y;
    return out;
}

// Unit null vector of (m - value I) from the best-conditioned cross product of its rows.
bool null_vector(const SymMatrix3& m, double value, Vec3& out) noexcept {
    const Vec3 r0{m.xx - value, m.xy, m.xz};
    const Vec3 r1{m.xy, m.yy - value, m.yz};
    const Vec3 r2{m.xz, m.yz, m.zz - value};
    const Vec3 c[3] = {cross(r0, r1), cross(r0, r2), cross(r1, r2)};
    std::size_t best = 0;
    double best_norm = dot(c[0], c[0]);
    for (std::size_t i = 1; i < 3; ++i) {
        const double n = dot(c[i], c[i]);
        if (n > best_norm) {
            best_norm = n;
            best = i;
        }
    }
    if (!(best_norm > 0.0)) return false;
    out = scale(c[best], 1.0 / std::sqrt(best_norm));
    return true;
}

void orthonormal_complement(const Vec3& v, Vec3& u, Vec3& w) noexcept {
    if (std::abs(v[0]) > std::abs(v[1])) {
        const double inv = 1.0 / std::sqrt(v[0] * v[0] + v[2] * v[2]);
        u = {-v[2] * inv, 0.0, v[0] * inv};
    } else {
        const double inv = 1.0 / std::sqrt(v[1] * v[1] + v[2] * v[2]);
        u = {0.0, v[2] * inv, -v[1] * inv};
    }
    w = cross(v, u);
}

// Flip so the entry of largest magnitude is positive (first index wins ties).
void canonical_sign(Vec3& v) noexcept {
    std::size_t k = 0;
    for (std::size_t i = 1; i < 3; ++i)
        if (std::abs(v[i]) > std::abs(v[k])) k = i;
    if (v[k] < 0.0) v = scale(v, -1.0);
}

struct EigenPair {
    double value;
    Vec3 vector;
};

} // namespace

Spectrum eigenvalues_sym3(const SymMatrix3& m) {
    if (!m.is_finite()) throw InputError("eig_sym3: matrix entries must be finite");
    const double s = max_abs_entry(m);
    if (s == 0.0) return Spectrum::from_values(0.0, 0.0, 0.0);
    const ShiftedRoots r = characteristic_roots((1.0 / s) * m);
    return Spectrum::from_values(s * (r.shift + r.roots[0]), s * (r.shift + r.roots[1]),
                                 s * (r.shift + r.roots[2]));
}

EigenDecomposition eig_sym3(const SymMatrix3& m) {
    if (!m.is_finite()) throw InputError("eig_sym3: matrix entries must be finite");
    const double s = max_abs_entry(m);
    EigenDecomposition out;
    out.rotation = {{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
    if (s == 0.0) {
        out.spectrum = Spectrum::from_values(0.0, 0.0, 0.0);
        return out;
    }
    const SymMatrix3 b = (1.0 / s) * m;
    const ShiftedRoots r = characteristic_roots(b);

    // Deflate on the eigenvalue farthest from the middle one, then diagonalize
    // the remaining 2x2 block exactly with a single Jacobi rotation.
    const bool top_isolated = (r.roots[0] - r.roots[1]) >= (r.roots[1] - r.roots[2]);
    const double isolated = r.shift + (top_isolated ? r.roots[0] : r.roots[2]);
    Vec3 v{1.0, 0.0, 0.0};
    if (!null_vector(b, isolated, v)) v = {1.0, 0.0, 0.0};
    Vec3 u, w;
    orthonormal_complement(v, u, w);

    const Vec3 bu = mat_vec(b, u);
    const Vec3 bw = mat_vec(b, w);
    const double a11 = dot(u, bu);
    const double a12 = dot(u, bw);
    const double a22 = dot(w, bw);
    Vec3 e1 = u, e2 = w;
    double d1 = a11, d2 = a22;
    if (a12 != 0.0) {
        const double tau = (a22 - a11) / (2.0 * a12);
        const double t = std::copysign(1.0, tau) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * cs;
        d1 = a11 - t * a12;
        d2 = a22 + t * a12;
        for (std::size_t i = 0; i < 3; ++i) {
            e1[i] = cs * u[i] - sn * w[i];
            e2[i] = sn * u[i] + cs * w[i];
        }
    }

    EigenPair pairs[3] = {{dot(v, mat_vec(b, v)), v}, {d1, e1}, {d2, e2}};
    for (auto& p : pairs) canonical_sign(p.vector);
    std::sort(std::begin(pairs), std::end(pairs), [](const EigenPair& x, const EigenPair& y) {
        if (x.value != y.value) return x.value > y.value;
        return x.vector > y.vector;
    });
    out.spectrum = Spectrum::from_values(s * pairs[0].value, s * pairs[1].value, s * pairs[2].value);
    for (std::size_t i = 0; i < 3; ++i) out.rotation[i] = pairs[i].vector;
    return out;
}

} // namespace monge2
