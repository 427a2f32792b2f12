#pragma once

#include <array>
#include <cstddef>
#include <span>

namespace monge2 {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

/// Symmetric 3x3 matrix stored as its upper triangle.
struct SymMatrix3 {
    double xx = 0.0, xy = 0.0, xz = 0.0, yy = 0.0, yz = 0.0, zz = 0.0;

    static constexpr SymMatrix3 diagonal(double a, double b, double c) noexcept {
        return {a, 0.0, 0.0, b, 0.0, c};
    }
    static constexpr SymMatrix3 identity() noexcept { return diagonal(1.0, 1.0, 1.0); }
    static SymMatrix3 from_dense(const Mat3& m) noexcept;

    double operator()(int i, int j) const noexcept;
    double& at(int i, int j) noexcept;

    double trace() const noexcept { return xx + yy + zz; }
    double determinant() const noexcept;
    double frobenius_norm() const noexcept;
    bool is_finite() const noexcept;
    Mat3 dense() const noexcept;

    SymMatrix3& operator+=(const SymMatrix3& o) noexcept;
    SymMatrix3& operator-=(const SymMatrix3& o) noexcept;
    SymMatrix3& operator*=(double s) noexcept;
    friend SymMatrix3 operator+(SymMatrix3 a, const SymMatrix3& b) noexcept { return a += b; }
    friend SymMatrix3 operator-(SymMatrix3 a, const SymMatrix3& b) noexcept { return a -= b; }
    friend SymMatrix3 operator*(double s, SymMatrix3 a) noexcept { return a *= s; }
    friend bool operator==(const SymMatrix3&, const SymMatrix3&) = default;
};

/// Eigenvalue triple sorted descending.
///
/// Alongside the values the spectrum keeps the three pairwise sums
/// pair_sum_without(i) = sigma1 - lambda_i. On the level set f = 1 the smallest
/// pairwise sum is far below the resolution of the eigenvalues themselves, so
/// every closed form in the library is written in terms of these sums.
class Spectrum {
public:
    Spectrum() = default;

    /// Sorts the values descending; pairwise sums are formed from the values.
    static Spectrum from_values(double a, double b, double c);

    /// Level-set construction from the largest value, the middle value and the
    /// (separately resolved) sum of the two smaller ones. Requires l1 >= l2 and
    /// l2 >= pair23 - l2.
    static Spectrum from_level_set(double l1, double l2, double pair23);

    const Vec3& values() const noexcept { return lambda_; }
    double operator[](std::size_t i) const noexcept { return lambda_[i]; }
    double largest() const noexcept { return lambda_[0]; }
    double smallest() const noexcept { return lambda_[2]; }
    double sigma1() const noexcept { return sigma1_; }

    /// sigma1 - lambda_i, i.e. the sum of the two other eigenvalues.
    double pair_sum_without(std::size_t i) const noexcept { return pair_[i]; }

    /// sigma1 + lambda_i, computed as a sum of two pairwise sums.
    double sigma_plus(std::size_t i) const noexcept;

    Spectrum scaled(double t) const;

    friend bool operator==(const Spectrum&, const Spectrum&) = default;

private:
    Vec3 lambda_{};
    Vec3 pair_{};
    double sigma1_ = 0.0;
};

struct ConeSpec {
    enum class Kind { P2, P2Half, GammaK };
    Kind kind = Kind::P2;
    int k = 2;

    static constexpr ConeSpec p2() noexcept { return {Kind::P2, 2}; }
    static constexpr ConeSpec p2_half() noexcept { return {Kind::P2Half, 2}; }
    /// Throws InputError unless 1 <= k <= 3.
    static ConeSpec gamma(int k);

    friend bool operator==(const ConeSpec&, const ConeSpec&) = default;
};

struct ConeMembership {
    bool inside = false;
    double margin = 0.0;
};

/// First and second eigenvalue derivatives of f = m2 in the diagonal frame.
struct OperatorJet {
    double f = 0.0;
    Vec3 grad{};
    SymMatrix3 hess;
    SymMatrix3 b;
};

struct EigenDecomposition {
    Spectrum spectrum;
    /// Rows are unit eigenvectors: rotation^T diag(lambda) rotation = M.
    Mat3 rotation{};
};

EigenDecomposition eig_sym3(const SymMatrix3& m);

/// Eigenvalues only (no eigenvectors); the hot path of the grid solver.
Spectrum eigenvalues_sym3(const SymMatrix3& m);

/// Product over all p-subsets of the sums of the entries of lambda.
double m_p_value(std::span<const double> lambda, int p);
double m_p_value(const Spectrum& lambda, int p, int n = 3);

/// det(tr(M) I - M), which equals m2 of the eigenvalues of M.
double m2_det_form(const SymMatrix3& m);

/// Coefficients C with d/ds m2(M + sB) = sum_ij C_ij B_ij at s = 0.
SymMatrix3 m2_coefficients(const SymMatrix3& m);
double m2_directional_derivative(const SymMatrix3& m, const SymMatrix3& direction);

ConeMembership cone_membership(const Spectrum& lambda, ConeSpec cone, double slack = 0.0);

/// Throws DomainError outside P2.
OperatorJet operator_jet(const Spectrum& lambda);

/// F^{ij,rs} eta_ij eta_rs in the diagonal frame; the divided difference uses
/// its closed form -(lambda_p + lambda_q).
double second_contraction(const Spectrum& lambda, const SymMatrix3& eta);

/// Divided difference (f_p - f_q)/(lambda_p - lambda_q) = -(lambda_p + lambda_q).
double divided_difference(const Spectrum& lambda, std::size_t p, std::size_t q) noexcept;

} // namespace monge2
