#include "extended_jet.hpp"

#include <quadmath.h>

namespace monge2::detail {

quad quad_abs(quad x) noexcept { return fabsq(x); }
quad quad_sqrt(quad x) noexcept { return sqrtq(x); }

double relative_gap(quad a, quad b) noexcept {
    const quad scale = fmaxq(fabsq(a), fabsq(b));
    if (scale == 0) return 0.0;
    return static_cast<double>(fabsq(a - b) / scale);
}

QuadJet quad_jet(const Spectrum& lambda) {
    QuadJet j;
    // The pairwise sums are authoritative: lambda3 is rebuilt from nu_1 so the
    // quad values are exactly consistent with the double representation.
    const quad l1 = lambda[0];
    const quad l2 = lambda[1];
    const quad n1 = lambda.pair_sum_without(0);
    const quad l3 = n1 - l2;
    j.lambda = {l1, l2, l3};
    j.nu = {n1, l1 + l3, l1 + l2};
    j.sigma = l1 + n1;
    j.f = j.nu[0] * j.nu[1] * j.nu[2];
    for (int i = 0; i < 3; ++i) {
        quad plus = 0;
        for (int k = 0; k < 3; ++k)
            if (k != i) plus += j.nu[k];
        j.grad[i] = j.nu[i] * plus;
        for (int k = 0; k < 3; ++k) j.hess[i][k] = (i == k) ? 2 * j.nu[i] : 2 * j.sigma;
    }
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            if (i != k) j.b[i][k] = j.nu[i] * j.nu[k] / j.nu[3 - i - k];
    for (int i = 0; i < 3; ++i) {
        quad row = 0;
        for (int k = 0; k < 3; ++k)
            if (k != i) row += j.b[i][k];
        j.b[i][i] = row;
    }
    return j;
}

QuadForm quad_reduced_form(const QuadJet& j, double delta) {
    const quad d = delta;
    const quad l1 = j.lambda[0];
    const quad F1 = j.grad[0];
    auto entry = [&](int p, int q) {
        const quad Fp = j.grad[p];
        const quad Fq = j.grad[q];
        quad a = j.hess[p][0] * Fq / F1 + j.hess[0][q] * Fp / F1 - j.hess[0][0] * Fp * Fq / (F1 * F1) -
                 d * Fp * Fq / (l1 * F1) - j.hess[p][q];
        if (p == q) a += 2 * Fp / (l1 - j.lambda[p]);
        return a;
    };
    QuadForm out;
    out.a22 = entry(1, 1);
    out.a33 = entry(2, 2);
    out.a23 = (entry(1, 2) + entry(2, 1)) / 2;
    out.frobenius = sqrtq(out.a22 * out.a22 + out.a33 * out.a33 + 2 * out.a23 * out.a23);
    const quad mean = (out.a22 + out.a33) / 2;
    const quad half_gap = (out.a22 - out.a33) / 2;
    const quad radius = sqrtq(half_gap * half_gap + out.a23 * out.a23);
    if (mean > 0) {
        const quad top = mean + radius;
        out.min_eig = (out.a22 * out.a33 - out.a23 * out.a23) / top;
    } else {
        out.min_eig = mean - radius;
    }
    return out;
}

} // namespace monge2::detail
