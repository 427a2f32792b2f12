#pragma once

#include "monge2/spectral.hpp"

#include <array>

namespace monge2::detail {

using quad = __float128;

/// Operator jet evaluated in binary128 from the pairwise-sum representation.
struct QuadJet {
    std::array<quad, 3> lambda{};
    std::array<quad, 3> nu{};
    quad sigma = 0;
    quad f = 0;
    std::array<quad, 3> grad{};
    std::array<std::array<quad, 3>, 3> hess{};
    std::array<std::array<quad, 3>, 3> b{};
};

QuadJet quad_jet(const Spectrum& lambda);

/// Reduced form in (xi_2, xi_3) from the literal a_pq expression.
struct QuadForm {
    quad a22 = 0, a23 = 0, a33 = 0;
    quad min_eig = 0;
    quad frobenius = 0;
};

QuadForm quad_reduced_form(const QuadJet& jet, double delta);

quad quad_abs(quad x) noexcept;
quad quad_sqrt(quad x) noexcept;

/// |a - b| / max(|a|, |b|), zero when both vanish.
double relative_gap(quad a, quad b) noexcept;

} // namespace monge2::detail
