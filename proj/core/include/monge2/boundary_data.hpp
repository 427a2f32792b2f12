#pragma once

#include "monge2/grid.hpp"

#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace monge2 {

struct BoundaryParams {
    Vec3 center{};
    double radius = 1.0;
    /// Height of the angular cap added by quadratic-plus-bump.
    double bump_amplitude = 1.0;
    /// Half-angle of the cap around +e3.
    double bump_half_angle = std::numbers::pi / 3.0;
};

/// Dirichlet data, matching right-hand side and (when known) the exact solution.
struct Problem {
    std::string name;
    ScalarFunction boundary;
    ScalarFunction rhs;
    std::optional<ScalarFunction> exact;
};

/// Registered names: zero, quadratic, quadratic-plus-bump, manufactured.
/// Throws InputError for anything else.
Problem make_problem(std::string_view name, const BoundaryParams& params = {});
std::vector<std::string> problem_names();

/// Smooth cap in [0, 1]: 1 at angle 0, C-infinity, zero for angle >= half_angle.
double cap_profile(double angle, double half_angle) noexcept;

/// Angle between x - center and +e3 (0 at the center itself).
double polar_angle(const Vec3& x, const Vec3& center = {}) noexcept;

/// |x|^2/4 + 0.01 sin x1 sin x2 sin x3 with its exact Hessian and operator value.
double manufactured_solution(const Vec3& x) noexcept;
SymMatrix3 manufactured_hessian(const Vec3& x) noexcept;
double manufactured_rhs(const Vec3& x);

} // namespace monge2
