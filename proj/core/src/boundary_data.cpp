#include "monge2/boundary_data.hpp"

#include "monge2/errors.hpp"

#include <algorithm>
#include <cmath>

namespace monge2 {

namespace {

constexpr double kWiggle = 0.01;

double squared_distance(const Vec3& x, const Vec3& c) noexcept {
    const double a = x[0] - c[0], b = x[1] - c[1], d = x[2] - c[2];
    return a * a + b * b + d * d;
}

} // namespace

double cap_profile(double angle, double half_angle) noexcept {
    const double t = angle / half_angle;
    if (!(t < 1.0)) return 0.0;
    // exp(1 - 1/(1 - t^2)): equals 1 at t = 0 and is flat to all orders at t = 1.
    return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

double polar_angle(const Vec3& x, const Vec3& center) noexcept {
    const double dx = x[0] - center[0], dy = x[1] - center[1], dz = x[2] - center[2];
    const double r = std::hypot(dx, dy, dz);
    if (r == 0.0) return 0.0;
    return std::acos(std::clamp(dz / r, -1.0, 1.0));
}

double manufactured_solution(const Vec3& x) noexcept {
    return 0.25 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) +
           kWiggle * std::sin(x[0]) * std::sin(x[1]) * std::sin(x[2]);
}

SymMatrix3 manufactured_hessian(const Vec3& x) noexcept {
    const double s0 = std::sin(x[0]), s1 = std::sin(x[1]), s2 = std::sin(x[2]);
    const double c0 = std::cos(x[0]), c1 = std::cos(x[1]), c2 = std::cos(x[2]);
    SymMatrix3 h;
    h.xx = 0.5 - kWiggle * s0 * s1 * s2;
    h.yy = h.xx;
    h.zz = h.xx;
    h.xy = kWiggle * c0 * c1 * s2;
    h.xz = kWiggle * c0 * s1 * c2;
    h.yz = kWiggle * s0 * c1 * c2;
    return h;
}

double manufactured_rhs(const Vec3& x) { return m2_det_form(manufactured_hessian(x)); }

Problem make_problem(std::string_view name, const BoundaryParams& p) {
    const ScalarFunction one = [](const Vec3&) { return 1.0; };
    if (name == "zero")
        return {"zero", [](const Vec3&) { return 0.0; }, one, std::nullopt};
    if (name == "quadratic") {
        ScalarFunction q = [c = p.center, r2 = p.radius * p.radius](const Vec3& x) {
            return 0.25 * (squared_distance(x, c) - r2);
        };
        return {"quadratic", q, one, q};
    }
    if (name == "quadratic-plus-bump") {
        if (!(p.bump_half_angle > 0.0) || !(p.bump_half_angle <= std::numbers::pi))
            throw InputError("bump half-angle must lie in (0, pi]");
        ScalarFunction g = [p](const Vec3& x) {
            return 0.25 * squared_distance(x, p.center) +
                   p.bump_amplitude * cap_profile(polar_angle(x, p.center), p.bump_half_angle);
        };
        return {"quadratic-plus-bump", g, one, std::nullopt};
    }
    if (name == "manufactured") {
        ScalarFunction u0 = [](const Vec3& x) { return manufactured_solution(x); };
        return {"manufactured", u0, [](const Vec3& x) { return manufactured_rhs(x); }, u0};
    }
    throw InputError("unknown boundary data '" + std::string(name) + "'");
}

std::vector<std::string> problem_names() {
    return {"zero", "quadratic", "quadratic-plus-bump", "manufactured"};
}

} // namespace monge2
