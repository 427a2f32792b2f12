#pragma once

#include "monge2/dirichlet.hpp"

#include <array>
#include <numbers>
#include <vector>

namespace monge2 {

struct LiouvilleConfig {
    std::vector<double> radii{2.0, 4.0, 8.0, 16.0};
    /// Quadratic growth u >= c1 |x|^2 - c2 of the boundary data family.
    double c1 = 0.25;
    double c2 = 0.0;
    /// Radius beyond which the growth bound is assumed.
    double r0 = 1.0;
    /// Height of the angular cap on the quadratic data; 0 gives the unperturbed case.
    double amplitude = 1.0;
    double half_angle = std::numbers::pi / 3.0;
    /// Nodes per axis of the fixed unit-ball grid.
    std::int64_t n = 33;
    SolverConfig solver;

    void validate() const;
};

struct LiouvilleRow {
    double radius = 0.0;
    /// max over Hessian entries of (max - min) over |y| < 1/2.
    double osc = 0.0;
    /// xx, xy, xz, yy, yz, zz.
    std::array<double, 6> osc_entries{};
    bool converged = false;
    double final_residual = 0.0;
    int iterations = 0;
    std::string diagnostic;
    /// 2 max|y| over nodes of the sublevel set {v <= 0}.
    double diameter = 0.0;
    double diameter_limit = 0.0;
    bool diameter_ok = false;
};

struct LiouvilleReport {
    std::vector<LiouvilleRow> rows;
    /// Least-squares slope of log osc against log R (NaN with fewer than two positive rows).
    double decay_slope = 0.0;
    bool strictly_decreasing = false;
};

/// Solves M2(D^2 v) = 1 on the unit ball with v = |y|^2/4 - 1 + (A/R^2) cap(angle)
/// on the boundary layer for each R; D^2 v(y) is D^2 u(Ry) of the unscaled problem.
LiouvilleReport liouville_rescaling_scan(const LiouvilleConfig& config);

} // namespace monge2
