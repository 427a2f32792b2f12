#include "monge2/liouville.hpp"

#include "monge2/boundary_data.hpp"
#include "monge2/errors.hpp"

#include <cmath>
#include <limits>

namespace monge2 {

void LiouvilleConfig::validate() const {
    if (radii.empty()) throw InputError("liouville scan needs at least one radius");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0)) throw InputError("radii must be positive");
        if (i > 0 && !(radii[i] > radii[i - 1])) throw InputError("radii must be strictly increasing");
    }
    if (!(c1 > 0.0)) throw InputError("c1 must be positive");
    if (!(c2 >= 0.0)) throw InputError("c2 must be non-negative");
    if (!(amplitude >= 0.0)) throw InputError("bump amplitude must be non-negative");
    solver.validate();
}

LiouvilleReport liouville_rescaling_scan(const LiouvilleConfig& config) {
    config.validate();
    const GridField shell = GridField::ball(config.n, 1.0);
    LiouvilleReport report;

    for (double radius : config.radii) {
        SolverConfig sc = config.solver;
        const double scaled = config.amplitude / (radius * radius);
        const double half_angle = config.half_angle;
        sc.rhs = [](const Vec3&) { return 1.0; };
        sc.boundary = [scaled, half_angle](const Vec3& y) {
            return 0.25 * (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]) - 1.0 +
                   scaled * cap_profile(polar_angle(y), half_angle);
        };
        const Solution sol = solve_dirichlet(sc, shell);

        LiouvilleRow row;
        row.radius = radius;
        row.converged = sol.report.converged;
        row.final_residual = sol.report.final_residual;
        row.iterations = sol.report.iterations;
        row.diagnostic = sol.report.diagnostic;

        std::array<double, 6> lo, hi;
        lo.fill(std::numeric_limits<double>::infinity());
        hi.fill(-std::numeric_limits<double>::infinity());
        for (std::size_t node : shell.interior_nodes()) {
            const Vec3 y = shell.position(node);
            if (std::hypot(y[0], y[1], y[2]) >= 0.5) continue;
            const SymMatrix3 h = hessian_unchecked(sol.field, node);
            const std::array<double, 6> e{h.xx, h.xy, h.xz, h.yy, h.yz, h.zz};
            for (std::size_t k = 0; k < 6; ++k) {
                lo[k] = std::min(lo[k], e[k]);
                hi[k] = std::max(hi[k], e[k]);
            }
        }
        for (std::size_t k = 0; k < 6; ++k) {
            row.osc_entries[k] = hi[k] - lo[k];
            row.osc = std::max(row.osc, row.osc_entries[k]);
        }

        double reach = 0.0;
        for (std::size_t node : shell.interior_nodes())
            if (sol.field[node] <= 0.0) {
                const Vec3 y = shell.position(node);
                reach = std::max(reach, std::hypot(y[0], y[1], y[2]));
            }
        row.diameter = 2.0 * reach;
        row.diameter_limit = std::max(config.r0 / radius, (config.c2 + 1.0) / config.c1);
        row.diameter_ok = row.diameter <= row.diameter_limit;
        report.rows.push_back(std::move(row));
    }

    report.strictly_decreasing = true;
    for (std::size_t i = 1; i < report.rows.size(); ++i)
        if (!(report.rows[i].osc < report.rows[i - 1].osc)) report.strictly_decreasing = false;

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (const auto& row : report.rows) {
        if (!(row.osc > 0.0)) continue;
        const double x = std::log(row.radius), y = std::log(row.osc);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    const double denom = m * sxx - sx * sx;
    report.decay_slope = m >= 2 && denom > 0.0 ? (m * sxy - sx * sy) / denom
                                               : std::numeric_limits<double>::quiet_NaN();
    return report;
}

} // namespace monge2
