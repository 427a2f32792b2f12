#include "monge2/dirichlet.hpp"

#include "monge2/errors.hpp"
#include "monge2/parallel.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace monge2 {

namespace {

constexpr std::size_t kChunk = 2048;

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, std::int64_t>;

std::vector<double> sample_rhs(const GridField& field, const SolverConfig& config) {
    const auto& nodes = field.interior_nodes();
    std::vector<double> g(nodes.size());
    for_each_chunk(nodes.size(), kChunk, [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) g[i] = config.rhs(field.position(nodes[i]));
    });
    for (std::size_t i = 0; i < g.size(); ++i)
        if (!(g[i] > 0.0) || !std::isfinite(g[i]))
            throw InputError("right-hand side must be positive and finite at every interior node");
    return g;
}

std::vector<double> residual_with(const GridField& field, const std::vector<double>& g) {
    const auto& nodes = field.interior_nodes();
    std::vector<double> r(nodes.size());
    for_each_chunk(nodes.size(), kChunk, [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const SymMatrix3 h = hessian_unchecked(field, nodes[i]);
            r[i] = std::isfinite(h.xx + h.xy + h.xz + h.yy + h.yz + h.zz)
                       ? m2_det_form(h) - g[i]
                       : std::numeric_limits<double>::infinity();
        }
    });
    return r;
}

struct MarginScan {
    double margin = std::numeric_limits<double>::infinity();
    std::size_t node = 0;
};

MarginScan scan_margin(const GridField& field, const ConeSpec& cone) {
    const auto& nodes = field.interior_nodes();
    return chunked_reduce(
        nodes.size(), kChunk, MarginScan{},
        [&](std::size_t b, std::size_t e) {
            MarginScan m;
            for (std::size_t i = b; i < e; ++i) {
                const SymMatrix3 h = hessian_unchecked(field, nodes[i]);
                const double margin =
                    h.is_finite() ? cone_membership(eigenvalues_sym3(h), cone).margin
                                  : -std::numeric_limits<double>::infinity();
                if (margin < m.margin) m = {margin, nodes[i]};
            }
            return m;
        },
        [](MarginScan a, MarginScan b) { return b.margin < a.margin ? b : a; });
}

struct LinearSystem {
    SparseRowMatrix matrix;
    /// Stencil weights applied to a prescribed boundary increment, per row.
    Eigen::VectorXd boundary_lift;
};

// Rows are the m2 linearization sum C_ii u_ii + 2 sum C_ij u_ij on the 19-point
// stencil; boundary columns move into boundary_lift when an increment is given.
LinearSystem assemble_system(const GridField& field, const std::vector<double>* boundary_increment) {
    const auto& nodes = field.interior_nodes();
    std::vector<std::int64_t> unknown(field.size(), -1);
    for (std::size_t i = 0; i < nodes.size(); ++i) unknown[nodes[i]] = static_cast<std::int64_t>(i);

    const Index3& ext = field.extents();
    const std::array<std::int64_t, 3> stride{1, ext[0], ext[0] * ext[1]};
    const Vec3& h = field.spacing();

    constexpr std::size_t kWidth = 19;
    std::vector<std::array<std::int64_t, kWidth>> cols(nodes.size());
    std::vector<std::array<double, kWidth>> vals(nodes.size());
    std::vector<std::uint8_t> count(nodes.size());
    LinearSystem sys;
    sys.boundary_lift = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nodes.size()));

    for_each_chunk(nodes.size(), kChunk, [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const auto n = static_cast<std::int64_t>(nodes[i]);
            const SymMatrix3 c = m2_coefficients(hessian_unchecked(field, nodes[i]));
            std::uint8_t k = 0;
            double lift = 0.0;
            auto put = [&](std::int64_t nb, double w) {
                const auto at = static_cast<std::size_t>(nb);
                const std::int64_t col = unknown[at];
                if (col < 0) {
                    if (boundary_increment) lift += w * (*boundary_increment)[at];
                    return;
                }
                if (w == 0.0) return;
                cols[i][k] = col;
                vals[i][k] = w;
                ++k;
            };
            double centre = 0.0;
            for (int a = 0; a < 3; ++a) {
                const auto ua = static_cast<std::size_t>(a);
                const double w = c(a, a) / (h[ua] * h[ua]);
                centre -= 2.0 * w;
                put(n + stride[ua], w);
                put(n - stride[ua], w);
            }
            put(n, centre);
            for (int a = 0; a < 3; ++a)
                for (int bb = a + 1; bb < 3; ++bb) {
                    const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(bb);
                    const double w = c(a, bb) / (2.0 * h[ua] * h[ub]);
                    put(n + stride[ua] + stride[ub], w);
                    put(n - stride[ua] - stride[ub], w);
                    put(n + stride[ua] - stride[ub], -w);
                    put(n - stride[ua] + stride[ub], -w);
                }
            count[i] = k;
            sys.boundary_lift[static_cast<Eigen::Index>(i)] = lift;
        }
    });

    std::vector<Eigen::Triplet<double, std::int64_t>> triplets;
    triplets.reserve(nodes.size() * kWidth);
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::uint8_t k = 0; k < count[i]; ++k)
            triplets.emplace_back(static_cast<std::int64_t>(i), cols[i][k], vals[i][k]);
    const auto n = static_cast<std::int64_t>(nodes.size());
    sys.matrix.resize(n, n);
    sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
    return sys;
}

std::string describe_node(const GridField& field, std::size_t node) {
    const Vec3 x = field.position(node);
    std::ostringstream os;
    os << "node " << node << " at (" << x[0] << ", " << x[1] << ", " << x[2] << ")";
    return os.str();
}

// One safeguarded step. With a boundary target the step also moves the boundary
// layer toward it (fully at step length 1) and the interior update absorbs the
// linearized effect; acceptance then only asks the residual to stay below
// residual_cap. Without a target the residual must decrease.
std::pair<GridField, NewtonStepReport> damped_step(const GridField& field, const SolverConfig& config,
                                                   const std::vector<double>& g,
                                                   const std::vector<double>* boundary_target = nullptr,
                                                   double residual_cap = 0.0) {
    const MarginScan start = scan_margin(field, config.cone);
    if (!(start.margin > config.cone_slack))
        throw PreconditionError("Newton iterate outside the safeguard cone: margin " +
                                std::to_string(start.margin) + " at " + describe_node(field, start.node));

    const std::vector<double> r = residual_with(field, g);
    NewtonStepReport rep;
    rep.residual_before = max_norm(r);

    const auto& bnodes = field.boundary_nodes();
    std::vector<double> increment;
    if (boundary_target) {
        increment.assign(field.size(), 0.0);
        for (std::size_t i = 0; i < bnodes.size(); ++i) increment[bnodes[i]] = (*boundary_target)[i] - field[bnodes[i]];
    }
    const LinearSystem sys = assemble_system(field, boundary_target ? &increment : nullptr);

    Eigen::VectorXd rhs(static_cast<Eigen::Index>(r.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
        double target = -r[i];
        if (config.newton_form == NewtonForm::CubeRoot) {
            // Newton on m2^(1/3) = g^(1/3), rows rescaled back to the m2 linearization.
            const double cm = std::cbrt(r[i] + g[i]);
            target = -3.0 * cm * cm * (cm - std::cbrt(g[i]));
        }
        rhs[static_cast<Eigen::Index>(i)] = target - sys.boundary_lift[static_cast<Eigen::Index>(i)];
    }

    Eigen::BiCGSTAB<SparseRowMatrix, Eigen::DiagonalPreconditioner<double>> krylov;
    krylov.setTolerance(config.linear_tol);
    krylov.setMaxIterations(config.max_linear_iterations > 0 ? config.max_linear_iterations : 5000);
    krylov.compute(sys.matrix);
    if (krylov.info() != Eigen::Success) throw SolverError("Jacobian preconditioner setup failed");
    const Eigen::VectorXd delta = krylov.solve(rhs);
    rep.linear_iterations = static_cast<int>(krylov.iterations());
    rep.linear_error = krylov.error();
    if (krylov.info() != Eigen::Success || !delta.allFinite()) {
        std::ostringstream os;
        os << "Krylov solve failed after " << krylov.iterations() << " iterations, relative residual "
           << krylov.error();
        throw SolverError(os.str());
    }

    const auto& nodes = field.interior_nodes();
    double step = 1.0;
    GridField trial = field;
    MarginScan worst;
    double trial_residual = rep.residual_before;
    for (;;) {
        for (std::size_t i = 0; i < nodes.size(); ++i)
            trial[nodes[i]] = field[nodes[i]] + step * delta[static_cast<Eigen::Index>(i)];
        if (boundary_target)
            for (std::size_t i = 0; i < bnodes.size(); ++i)
                trial[bnodes[i]] = step == 1.0 ? (*boundary_target)[i] : field[bnodes[i]] + step * increment[bnodes[i]];
        worst = scan_margin(trial, config.cone);
        if (worst.margin > config.cone_slack) {
            trial_residual = max_norm(residual_with(trial, g));
            const bool ok = boundary_target
                                ? trial_residual <= std::max(rep.residual_before, residual_cap)
                                : trial_residual < rep.residual_before || trial_residual <= config.residual_tol;
            if (ok) break;
        }
        step *= config.line_search.shrink;
        ++rep.backtracks;
        if (step < config.line_search.min_step) {
            std::ostringstream os;
            os << "line search stalled below step " << config.line_search.min_step << "; worst cone margin "
               << worst.margin << " at " << describe_node(field, worst.node) << ", residual "
               << rep.residual_before;
            throw StallError(os.str());
        }
    }
    rep.step_length = step;
    rep.residual_after = trial_residual;
    rep.min_cone_margin = worst.margin;
    rep.update_norm = step * delta.lpNorm<Eigen::Infinity>();
    return {std::move(trial), rep};
}

double min_ellipticity(const GridField& field) {
    double out = std::numeric_limits<double>::infinity();
    for (std::size_t node : field.interior_nodes()) {
        const Spectrum s = eigenvalues_sym3(hessian_unchecked(field, node));
        const double sigma = s.sigma1();
        for (std::size_t i = 0; i < 3; ++i) out = std::min(out, (sigma - s[i]) * (sigma + s[i]));
    }
    return out;
}

} // namespace

void SolverConfig::validate() const {
    if (!(residual_tol > 0.0)) throw InputError("residual_tol must be positive");
    if (max_newton < 1) throw InputError("max_newton must be at least 1");
    if (!(line_search.shrink > 0.0 && line_search.shrink < 1.0))
        throw InputError("line-search shrink factor must lie in (0, 1)");
    if (!(line_search.min_step > 0.0 && line_search.min_step < 1.0))
        throw InputError("line-search min_step must lie in (0, 1)");
    if (!(linear_tol > 0.0)) throw InputError("linear_tol must be positive");
    if (!(cone_slack >= 0.0)) throw InputError("cone_slack must be non-negative");
    if (!rhs || !boundary) throw InputError("rhs and boundary functions are required");
    if (init.kind == InitKind::Custom && !init.custom) throw InputError("custom init needs a function");
    if (!(pogorelov_beta > 0.0)) throw InputError("pogorelov beta must be positive");
}

double max_norm(const std::vector<double>& values) noexcept {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

std::vector<double> residual(const GridField& field, const SolverConfig& config) {
    return residual_with(field, sample_rhs(field, config));
}

std::pair<double, std::size_t> min_cone_margin(const GridField& field, const ConeSpec& cone) {
    const MarginScan m = scan_margin(field, cone);
    return {m.margin, m.node};
}

std::pair<GridField, NewtonStepReport> newton_step(const GridField& field, const SolverConfig& config) {
    config.validate();
    return damped_step(field, config, sample_rhs(field, config));
}

std::pair<double, double> subsolution_parameters(const GridField& shell, const SolverConfig& config) {
    double a = config.init.a;
    if (!(a > 0.0)) {
        double sup_g = 0.0;
        for (std::size_t node : shell.interior_nodes()) sup_g = std::max(sup_g, config.rhs(shell.position(node)));
        // m2 of 2a I is (4a)^3, so this makes a|x|^2 - b a subsolution.
        a = std::max(0.25 * std::cbrt(sup_g), 0.5);
    }
    double b = config.init.b;
    if (std::isnan(b)) {
        double max_data = -std::numeric_limits<double>::infinity();
        for (std::size_t node : shell.boundary_nodes())
            max_data = std::max(max_data, config.boundary(shell.position(node)));
        const double rc = shell.boundary_circumradius();
        b = a * rc * rc + max_data;
    }
    return {a, b};
}

Solution solve_dirichlet(const SolverConfig& config, const GridField& shell) {
    config.validate();
    GridField u = shell;
    const Vec3 c = shell.domain().center;
    auto r2 = [c](const Vec3& x) {
        const double a = x[0] - c[0], b = x[1] - c[1], d = x[2] - c[2];
        return a * a + b * b + d * d;
    };

    switch (config.init.kind) {
    case InitKind::QuadraticSubsolution: {
        const auto [a, b] = subsolution_parameters(shell, config);
        u.fill([&, a = a, b = b](const Vec3& x) { return a * r2(x) - b; });
        break;
    }
    case InitKind::ExactRadial: {
        const double rad = shell.domain().kind == DomainKind::Ball ? shell.domain().radius
                                                                    : shell.boundary_circumradius();
        u.fill([&, rad](const Vec3& x) { return 0.25 * (r2(x) - rad * rad); });
        break;
    }
    case InitKind::Custom: u.fill(config.init.custom); break;
    }

    const std::vector<double> g = sample_rhs(shell, config);
    std::vector<double> data;
    data.reserve(shell.boundary_nodes().size());
    for (std::size_t node : shell.boundary_nodes()) data.push_back(config.boundary(shell.position(node)));

    SolveReport report;
    bool attached = u.boundary_values() == data;
    double cap = max_norm(residual_with(u, g));
    try {
        // Lift the boundary layer onto the data, then iterate with a fixed boundary.
        while (!attached) {
            if (report.iterations >= config.max_newton) break;
            auto [next, step] = damped_step(u, config, g, &data, cap);
            ++report.iterations;
            report.linear_iterations += step.linear_iterations;
            ++report.boundary_steps;
            attached = step.step_length == 1.0;
            u = std::move(next);
        }
        report.residual_history.push_back(max_norm(residual_with(u, g)));
        while (attached && report.residual_history.back() > config.residual_tol &&
               report.iterations < config.max_newton) {
            auto [next, step] = damped_step(u, config, g);
            ++report.iterations;
            report.linear_iterations += step.linear_iterations;
            report.residual_history.push_back(step.residual_after);
            report.step_lengths.push_back(step.step_length);
            u = std::move(next);
        }
        report.converged = attached && report.residual_history.back() <= config.residual_tol;
        if (!report.converged)
            report.diagnostic = attached ? "Newton budget of " + std::to_string(config.max_newton) + " steps exhausted"
                                         : "boundary data not attained within the Newton budget";
    } catch (const StallError& e) {
        report.diagnostic = e.what();
    } catch (const PreconditionError& e) {
        report.diagnostic = e.what();
    } catch (const SolverError& e) {
        report.diagnostic = e.what();
    }

    GridField& result = u;
    const std::vector<double> r = residual_with(result, g);
    report.final_residual = max_norm(r);
    report.min_cone_margin = scan_margin(result, config.cone).margin;
    report.min_ellipticity = min_ellipticity(result);
    report.pogorelov = pogorelov_check(result, config.pogorelov_beta);
    return {std::move(result), std::move(report)};
}

double max_interior_error(const GridField& field, const ScalarFunction& exact) {
    double e = 0.0;
    for (std::size_t node : field.interior_nodes())
        e = std::max(e, std::abs(field[node] - exact(field.position(node))));
    return e;
}

} // namespace monge2
