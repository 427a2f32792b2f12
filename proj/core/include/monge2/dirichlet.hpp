#pragma once

#include "monge2/grid.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace monge2 {

struct LineSearch {
    double shrink = 0.5;
    double min_step = 1e-6;
};

/// Plain linearizes m2 - g; CubeRoot linearizes m2^(1/3) - g^(1/3), which is
/// homogeneous of degree one and takes far fewer damped steps from a poor start.
enum class NewtonForm { Plain, CubeRoot };

enum class InitKind { QuadraticSubsolution, ExactRadial, Custom };

struct InitSpec {
    InitKind kind = InitKind::QuadraticSubsolution;
    /// a|x - c|^2 - b; a <= 0 and NaN b select the automatic constants.
    double a = 0.0;
    double b = std::numeric_limits<double>::quiet_NaN();
    ScalarFunction custom;
};

struct SolverConfig {
    ConeSpec cone = ConeSpec::p2();
    /// Accepted iterates keep cone margin strictly above this value.
    double cone_slack = 0.0;
    ScalarFunction rhs = [](const Vec3&) { return 1.0; };
    ScalarFunction boundary = [](const Vec3&) { return 0.0; };
    int max_newton = 60;
    double residual_tol = 1e-8;
    LineSearch line_search;
    NewtonForm newton_form = NewtonForm::CubeRoot;
    InitSpec init;
    double linear_tol = 1e-10;
    /// 0 picks a size-dependent cap.
    int max_linear_iterations = 0;
    double pogorelov_beta = 18.0;

    /// Throws InputError for a broken invariant.
    void validate() const;
};

struct PogorelovRecord {
    double beta = 18.0;
    /// sup over the negative set of (-u)^beta * trace(D^2 u).
    double sup_ub_delta = 0.0;
    /// sup over the negative set of (-u) * lambda_max^2.
    double sup_ulam2 = 0.0;
    /// max of log lambda_max + beta log(-u) + |x|^2/2 and where it is attained.
    double max_test_function = -std::numeric_limits<double>::infinity();
    Vec3 argmax_test_function{};
    /// (-u) lambda_max^2 at the maximizer of the test function.
    double ulam2_at_test_max = 0.0;
    Vec3 argmax_ulam2{};
    std::int64_t negative_nodes = 0;
    /// Interior nodes with u > 0; nonzero means the zero-data hypothesis fails.
    std::int64_t positive_nodes = 0;
};

struct NewtonStepReport {
    double step_length = 0.0;
    double residual_before = 0.0;
    double residual_after = 0.0;
    double min_cone_margin = 0.0;
    /// Max-norm of the accepted update.
    double update_norm = 0.0;
    int linear_iterations = 0;
    double linear_error = 0.0;
    int backtracks = 0;
};

struct SolveReport {
    /// Newton steps (one linear solve each), boundary lifting included.
    int iterations = 0;
    /// Max-norm residual once the boundary data is attained, one entry per iterate.
    std::vector<double> residual_history;
    std::vector<double> step_lengths;
    double final_residual = 0.0;
    double min_cone_margin = 0.0;
    /// Smallest diagonal-frame F^ii over interior nodes at the final iterate.
    double min_ellipticity = 0.0;
    bool converged = false;
    std::string diagnostic;
    /// Steps spent moving the boundary layer from the initializer onto the data.
    int boundary_steps = 0;
    std::int64_t linear_iterations = 0;
    PogorelovRecord pogorelov;
};

struct Solution {
    GridField field;
    SolveReport report;
};

/// m2(D^2 u) - g at each interior node, in interior_nodes() order.
std::vector<double> residual(const GridField& field, const SolverConfig& config);
double max_norm(const std::vector<double>& values) noexcept;

/// Smallest cone margin of the discrete Hessian over interior nodes, with the node.
std::pair<double, std::size_t> min_cone_margin(const GridField& field, const ConeSpec& cone);

/// One damped Newton step. Throws PreconditionError if the iterate is not strictly
/// inside the safeguard cone, StallError if backtracking underflows, SolverError if
/// the linear solve fails.
std::pair<GridField, NewtonStepReport> newton_step(const GridField& field, const SolverConfig& config);

/// Automatic a, b for the quadratic subsolution start on the given shell.
std::pair<double, double> subsolution_parameters(const GridField& shell, const SolverConfig& config);

/// Solves on the node layout of shell (its values are ignored).
Solution solve_dirichlet(const SolverConfig& config, const GridField& shell);

PogorelovRecord pogorelov_check(const GridField& field, double beta);

/// Max |u - exact| over interior nodes.
double max_interior_error(const GridField& field, const ScalarFunction& exact);

} // namespace monge2
