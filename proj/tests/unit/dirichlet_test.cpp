#include "monge2/boundary_data.hpp"
#include "monge2/dirichlet.hpp"
#include "monge2/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace monge2 {
namespace {

double norm2(const Vec3& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; }

SolverConfig config_for(const Problem& p) {
    SolverConfig c;
    c.boundary = p.boundary;
    c.rhs = p.rhs;
    return c;
}

TEST(Residual, VanishesOnExactBallSolution) {
    GridField g = GridField::ball(17, 1.0);
    g.fill([](const Vec3& x) { return 0.25 * (norm2(x) - 1.0); });
    EXPECT_LT(max_norm(residual(g, SolverConfig{})), 1e-12);
}

TEST(Residual, ConstantHessianEvaluation) {
    GridField g = GridField::box(9, {-1, -1, -1}, {1, 1, 1});
    g.fill([](const Vec3& x) { return 0.5 * norm2(x); });
    for (double r : residual(g, SolverConfig{})) EXPECT_NEAR(r, 7.0, 1e-11);
}

TEST(NewtonStep, FixedPointAtExactSolution) {
    GridField g = GridField::ball(17, 1.0);
    g.fill([](const Vec3& x) { return 0.25 * (norm2(x) - 1.0); });
    const auto [next, report] = newton_step(g, SolverConfig{});
    EXPECT_LT(report.update_norm, 1e-10);
    EXPECT_EQ(report.step_length, 1.0);
}

TEST(NewtonStep, FirstStepFromSubsolutionReducesResidual) {
    const SolverConfig c = config_for(make_problem("quadratic"));
    GridField g = GridField::ball(17, 1.0);
    const auto [a, b] = subsolution_parameters(g, c);
    g.fill([a = a, b = b](const Vec3& x) { return a * norm2(x) - b; });
    const auto [next, report] = newton_step(g, c);
    EXPECT_LT(report.residual_after, report.residual_before);
    EXPECT_GT(report.min_cone_margin, 0.0);
}

TEST(NewtonStep, OutsideConeThrows) {
    GridField g = GridField::ball(9, 1.0);
    g.fill([](const Vec3& x) { return -norm2(x); });
    EXPECT_THROW(newton_step(g, SolverConfig{}), PreconditionError);
}

TEST(Subsolution, BelowDataAndInsideCone) {
    const SolverConfig c = config_for(make_problem("quadratic"));
    const GridField g = GridField::ball(17, 1.0);
    const auto [a, b] = subsolution_parameters(g, c);
    // a|x|^2 - b has m2 = (4a)^3 >= 1 and lies below the data on the boundary layer.
    EXPECT_GE(64.0 * a * a * a, 1.0);
    for (std::size_t node : g.boundary_nodes()) {
        const Vec3 x = g.position(node);
        EXPECT_LE(a * norm2(x) - b, c.boundary(x) + 1e-14);
    }
}

TEST(Solve, BallConvergesToExactQuadratic) {
    const Problem p = make_problem("quadratic");
    const Solution s = solve_dirichlet(config_for(p), GridField::ball(17, 1.0));
    EXPECT_TRUE(s.report.converged) << s.report.diagnostic;
    EXPECT_LE(s.report.iterations, 15);
    EXPECT_LE(s.report.final_residual, 1e-8);
    EXPECT_LT(max_interior_error(s.field, *p.exact), 1e-9);
    EXPECT_GT(s.report.min_cone_margin, 0.0);
    EXPECT_GT(s.report.min_ellipticity, 0.0);
}

TEST(Solve, ResidualHistoryEndsBelowTolerance) {
    const Problem p = make_problem("manufactured");
    const Solution s = solve_dirichlet(config_for(p), GridField::ball(13, 1.0));
    ASSERT_TRUE(s.report.converged);
    ASSERT_FALSE(s.report.residual_history.empty());
    EXPECT_LE(s.report.residual_history.back(), 1e-8);
    EXPECT_EQ(s.report.residual_history.back(), s.report.final_residual);
}

TEST(Solve, ManufacturedSecondOrder) {
    const Problem p = make_problem("manufactured");
    const double coarse = max_interior_error(solve_dirichlet(config_for(p), GridField::ball(17, 1.0)).field, *p.exact);
    const double fine = max_interior_error(solve_dirichlet(config_for(p), GridField::ball(33, 1.0)).field, *p.exact);
    EXPECT_GE(std::log2(coarse / fine), 1.8);
}

TEST(Solve, BoxZeroDataObeysMaximumPrinciple) {
    const Solution s = solve_dirichlet(config_for(make_problem("zero")), GridField::box(9, {-1, -1, -1}, {1, 1, 1}));
    ASSERT_TRUE(s.report.converged) << s.report.diagnostic;
    for (std::size_t node : s.field.interior_nodes()) EXPECT_LT(s.field[node], 0.0);
    EXPECT_EQ(s.report.pogorelov.positive_nodes, 0);
}

TEST(Solve, BudgetExhaustionIsReported) {
    SolverConfig c = config_for(make_problem("zero"));
    c.max_newton = 1;
    const Solution s = solve_dirichlet(c, GridField::box(9, {-1, -1, -1}, {1, 1, 1}));
    EXPECT_FALSE(s.report.converged);
    EXPECT_EQ(s.report.iterations, 1);
}

TEST(Solve, RejectsNonPositiveRhs) {
    SolverConfig c;
    c.rhs = [](const Vec3&) { return -1.0; };
    EXPECT_THROW(solve_dirichlet(c, GridField::ball(9, 1.0)), InputError);
}

TEST(Config, Validation) {
    SolverConfig c;
    c.residual_tol = 0.0;
    EXPECT_THROW(c.validate(), InputError);
    c = {};
    c.line_search.shrink = 1.0;
    EXPECT_THROW(c.validate(), InputError);
    c = {};
    c.init.kind = InitKind::Custom;
    EXPECT_THROW(c.validate(), InputError);
}

TEST(Pogorelov, ExactBallValue) {
    GridField g = GridField::ball(17, 1.0);
    g.fill([](const Vec3& x) { return 0.25 * (norm2(x) - 1.0); });
    for (double beta : {6.0, 18.0}) {
        const PogorelovRecord r = pogorelov_check(g, beta);
        EXPECT_NEAR(r.sup_ulam2, 1.0 / 16.0, 1e-12);
        EXPECT_LE(r.sup_ulam2, 12.0 * beta);
        EXPECT_NEAR(r.argmax_ulam2[0], 0.0, 1e-15);
        EXPECT_EQ(r.positive_nodes, 0);
        EXPECT_EQ(r.beta, beta);
    }
    EXPECT_THROW(pogorelov_check(g, 0.0), InputError);
}

TEST(Pogorelov, CountsPositiveNodes) {
    GridField g = GridField::ball(9, 1.0);
    g.fill([](const Vec3& x) { return 0.25 * norm2(x) - 0.1; });
    const PogorelovRecord r = pogorelov_check(g, 18.0);
    EXPECT_GT(r.positive_nodes, 0);
    EXPECT_GT(r.negative_nodes, 0);
}

TEST(BoundaryData, Registry) {
    for (const auto& name : problem_names()) EXPECT_NO_THROW(make_problem(name));
    EXPECT_THROW(make_problem("cubic"), InputError);
    EXPECT_DOUBLE_EQ(cap_profile(0.0, 1.0), 1.0);
    EXPECT_EQ(cap_profile(1.0, 1.0), 0.0);
    const Vec3 x{0.3, -0.2, 0.5};
    EXPECT_NEAR(manufactured_rhs(x), m2_det_form(manufactured_hessian(x)), 1e-15);
}

} // namespace
} // namespace monge2
