#include "monge2/harness/campaigns.hpp"

#include "monge2/boundary_data.hpp"
#include "monge2/field_io.hpp"
#include "monge2/harness/report.hpp"
#include "monge2/harness/svg.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace monge2::harness {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const char* cone_name(const ConeSpec& c) {
    switch (c.kind) {
    case ConeSpec::Kind::P2: return "P2";
    case ConeSpec::Kind::P2Half: return "P2Half";
    case ConeSpec::Kind::GammaK: return "GammaK";
    }
    return "?";
}

Json vec_json(const Vec3& v) { return Json::array({json_number(v[0]), json_number(v[1]), json_number(v[2])}); }

Json solver_json(const SolverConfig& s) {
    return Json{{"cone", cone_name(s.cone)},
                {"cone_slack", s.cone_slack},
                {"max_newton", s.max_newton},
                {"residual_tol", s.residual_tol},
                {"line_search_shrink", s.line_search.shrink},
                {"min_step", s.line_search.min_step},
                {"newton_form", s.newton_form == NewtonForm::CubeRoot ? "cube-root" : "plain"},
                {"linear_tol", s.linear_tol},
                {"max_linear_iterations", s.max_linear_iterations},
                {"beta", s.pogorelov_beta}};
}

Json verifier_json(const VerifierConfig& v) {
    return Json{{"epsilon", v.epsilon},
                {"lambda1_min", v.lambda1_min},
                {"lambda1_max", v.lambda1_max},
                {"samples", v.samples},
                {"seed", v.seed},
                {"relative_tolerance", v.relative_tolerance},
                {"buckets_per_decade", v.buckets_per_decade},
                {"row_stride", v.row_stride}};
}

Json pogorelov_json(const PogorelovRecord& p) {
    return Json{{"beta", p.beta},
                {"sup_ub_delta", json_number(p.sup_ub_delta)},
                {"sup_ulam2", json_number(p.sup_ulam2)},
                {"argmax_ulam2", vec_json(p.argmax_ulam2)},
                {"max_test_function", json_number(p.max_test_function)},
                {"argmax_test_function", vec_json(p.argmax_test_function)},
                {"ulam2_at_test_max", json_number(p.ulam2_at_test_max)},
                {"negative_nodes", p.negative_nodes},
                {"positive_nodes", p.positive_nodes}};
}

Json solve_json(const SolveReport& r) {
    return Json{{"converged", r.converged},
                {"iterations", r.iterations},
                {"boundary_steps", r.boundary_steps},
                {"final_residual", json_number(r.final_residual)},
                {"min_cone_margin", json_number(r.min_cone_margin)},
                {"min_ellipticity", json_number(r.min_ellipticity)},
                {"linear_iterations", r.linear_iterations},
                {"diagnostic", r.diagnostic}};
}

double relative_spread(const std::vector<double>& v) {
    if (v.empty()) return kNaN;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi > 0.0 ? (*hi - *lo) / *hi : kNaN;
}

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

} // namespace

int run_verify_derivatives(const DerivativesCampaign& c, const fs::path& out) {
    Report report("verify-derivatives", c.audit.seed, out);
    report.config() = Json{{"samples", c.audit.samples},
                           {"fd_step", c.audit.fd_step},
                           {"lower", c.audit.lower},
                           {"upper", c.audit.upper},
                           {"min_pair_sum", c.audit.min_pair_sum},
                           {"row_stride", c.audit.row_stride},
                           {"fd_tolerance", c.fd_tolerance},
                           {"identity_tolerance", c.identity_tolerance}};
    const Stopwatch clock;
    const DerivativeAudit a = audit_derivatives(c.audit);
    report.log(fmt::format("audit took {:.3f} s", clock.seconds()));

    auto& m = report.measurements();
    m["samples"] = a.samples;
    m["max_grad_error"] = json_number(a.max_grad_error);
    m["max_hess_error"] = json_number(a.max_hess_error);
    m["max_fii_residual"] = json_number(a.max_fii_residual);
    m["max_fij_residual"] = json_number(a.max_fij_residual);
    m["max_product_residual"] = json_number(a.max_product_residual);
    m["max_b11_residual"] = json_number(a.max_b11_residual);
    m["max_b_diagonal_residual"] = json_number(a.max_b_diagonal_residual);
    m["max_det_form_residual"] = json_number(a.max_det_form_residual);
    m["max_reconstruction_residual"] = json_number(a.max_reconstruction_residual);

    const auto le = [&](const char* name, double v, double tol) { report.check(name, v <= tol, v, tol, "<="); };
    le("gradient_vs_finite_difference", a.max_grad_error, c.fd_tolerance);
    le("hessian_vs_finite_difference", a.max_hess_error, c.fd_tolerance);
    le("identity_fii", a.max_fii_residual, c.identity_tolerance);
    le("identity_fij", a.max_fij_residual, c.identity_tolerance);
    le("product_identity", a.max_product_residual, c.identity_tolerance);
    le("b11_expansion", a.max_b11_residual, c.identity_tolerance);
    le("b_diagonal_definition", a.max_b_diagonal_residual, c.identity_tolerance);
    le("det_form_vs_eigenvalues", a.max_det_form_residual, c.identity_tolerance);

    CsvTable rows{{"index", "lambda1", "lambda2", "lambda3", "grad_error", "hess_error", "identity_residual",
                   "det_form_residual"},
                  {}};
    for (const auto& r : a.rows)
        rows.rows.push_back({r.index, r.lambda[0], r.lambda[1], r.lambda[2], r.grad_error, r.hess_error,
                             r.identity_residual, r.det_form_residual});
    report.csv("derivatives.csv", rows);
    return report.finish();
}

namespace {

void record_scan(Json& m, const ScanReport& s) {
    m["draws"] = s.draws;
    m["accepted"] = s.accepted;
    m["rejected"] = s.rejected;
    m["threshold_found"] = s.threshold_found;
    m["lambda1_star"] = json_number(s.threshold_found ? s.threshold_lambda1 : kNaN);
    m["threshold_bucket"] = s.threshold_bucket;
    m["samples_above_threshold"] = s.samples_above_threshold;
    m["global_min_eig"] = json_number(s.global_min_eig);
    m["global_min_eig_ratio"] = json_number(s.global_min_eig_ratio);
    m["global_min_eig_lambda1"] = json_number(s.global_min_eig_lambda1);
    m["psd_violations"] = s.psd_violations;
    m["psd_violations_above_threshold"] = s.psd_violations_above_threshold;
    m["step1_failures"] = s.step1_failures;
    m["step2_failures"] = s.step2_failures;
    m["step1_pass_rate_above_threshold"] = json_number(s.step1_pass_rate_above_threshold());
    m["step2_pass_rate_above_threshold"] = json_number(s.step2_pass_rate_above_threshold());
    m["max_pair_identity_residual"] = json_number(s.max_pair_identity_residual);
    m["max_delta_identity_residual"] = json_number(s.max_delta_identity_residual);
    m["max_split_identity_residual"] = json_number(s.max_split_identity_residual);
    m["max_step2_identity_residual"] = json_number(s.max_step2_identity_residual);
    m["max_b11_identity_residual"] = json_number(s.max_b11_identity_residual);
    m["max_crosscheck_residual"] = json_number(s.max_crosscheck_residual);
    m["max_two_path_residual"] = json_number(s.max_two_path_residual);
    m["identity_failures"] = s.identity_failures;
    m["unrestricted_psd"] = s.unrestricted_psd;
    m["max_abs_vii_remainder"] = json_number(s.max_abs_vii_remainder);
    m["min_case_v"] = json_number(s.min_case_v);
    m["min_vii"] = json_number(s.min_vii);
    m["step2_bound_failures"] = s.step2_bound_failures;
    m["case_counts"] = Json::array({s.case_counts[0], s.case_counts[1], s.case_counts[2]});
}

CsvTable scan_rows(const std::vector<ScanRow>& rows) {
    CsvTable t{{"index", "lambda1", "lambda2", "lambda3", "min_eig_a", "frobenius_a", "step1_diff", "step2_sum",
                "case"},
               {}};
    for (const auto& r : rows)
        t.rows.push_back({r.index, r.lambda[0], r.lambda[1], r.lambda[2], r.min_eig_a, r.frobenius_a, r.step1_diff,
                          r.step2_sum, std::int64_t{r.case_id}});
    return t;
}

} // namespace

int run_verify_concavity(const ConcavityCampaign& c, const fs::path& out) {
    Report report("verify-concavity", c.verifier.seed, out);
    report.config() = verifier_json(c.verifier);
    report.config()["stability_seed"] = c.stability_seed ? Json(*c.stability_seed) : Json(nullptr);
    report.config()["min_samples_above"] = c.min_samples_above;

    Stopwatch clock;
    const ScanReport s = concavity_scan(c.verifier);
    report.log(fmt::format("scan took {:.3f} s", clock.seconds()));
    record_scan(report.measurements(), s);

    const double tol = c.verifier.relative_tolerance;
    report.check("threshold_found", s.threshold_found, s.threshold_found ? s.threshold_lambda1 : kNaN,
                 c.verifier.lambda1_max, "<=");
    report.check("samples_above_threshold", s.samples_above_threshold >= c.min_samples_above,
                 static_cast<double>(s.samples_above_threshold), static_cast<double>(c.min_samples_above), ">=");
    report.check("psd_above_threshold", s.psd_violations_above_threshold == 0,
                 static_cast<double>(s.psd_violations_above_threshold), 0.0, "==");
    report.check("step1_dominance_above_threshold", s.step1_failures_above_threshold == 0,
                 s.step1_pass_rate_above_threshold(), 1.0, "==");
    report.check("step2_dominance_above_threshold", s.step2_failures_above_threshold == 0,
                 s.step2_pass_rate_above_threshold(), 1.0, "==");
    report.check("step_identities", s.identity_failures == 0, static_cast<double>(s.identity_failures), 0.0, "==");
    report.check("two_path_residual", s.max_two_path_residual <= tol, s.max_two_path_residual, tol, "<=");
    report.check("step2_lower_bound_chain", s.step2_bound_failures == 0, static_cast<double>(s.step2_bound_failures),
                 0.0, "==");

    for (const auto& v : s.violations)
        report.violation(Json{{"index", v.index},
                              {"lambda", vec_json(v.lambda)},
                              {"min_eig_a", json_number(v.min_eig_a)},
                              {"frobenius_a", json_number(v.frobenius_a)},
                              {"step1_diff", json_number(v.step1_diff)},
                              {"step2_sum", json_number(v.step2_sum)},
                              {"case", v.case_id}});

    if (c.stability_seed) {
        VerifierConfig second = c.verifier;
        second.seed = *c.stability_seed;
        clock = Stopwatch{};
        const ScanReport t = concavity_scan(second);
        report.log(fmt::format("stability scan took {:.3f} s", clock.seconds()));
        Json& m = report.measurements()["stability"];
        record_scan(m, t);
        const bool both = s.threshold_found && t.threshold_found;
        const double gap = both ? std::abs(s.threshold_bucket - t.threshold_bucket) : kNaN;
        report.check("threshold_stable_across_seeds", both && gap <= 1.0, gap, 1.0, "<=");
        report.check("stability_psd_above_threshold", t.psd_violations_above_threshold == 0,
                     static_cast<double>(t.psd_violations_above_threshold), 0.0, "==");
        report.check("stability_step_identities", t.identity_failures == 0, static_cast<double>(t.identity_failures),
                     0.0, "==");
    }

    CsvTable buckets{{"lower", "upper", "samples", "psd_violations", "step1_failures", "step2_failures",
                      "min_eig_ratio"},
                     {}};
    for (const auto& b : s.buckets)
        buckets.rows.push_back({b.lower, b.upper, b.samples, b.psd_violations, b.step1_failures, b.step2_failures,
                                b.min_eig_ratio});
    report.csv("buckets.csv", buckets);
    report.csv("rows.csv", scan_rows(s.rows));
    report.csv("violations.csv", scan_rows(s.violations));

    Plot plot{"reduced a-matrix", "lambda1", "min eigenvalue of a", true, true, {}};
    Series pts{"samples", {}, {}, true};
    for (const auto& r : s.rows) {
        pts.x.push_back(r.lambda[0]);
        pts.y.push_back(r.min_eig_a);
    }
    plot.series.push_back(std::move(pts));
    report.text("min_eig_a.svg", render_svg(plot));
    return report.finish();
}

int run_verify_lemma22(const LemmaCampaign& c, const fs::path& out) {
    Report report("verify-lemma22", c.audit.sampler.seed, out);
    report.config() = verifier_json(c.audit.sampler);
    report.config()["betas"] = c.audit.betas;
    report.config()["divided_difference_samples"] = c.audit.divided_difference_samples;

    const Stopwatch clock;
    const LemmaAudit a = audit_lemmas(c.audit);
    report.log(fmt::format("audit took {:.3f} s", clock.seconds()));

    auto& m = report.measurements();
    m["draws"] = a.draws;
    m["samples"] = a.samples;
    m["key2_violations"] = a.key2.violations;
    m["key2_max_ratio"] = json_number(a.key2.max_ratio);
    m["trace_violations"] = a.trace_violations;
    m["min_trace_ratio"] = json_number(a.min_trace_ratio);

    report.check("pair_sum_bound", a.key2.violations == 0, a.key2.max_ratio, 1.0, "<=");
    report.check("trace_lower_bound", a.trace_violations == 0, a.min_trace_ratio, 1.0, ">=");
    CsvTable dd{{"beta", "checked", "failures"}, {}};
    for (const auto& s : a.divided_difference) {
        dd.rows.push_back({s.beta, s.checked, s.failures});
        report.check(fmt::format("divided_difference_beta_{}", s.beta), s.failures == 0,
                     static_cast<double>(s.failures), 0.0, "==");
    }
    report.check("tightness_witness_outside_fails", a.witness_outside_fails, a.witness_outside_fails ? 1.0 : 0.0, 1.0,
                 "==");
    report.check("witness_inside_holds", a.witness_inside_holds, a.witness_inside_holds ? 1.0 : 0.0, 1.0, "==");

    CsvTable bad{{"lambda1", "lambda2", "lambda3"}, {}};
    for (const auto& s : a.key2.violating) {
        bad.rows.push_back({s[0], s[1], s[2]});
        report.violation(Json{{"lemma", "pair_sum_bound"}, {"lambda", vec_json(s.values())}});
    }
    report.csv("divided_difference.csv", dd);
    report.csv("violations.csv", bad);
    return report.finish();
}

int run_verify_pogorelov_bounds(const PogorelovCampaign& c, std::uint64_t seed, const fs::path& out) {
    Report report("verify-pogorelov-bounds", seed, out);
    report.config() = solver_json(c.solver);
    report.config()["ball_n"] = c.ball_n;
    report.config()["box_grids"] = c.box_grids;
    report.config()["ball_tolerance"] = c.ball_tolerance;
    report.config()["box_variation"] = c.box_variation;

    const double beta = c.solver.pogorelov_beta;
    const double bound = 12.0 * beta;
    CsvTable table{{"domain", "n", "h", "converged", "iterations", "final_residual", "sup_ulam2", "sup_ub_delta",
                    "max_test_function", "ulam2_at_test_max", "positive_nodes"},
                   {}};
    auto add_row = [&](const char* domain, const GridRun& r) {
        const auto& p = r.report.pogorelov;
        table.rows.push_back({domain, r.n, r.h, std::int64_t{r.report.converged}, std::int64_t{r.report.iterations},
                              r.report.final_residual, p.sup_ulam2, p.sup_ub_delta, p.max_test_function,
                              p.ulam2_at_test_max, p.positive_nodes});
        report.log(fmt::format("{} n={} took {:.3f} s", domain, r.n, r.seconds));
    };

    SolverConfig ball = c.solver;
    const Problem quad = make_problem("quadratic");
    ball.boundary = quad.boundary;
    ball.rhs = quad.rhs;
    const auto ball_runs = refinement_study({c.ball_n}, true, ball, &*quad.exact);
    const GridRun& b = ball_runs.front();
    add_row("ball", b);
    const double target = 1.0 / 16.0;
    const double ball_rel = std::abs(b.report.pogorelov.sup_ulam2 - target) / target;
    report.measurements()["ball"] = solve_json(b.report);
    report.measurements()["ball"]["pogorelov"] = pogorelov_json(b.report.pogorelov);
    report.check("ball_converged", b.report.converged, b.report.final_residual, c.solver.residual_tol, "<=");
    report.check("ball_sup_ulam2_matches_one_sixteenth", ball_rel <= c.ball_tolerance, ball_rel, c.ball_tolerance,
                 "<=");

    SolverConfig box = c.solver;
    const Problem zero = make_problem("zero");
    box.boundary = zero.boundary;
    box.rhs = zero.rhs;
    const auto box_runs = refinement_study(c.box_grids, false, box, nullptr);
    std::vector<double> sup, localized;
    Json runs = Json::array();
    bool all_converged = true, all_bounded = true;
    double worst = 0.0;
    for (const auto& r : box_runs) {
        add_row("box", r);
        Json j = solve_json(r.report);
        j["n"] = r.n;
        j["pogorelov"] = pogorelov_json(r.report.pogorelov);
        runs.push_back(std::move(j));
        all_converged = all_converged && r.report.converged;
        sup.push_back(r.report.pogorelov.sup_ulam2);
        localized.push_back(r.report.pogorelov.ulam2_at_test_max);
        worst = std::max(worst, r.report.pogorelov.sup_ulam2);
        all_bounded = all_bounded && r.report.pogorelov.sup_ulam2 <= bound;
        if (r.report.pogorelov.positive_nodes > 0)
            report.log(fmt::format("warning: box n={} has {} positive interior nodes", r.n,
                                   r.report.pogorelov.positive_nodes));
    }
    report.measurements()["box"] = runs;
    const double spread = relative_spread(sup);
    report.measurements()["box_sup_ulam2_spread"] = json_number(spread);
    report.measurements()["box_ulam2_at_test_max_spread"] = json_number(relative_spread(localized));

    report.check("box_converged", all_converged, all_converged ? 1.0 : 0.0, 1.0, "==");
    report.check("box_sup_ulam2_variation", spread < c.box_variation, spread, c.box_variation, "<");
    report.check("box_sup_ulam2_below_12_beta", all_bounded, worst, bound, "<=");

    report.csv("pogorelov.csv", table);
    return report.finish();
}

int run_solve(const SolveCampaign& c, std::uint64_t seed, const fs::path& out) {
    Report report("solve", seed, out);
    report.config() = solver_json(c.solver);
    report.config()["domain"] = c.ball ? "ball" : "box";
    report.config()["n"] = c.n;
    report.config()["problem"] = c.problem;
    report.config()["bump_amplitude"] = c.bump_amplitude;
    report.config()["bump_half_angle"] = c.bump_half_angle;

    BoundaryParams params;
    params.bump_amplitude = c.bump_amplitude;
    params.bump_half_angle = c.bump_half_angle;
    const Problem problem = make_problem(c.problem, params);
    SolverConfig cfg = c.solver;
    cfg.boundary = problem.boundary;
    cfg.rhs = problem.rhs;

    const GridField shell = c.ball ? GridField::ball(c.n, 1.0) : GridField::box(c.n, {-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0});
    const Stopwatch clock;
    const Solution sol = solve_dirichlet(cfg, shell);
    report.log(fmt::format("solve took {:.3f} s", clock.seconds()));
    const SolveReport& r = sol.report;

    auto& m = report.measurements();
    m["solve"] = solve_json(r);
    m["h"] = shell.spacing()[0];
    m["residual_history"] = Json::array();
    for (double v : r.residual_history) m["residual_history"].push_back(json_number(v));
    m["pogorelov"] = pogorelov_json(r.pogorelov);
    const double error = problem.exact ? max_interior_error(sol.field, *problem.exact) : kNaN;
    m["max_error"] = json_number(error);

    report.check("converged", r.converged, r.final_residual, cfg.residual_tol, "<=");
    if (!r.diagnostic.empty()) report.violation(Json{{"diagnostic", r.diagnostic}});

    // Delta u > 0 in the cone, so u is subharmonic and peaks on the boundary layer.
    double interior_max = -std::numeric_limits<double>::infinity();
    for (std::size_t node : sol.field.interior_nodes()) interior_max = std::max(interior_max, sol.field[node]);
    double boundary_max = -std::numeric_limits<double>::infinity();
    for (std::size_t node : sol.field.boundary_nodes()) boundary_max = std::max(boundary_max, sol.field[node]);
    m["interior_max"] = json_number(interior_max);
    m["boundary_max"] = json_number(boundary_max);
    const double slack = 1e-12 * std::max(1.0, std::abs(boundary_max));
    report.check("maximum_principle", interior_max <= boundary_max + slack, interior_max, boundary_max, "<=");

    CsvTable history{{"iteration", "residual", "step_length"}, {}};
    for (std::size_t i = 0; i < r.residual_history.size(); ++i)
        history.rows.push_back({static_cast<std::int64_t>(i), r.residual_history[i],
                                i < r.step_lengths.size() ? r.step_lengths[i] : kNaN});
    report.csv("residual_history.csv", history);

    CsvTable profile{{"x", "u", "exact"}, {}};
    const Index3 e = sol.field.extents();
    for (std::int64_t i = 0; i < e[0]; ++i) {
        const std::size_t node = sol.field.linear(i, e[1] / 2, e[2] / 2);
        if (sol.field.kind(node) == NodeKind::Inactive) continue;
        const Vec3 x = sol.field.position(node);
        profile.rows.push_back({x[0], sol.field[node], problem.exact ? (*problem.exact)(x) : kNaN});
    }
    report.csv("centerline.csv", profile);

    write_field(report.dir() / "field.m2f", sol.field);
    report.attach("field.m2f");

    Plot plot{"Newton residual", "iteration", "max-norm residual", false, true, {}};
    Series s{"m2 - g", {}, {}, false};
    for (std::size_t i = 0; i < r.residual_history.size(); ++i) {
        s.x.push_back(static_cast<double>(i));
        s.y.push_back(r.residual_history[i]);
    }
    plot.series.push_back(std::move(s));
    report.text("residual.svg", render_svg(plot));
    return report.finish();
}

namespace {

Json liouville_json(const LiouvilleReport& r) {
    Json rows = Json::array();
    for (const auto& row : r.rows)
        rows.push_back(Json{{"radius", row.radius},
                            {"osc", json_number(row.osc)},
                            {"converged", row.converged},
                            {"final_residual", json_number(row.final_residual)},
                            {"iterations", row.iterations},
                            {"diameter", json_number(row.diameter)},
                            {"diameter_limit", json_number(row.diameter_limit)},
                            {"diagnostic", row.diagnostic}});
    return Json{{"rows", rows},
                {"decay_slope", json_number(r.decay_slope)},
                {"strictly_decreasing", r.strictly_decreasing}};
}

void liouville_rows(CsvTable& t, const char* label, const LiouvilleReport& r) {
    for (const auto& row : r.rows)
        t.rows.push_back({label, row.radius, row.osc, row.osc_entries[0], row.osc_entries[1], row.osc_entries[2],
                          row.osc_entries[3], row.osc_entries[4], row.osc_entries[5],
                          std::int64_t{row.converged}, row.final_residual, std::int64_t{row.iterations},
                          row.diameter, row.diameter_limit});
}

} // namespace

int run_liouville_scan(const LiouvilleCampaign& c, std::uint64_t seed, const fs::path& out) {
    Report report("liouville-scan", seed, out);
    const LiouvilleConfig& s = c.scan;
    report.config() = solver_json(s.solver);
    report.config()["radii"] = s.radii;
    report.config()["c1"] = s.c1;
    report.config()["c2"] = s.c2;
    report.config()["r0"] = s.r0;
    report.config()["amplitude"] = s.amplitude;
    report.config()["half_angle"] = s.half_angle;
    report.config()["n"] = s.n;
    report.config()["unperturbed_tolerance"] = c.unperturbed_tolerance;

    Stopwatch clock;
    const LiouvilleReport bumped = liouville_rescaling_scan(s);
    report.log(fmt::format("perturbed scan took {:.3f} s", clock.seconds()));
    LiouvilleConfig flat = s;
    flat.amplitude = 0.0;
    clock = Stopwatch{};
    const LiouvilleReport plain = liouville_rescaling_scan(flat);
    report.log(fmt::format("unperturbed scan took {:.3f} s", clock.seconds()));

    report.measurements()["perturbed"] = liouville_json(bumped);
    report.measurements()["unperturbed"] = liouville_json(plain);

    const auto all_converged = [](const LiouvilleReport& r) {
        return std::all_of(r.rows.begin(), r.rows.end(), [](const LiouvilleRow& x) { return x.converged; });
    };
    const auto diameters_ok = [](const LiouvilleReport& r) {
        return std::all_of(r.rows.begin(), r.rows.end(), [](const LiouvilleRow& x) { return x.diameter_ok; });
    };
    double plain_osc = 0.0;
    for (const auto& row : plain.rows) plain_osc = std::max(plain_osc, row.osc);

    report.check("perturbed_converged", all_converged(bumped), all_converged(bumped) ? 1.0 : 0.0, 1.0, "==");
    report.check("unperturbed_converged", all_converged(plain), all_converged(plain) ? 1.0 : 0.0, 1.0, "==");
    report.check("osc_strictly_decreasing", bumped.strictly_decreasing, bumped.decay_slope, 0.0, "<");
    report.check("unperturbed_osc_near_zero", plain_osc <= c.unperturbed_tolerance, plain_osc,
                 c.unperturbed_tolerance, "<=");
    report.check("sublevel_diameter_bounded", diameters_ok(bumped) && diameters_ok(plain),
                 diameters_ok(bumped) && diameters_ok(plain) ? 1.0 : 0.0, 1.0, "==");
    for (const auto& row : bumped.rows)
        if (!row.converged) report.violation(Json{{"radius", row.radius}, {"diagnostic", row.diagnostic}});

    CsvTable table{{"data", "radius", "osc", "osc_xx", "osc_xy", "osc_xz", "osc_yy", "osc_yz", "osc_zz", "converged",
                    "final_residual", "iterations", "diameter", "diameter_limit"},
                   {}};
    liouville_rows(table, "perturbed", bumped);
    liouville_rows(table, "unperturbed", plain);
    report.csv("liouville.csv", table);

    Plot plot{"Hessian oscillation on B_{R/2}", "R", "osc", true, true, {}};
    Series pts{"bump-perturbed", {}, {}, false};
    for (const auto& row : bumped.rows) {
        pts.x.push_back(row.radius);
        pts.y.push_back(row.osc);
    }
    plot.series.push_back(std::move(pts));
    report.text("osc_vs_radius.svg", render_svg(plot));
    return report.finish();
}

} // namespace monge2::harness
