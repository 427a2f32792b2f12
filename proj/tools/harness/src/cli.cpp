#include "monge2/harness/cli.hpp"

#include "monge2/errors.hpp"
#include "monge2/harness/campaigns.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <functional>
#include <map>

namespace monge2::harness {

namespace {

struct SolverFlags {
    std::string cone = "p2";
    std::string newton_form = "cube-root";
};

void add_solver_options(CLI::App& app, SolverConfig& s, SolverFlags& flags) {
    app.add_option("--cone", flags.cone, "Safeguard cone: p2, p2-half, gamma1, gamma2, gamma3")->capture_default_str();
    app.add_option("--cone-slack", s.cone_slack, "Minimum cone margin of accepted iterates")->capture_default_str();
    app.add_option("--max-newton", s.max_newton, "Newton step budget")->capture_default_str();
    app.add_option("--residual-tol", s.residual_tol, "Max-norm residual target")->capture_default_str();
    app.add_option("--line-search-shrink", s.line_search.shrink, "Backtracking factor")->capture_default_str();
    app.add_option("--min-step", s.line_search.min_step, "Smallest step before a stall")->capture_default_str();
    app.add_option("--newton-form", flags.newton_form, "cube-root or plain")->capture_default_str();
    app.add_option("--linear-tol", s.linear_tol, "Relative tolerance of the inner linear solve")
        ->capture_default_str();
    app.add_option("--max-linear-iterations", s.max_linear_iterations, "Inner iteration cap (0 = automatic)")
        ->capture_default_str();
    app.add_option("--beta", s.pogorelov_beta, "Exponent of the Pogorelov monitor")->capture_default_str();
}

void apply_solver_flags(SolverConfig& s, const SolverFlags& flags) {
    if (flags.cone == "p2") s.cone = ConeSpec::p2();
    else if (flags.cone == "p2-half") s.cone = ConeSpec::p2_half();
    else if (flags.cone == "gamma1") s.cone = ConeSpec::gamma(1);
    else if (flags.cone == "gamma2") s.cone = ConeSpec::gamma(2);
    else if (flags.cone == "gamma3") s.cone = ConeSpec::gamma(3);
    else throw InputError("unknown cone '" + flags.cone + "'");
    if (flags.newton_form == "cube-root") s.newton_form = NewtonForm::CubeRoot;
    else if (flags.newton_form == "plain") s.newton_form = NewtonForm::Plain;
    else throw InputError("unknown newton form '" + flags.newton_form + "'");
    s.validate();
}

void add_sampler_options(CLI::App& app, VerifierConfig& v) {
    app.add_option("--samples", v.samples, "Level-set draws")->capture_default_str();
    app.add_option("--epsilon", v.epsilon, "delta = 1 + epsilon")->capture_default_str();
    app.add_option("--lambda1-min", v.lambda1_min, "Smallest largest eigenvalue")->capture_default_str();
    app.add_option("--lambda1-max", v.lambda1_max, "Largest largest eigenvalue")->capture_default_str();
    app.add_option("--relative-tolerance", v.relative_tolerance, "PSD tolerance relative to ||a||_F")
        ->capture_default_str();
    app.add_option("--buckets-per-decade", v.buckets_per_decade, "Histogram resolution in lambda1")
        ->capture_default_str();
    app.add_option("--row-stride", v.row_stride, "Keep every n-th draw as a CSV row")->capture_default_str();
}

} // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Verification campaigns and Dirichlet solves for the 2-Monge-Ampere operator", "monge2"};
    app.set_config("--config", "", "TOML/INI file; [command] sections mirror the flags, flags win");
    app.fallthrough();
    app.require_subcommand(1);

    std::uint64_t seed = 42;
    std::string output_dir = "monge2-out";
    app.add_option("--seed", seed, "Seed echoed into every artifact")->capture_default_str();
    app.add_option("--output-dir", output_dir, "Directory for all artifacts")->capture_default_str();

    std::function<int()> action;

    DerivativesCampaign deriv;
    auto* d = app.add_subcommand("verify-derivatives", "Closed-form derivatives and identities on random P2 spectra");
    d->add_option("--samples", deriv.audit.samples, "Random spectra")->capture_default_str();
    d->add_option("--fd-step", deriv.audit.fd_step, "Central-difference step")->capture_default_str();
    d->add_option("--lower", deriv.audit.lower, "Lower end of the raw sampling box")->capture_default_str();
    d->add_option("--upper", deriv.audit.upper, "Upper end of the raw sampling box")->capture_default_str();
    d->add_option("--min-pair-sum", deriv.audit.min_pair_sum, "Smallest admitted pair sum")->capture_default_str();
    d->add_option("--row-stride", deriv.audit.row_stride, "Keep every n-th sample as a CSV row")
        ->capture_default_str();
    d->add_option("--fd-tolerance", deriv.fd_tolerance, "Relative finite-difference tolerance")
        ->capture_default_str();
    d->add_option("--identity-tolerance", deriv.identity_tolerance, "Relative identity tolerance")
        ->capture_default_str();
    d->callback([&] {
        action = [&] {
            deriv.audit.seed = seed;
            return run_verify_derivatives(deriv, output_dir);
        };
    });

    ConcavityCampaign conc;
    std::int64_t stability_seed = -1;
    bool no_stability = false;
    auto* c = app.add_subcommand("verify-concavity", "Concavity scan of the reduced a-matrix on the level set");
    add_sampler_options(*c, conc.verifier);
    c->add_option("--stability-seed", stability_seed, "Seed of the second scan (default: seed + 1)");
    c->add_flag("--no-stability", no_stability, "Skip the second scan");
    c->add_option("--min-samples-above", conc.min_samples_above, "Required samples above the threshold")
        ->capture_default_str();
    c->callback([&] {
        action = [&] {
            conc.verifier.seed = seed;
            if (!no_stability)
                conc.stability_seed = stability_seed >= 0 ? static_cast<std::uint64_t>(stability_seed) : seed + 1;
            return run_verify_concavity(conc, output_dir);
        };
    });

    LemmaCampaign lemma;
    auto* l = app.add_subcommand("verify-lemma22", "Pair-sum, trace and divided-difference bounds");
    add_sampler_options(*l, lemma.audit.sampler);
    l->add_option("--betas", lemma.audit.betas, "Exponents for the divided-difference sweep")->capture_default_str();
    l->add_option("--divided-difference-samples", lemma.audit.divided_difference_samples,
                  "Samples in the divided-difference sweep")
        ->capture_default_str();
    l->callback([&] {
        action = [&] {
            lemma.audit.sampler.seed = seed;
            return run_verify_lemma22(lemma, output_dir);
        };
    });

    PogorelovCampaign pog;
    SolverFlags pog_flags;
    auto* p = app.add_subcommand("verify-pogorelov-bounds", "Pogorelov monitor on ball and box solutions");
    add_solver_options(*p, pog.solver, pog_flags);
    p->add_option("--ball-n", pog.ball_n, "Nodes per axis for the ball solve")->capture_default_str();
    p->add_option("--box-grids", pog.box_grids, "Nodes per axis for the box refinements")->capture_default_str();
    p->add_option("--ball-tolerance", pog.ball_tolerance, "Relative tolerance against 1/16")->capture_default_str();
    p->add_option("--box-variation", pog.box_variation, "Allowed relative spread across box grids")
        ->capture_default_str();
    p->callback([&] {
        action = [&] {
            apply_solver_flags(pog.solver, pog_flags);
            return run_verify_pogorelov_bounds(pog, seed, output_dir);
        };
    });

    SolveCampaign solve;
    SolverFlags solve_flags;
    std::string domain = "ball";
    auto* s = app.add_subcommand("solve", "Dirichlet problem M2(D^2 u) = g on a ball or box");
    add_solver_options(*s, solve.solver, solve_flags);
    s->add_option("--domain", domain, "ball (unit ball) or box ([-1,1]^3)")->capture_default_str();
    s->add_option("--n", solve.n, "Nodes per axis")->capture_default_str();
    s->add_option("--problem", solve.problem, "zero, quadratic, quadratic-plus-bump or manufactured")
        ->capture_default_str();
    s->add_option("--bump-amplitude", solve.bump_amplitude, "Cap height for quadratic-plus-bump")
        ->capture_default_str();
    s->add_option("--bump-half-angle", solve.bump_half_angle, "Cap half-angle for quadratic-plus-bump")
        ->capture_default_str();
    s->callback([&] {
        action = [&] {
            if (domain != "ball" && domain != "box") throw InputError("unknown domain '" + domain + "'");
            solve.ball = domain == "ball";
            apply_solver_flags(solve.solver, solve_flags);
            return run_solve(solve, seed, output_dir);
        };
    });

    LiouvilleCampaign liou;
    SolverFlags liou_flags;
    auto* r = app.add_subcommand("liouville-scan", "Rescaled Hessian oscillation against R");
    add_solver_options(*r, liou.scan.solver, liou_flags);
    r->add_option("--radii", liou.scan.radii, "Rescaling radii (increasing)")->capture_default_str();
    r->add_option("--c1", liou.scan.c1, "Growth constant C1")->capture_default_str();
    r->add_option("--c2", liou.scan.c2, "Growth constant C2")->capture_default_str();
    r->add_option("--r0", liou.scan.r0, "Radius beyond which growth holds")->capture_default_str();
    r->add_option("--amplitude", liou.scan.amplitude, "Cap height of the perturbation")->capture_default_str();
    r->add_option("--half-angle", liou.scan.half_angle, "Cap half-angle")->capture_default_str();
    r->add_option("--n", liou.scan.n, "Nodes per axis of the unit-ball grid")->capture_default_str();
    r->add_option("--unperturbed-tolerance", liou.unperturbed_tolerance, "Oscillation bound for quadratic data")
        ->capture_default_str();
    r->callback([&] {
        action = [&] {
            apply_solver_flags(liou.scan.solver, liou_flags);
            return run_liouville_scan(liou, seed, output_dir);
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        return action();
    } catch (const InputError& e) {
        std::fprintf(stderr, "monge2: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "monge2: %s\n", e.what());
        return 1;
    }
}

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"monge2"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

} // namespace monge2::harness
