// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include "monge2/boundary_data.hpp"
#include "monge2/harness/audits.hpp"
#include "monge2/harness/cli.hpp"
#include "monge2/harness/report.hpp"
#include "monge2/liouville.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace monge2;
using namespace monge2::harness;
namespace fs = std::filesystem;

constexpr std::uint64_t kSeed = 42;
constexpr std::uint64_t kSecondSeed = 4242;
// 3.5e6 draws leave >= 1e6 accepted level-set spectra (acceptance rate about 1/3).
constexpr std::int64_t kLevelSetDraws = 3'500'000;
const std::vector<std::int64_t> kGrids{17, 33, 65};

struct Outcome {
    bool passed = true;
    std::vector<std::string> notes;

    void require(bool ok, std::string note) {
        passed = passed && ok;
        notes.push_back((ok ? "" : "!") + std::move(note));
    }
};

class Timer {
public:
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

private:
    std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

std::string g(double v) { return fmt::format("{:.3g}", v); }

Outcome ac1_derivatives() {
    Outcome o;
    DerivativeAuditConfig c;
    c.samples = 10'000;
    c.seed = kSeed;
    const Timer t;
    const DerivativeAudit a = audit_derivatives(c);
    const double s = t.seconds();
    o.require(a.samples == 10'000, fmt::format("samples {}", a.samples));
    o.require(a.max_grad_error <= 1e-8, "grad fd " + g(a.max_grad_error) + " <= 1e-8");
    o.require(a.max_hess_error <= 1e-8, "hess fd " + g(a.max_hess_error) + " <= 1e-8");
    o.require(a.max_fii_residual <= 1e-12, "fii " + g(a.max_fii_residual) + " <= 1e-12");
    o.require(a.max_fij_residual <= 1e-12, "fij " + g(a.max_fij_residual) + " <= 1e-12");
    o.require(s < 10.0, "runtime " + g(s) + " s < 10 s");
    return o;
}

Outcome ac2_det_form() {
    Outcome o;
    DerivativeAuditConfig c;
    c.samples = 10'000;
    c.seed = kSeed + 1;
    const Timer t;
    const DerivativeAudit a = audit_derivatives(c);
    const double s = t.seconds();
    o.require(a.max_det_form_residual <= 1e-12, "det form vs eigenvalues " + g(a.max_det_form_residual) + " <= 1e-12");
    o.require(a.max_reconstruction_residual <= 1e-12, "eig reconstruction " + g(a.max_reconstruction_residual));
    o.require(s < 5.0, "runtime " + g(s) + " s < 5 s");
    return o;
}

struct LemmaRun {
    LemmaAudit audit;
    double seconds = 0.0;
};

const LemmaRun& lemma_run() {
    static const LemmaRun run = [] {
        LemmaAuditConfig c;
        c.sampler.samples = kLevelSetDraws;
        c.sampler.seed = kSeed;
        c.divided_difference_samples = 100'000;
        const Timer t;
        LemmaRun r{audit_lemmas(c), 0.0};
        r.seconds = t.seconds();
        return r;
    }();
    return run;
}

Outcome ac3_pair_sum_and_trace() {
    Outcome o;
    const LemmaRun& r = lemma_run();
    o.require(r.audit.samples >= 1'000'000, fmt::format("level-set samples {} >= 1e6", r.audit.samples));
    o.require(r.audit.key2.violations == 0,
              fmt::format("pair-sum violations {} (max ratio {})", r.audit.key2.violations, g(r.audit.key2.max_ratio)));
    o.require(r.audit.trace_violations == 0,
              fmt::format("trace violations {} (min ratio {})", r.audit.trace_violations, g(r.audit.min_trace_ratio)));
    o.require(r.seconds < 60.0, "runtime " + g(r.seconds) + " s < 60 s");
    return o;
}

struct ScanPair {
    ScanReport first, second;
    double seconds = 0.0;
};

const ScanPair& scans() {
    static const ScanPair pair = [] {
        VerifierConfig c;
        c.samples = kLevelSetDraws;
        c.seed = kSeed;
        const Timer t;
        ScanPair p;
        p.first = concavity_scan(c);
        c.seed = kSecondSeed;
        p.second = concavity_scan(c);
        p.seconds = t.seconds();
        return p;
    }();
    return pair;
}

Outcome ac4_concavity_scan() {
    Outcome o;
    const ScanPair& p = scans();
    for (const ScanReport* s : {&p.first, &p.second}) {
        o.require(s->threshold_found, "lambda1* = " + g(s->threshold_lambda1));
        o.require(s->samples_above_threshold >= 1'000'000,
                  fmt::format("samples above lambda1* {} >= 1e6", s->samples_above_threshold));
        o.require(s->psd_violations_above_threshold == 0,
                  fmt::format("psd violations above lambda1* {}", s->psd_violations_above_threshold));
        o.require(s->step1_failures_above_threshold == 0 && s->step2_failures_above_threshold == 0,
                  fmt::format("step1/step2 pass {}/{}", g(s->step1_pass_rate_above_threshold()),
                              g(s->step2_pass_rate_above_threshold())));
    }
    const int gap = std::abs(p.first.threshold_bucket - p.second.threshold_bucket);
    o.require(gap <= 1, fmt::format("bucket gap across seeds {} <= 1", gap));
    o.require(p.seconds < 600.0, "runtime " + g(p.seconds) + " s < 600 s");
    return o;
}

Outcome ac5_identity_ledger() {
    Outcome o;
    const ScanPair& p = scans();
    for (const ScanReport* s : {&p.first, &p.second}) {
        o.require(s->identity_failures == 0, fmt::format("identity failures {} over {} samples", s->identity_failures,
                                                         s->accepted));
        o.require(s->max_delta_identity_residual <= 1e-11, "delta identity " + g(s->max_delta_identity_residual));
        o.require(s->max_pair_identity_residual <= 1e-11, "I+II closed form " + g(s->max_pair_identity_residual));
    }
    return o;
}

Outcome ac6_divided_difference() {
    Outcome o;
    const LemmaAudit& a = lemma_run().audit;
    for (const auto& s : a.divided_difference)
        o.require(s.failures == 0 && s.checked == 100'000,
                  fmt::format("beta {} failures {}/{}", s.beta, s.failures, s.checked));
    o.require(a.witness_outside_fails, "witness (2, 1.5, -1.000001) fails");
    o.require(a.witness_inside_holds, "(2, 1, -0.9) holds");
    return o;
}

struct Study {
    std::vector<GridRun> runs;
    double order_coarse = 0.0;
    double order_fine = 0.0;
};

Study study(const char* name) {
    const Problem p = make_problem(name);
    SolverConfig c;
    c.boundary = p.boundary;
    c.rhs = p.rhs;
    Study s;
    s.runs = refinement_study(kGrids, true, c, &*p.exact);
    const double floor = rounding_floor(0.25);
    s.order_coarse = observed_order(s.runs[0].max_error, s.runs[1].max_error, floor);
    s.order_fine = observed_order(s.runs[1].max_error, s.runs[2].max_error, floor);
    return s;
}

void require_converged(Outcome& o, const Study& s) {
    for (const auto& r : s.runs)
        o.require(r.report.converged && r.report.iterations <= 15 && r.report.final_residual <= 1e-8,
                  fmt::format("n={} newton {} residual {} err {} ({} s)", r.n, r.report.iterations,
                              g(r.report.final_residual), g(r.max_error), g(r.seconds)));
}

Outcome ac7_ball_solve() {
    Outcome o;
    const Study s = study("quadratic");
    require_converged(o, s);
    o.require(s.runs[1].max_error <= 5e-3, "error at 33^3 " + g(s.runs[1].max_error) + " <= 5e-3");
    // Errors at rounding level carry no order information; observed_order reports NaN there.
    o.require(s.order_fine >= 1.9, "order (33->65) " + g(s.order_fine) + " >= 1.9, (17->33) " + g(s.order_coarse));
    o.require(s.runs[2].seconds < 300.0, "65^3 runtime " + g(s.runs[2].seconds) + " s < 300 s");
    return o;
}

Outcome ac8_manufactured() {
    Outcome o;
    const Study s = study("manufactured");
    require_converged(o, s);
    o.require(s.order_fine >= 1.9, "order (33->65) " + g(s.order_fine) + " >= 1.9, (17->33) " + g(s.order_coarse));
    return o;
}

Outcome ac9_pogorelov() {
    Outcome o;
    const double beta = 18.0;
    SolverConfig c;
    c.pogorelov_beta = beta;
    const Problem quad = make_problem("quadratic");
    c.boundary = quad.boundary;
    const GridRun ball = refinement_study({33}, true, c, nullptr).front();
    const double ball_value = ball.report.pogorelov.sup_ulam2;
    o.require(std::abs(ball_value - 1.0 / 16.0) <= 0.01 / 16.0, "ball sup(-u)lmax^2 " + g(ball_value) + " vs 1/16");

    c.boundary = make_problem("zero").boundary;
    const auto box = refinement_study(kGrids, false, c, nullptr);
    std::vector<double> sup, local;
    for (const auto& r : box) {
        sup.push_back(r.report.pogorelov.sup_ulam2);
        local.push_back(r.report.pogorelov.ulam2_at_test_max);
        o.require(r.report.converged, fmt::format("box n={} converged in {}", r.n, r.report.iterations));
        o.require(r.report.pogorelov.sup_ulam2 <= 12.0 * beta,
                  fmt::format("box n={} sup {} <= 12 beta", r.n, g(r.report.pogorelov.sup_ulam2)));
    }
    const auto spread = [](const std::vector<double>& v) {
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        return (*hi - *lo) / *hi;
    };
    o.require(spread(sup) < 0.05, "box sup spread " + g(spread(sup)) + " < 0.05");
    o.notes.push_back("(at test-function max: spread " + g(spread(local)) + ")");
    return o;
}

Outcome ac10_liouville() {
    Outcome o;
    LiouvilleConfig c;
    const Timer t;
    const LiouvilleReport bumped = liouville_rescaling_scan(c);
    c.amplitude = 0.0;
    const LiouvilleReport flat = liouville_rescaling_scan(c);
    const double s = t.seconds();
    std::string oscs;
    for (const auto& r : bumped.rows) {
        oscs += fmt::format(" R={}:{}", r.radius, g(r.osc));
        o.require(r.converged, fmt::format("R={} converged", r.radius));
    }
    o.require(bumped.strictly_decreasing, "osc strictly decreasing" + oscs);
    double flat_max = 0.0;
    for (const auto& r : flat.rows) flat_max = std::max(flat_max, r.osc);
    o.require(flat_max <= 1e-6, "unperturbed osc " + g(flat_max) + " <= 1e-6");
    o.require(s < 900.0, "runtime " + g(s) + " s < 900 s");
    return o;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

Outcome ac11_reproducibility() {
    Outcome o;
    const fs::path root = fs::temp_directory_path() / "monge2_acceptance_ac11";
    fs::remove_all(root);
    const std::vector<std::vector<std::string>> campaigns{
        {"verify-derivatives", "--samples", "2000"},
        {"verify-concavity", "--samples", "20000", "--row-stride", "100"},
        {"verify-lemma22", "--samples", "20000", "--divided-difference-samples", "5000"},
        {"solve", "--domain", "box", "--n", "13", "--problem", "zero"},
        {"liouville-scan", "--n", "17"}};
    for (const auto& args : campaigns) {
        std::vector<std::string> listing[2];
        for (int run = 0; run < 2; ++run) {
            const fs::path dir = root / fmt::format("{}_{}", args.front(), run);
            std::vector<std::string> full = args;
            full.insert(full.end(), {"--seed", "7", "--output-dir", dir.string()});
            const int status = monge2::harness::run(full);
            if (status != 0) o.require(false, fmt::format("{} exited {}", args.front(), status));
            for (const auto& e : fs::directory_iterator(dir))
                if (e.path().filename() != "run.log") listing[run].push_back(e.path().filename().string());
            std::sort(listing[run].begin(), listing[run].end());
        }
        bool same = listing[0] == listing[1];
        for (const auto& name : listing[0])
            same = same && slurp(root / (args.front() + "_0") / name) == slurp(root / (args.front() + "_1") / name);
        o.require(same, fmt::format("{} byte-identical ({} files)", args.front(), listing[0].size()));
    }
    fs::remove_all(root);
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"AC1", ac1_derivatives},     {"AC2", ac2_det_form},        {"AC3", ac3_pair_sum_and_trace},
        {"AC4", ac4_concavity_scan},  {"AC5", ac5_identity_ledger}, {"AC6", ac6_divided_difference},
        {"AC7", ac7_ball_solve},      {"AC8", ac8_manufactured},    {"AC9", ac9_pogorelov},
        {"AC10", ac10_liouville},     {"AC11", ac11_reproducibility}};
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        std::string detail;
        for (const auto& n : o.notes) detail += (detail.empty() ? "" : "; ") + n;
        fmt::print("{} {}  {}\n", name, o.passed ? "PASS" : "FAIL", detail);
        std::fflush(stdout);
        if (!o.passed) ++failed;
    }
    fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
    return failed == 0 ? 0 : 1;
}
