#include "monge2/harness/audits.hpp"

#include "monge2/errors.hpp"
#include "monge2/parallel.hpp"
#include "monge2/random.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace monge2::harness {

namespace {

double rel(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

// Gradient of f at an unsorted triple, entry i belonging to raw[i].
Vec3 gradient_at(const Vec3& raw) {
    const Spectrum s = Spectrum::from_values(raw[0], raw[1], raw[2]);
    const OperatorJet jet = operator_jet(s);
    Vec3 g{};
    std::array<bool, 3> used{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t k = 0; k < 3; ++k)
            if (!used[k] && s[k] == raw[i]) {
                used[k] = true;
                g[i] = jet.grad[k];
                break;
            }
    return g;
}

double f_at(const Vec3& raw) { return m_p_value(std::span<const double>(raw), 2); }

// Rotation from a normalized quaternion.
Mat3 rotation(CounterRng& rng) {
    double q[4];
    double n = 0.0;
    do {
        n = 0.0;
        for (double& c : q) {
            c = rng.uniform(-1.0, 1.0);
            n += c * c;
        }
    } while (n > 1.0 || n < 1e-4);
    n = std::sqrt(n);
    const double w = q[0] / n, x = q[1] / n, y = q[2] / n, z = q[3] / n;
    return {{{1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)},
             {2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)},
             {2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)}}};
}

SymMatrix3 conjugate(const Mat3& r, const Vec3& d) {
    Mat3 m{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t k = 0; k < 3; ++k) m[i][j] += r[i][k] * d[k] * r[j][k];
    return SymMatrix3::from_dense(m);
}

void merge_max(double& a, double b) { a = std::max(a, b); }

} // namespace

DerivativeAudit audit_derivatives(const DerivativeAuditConfig& cfg) {
    if (cfg.samples <= 0) throw InputError("samples must be positive");
    if (!(cfg.fd_step > 0.0)) throw InputError("fd_step must be positive");
    if (!(cfg.lower < cfg.upper) || !(2.0 * cfg.upper > cfg.min_pair_sum)) throw InputError("sampling range is empty");
    const auto n = static_cast<std::size_t>(cfg.samples);
    const double h = cfg.fd_step;

    auto map = [&](std::size_t b, std::size_t e) {
        DerivativeAudit a;
        for (std::size_t idx = b; idx < e; ++idx) {
            CounterRng rng(cfg.seed, idx);
            Vec3 raw{};
            do {
                for (double& v : raw) v = rng.uniform(cfg.lower, cfg.upper);
            } while (Spectrum::from_values(raw[0], raw[1], raw[2]).pair_sum_without(0) < cfg.min_pair_sum);
            const Spectrum s = Spectrum::from_values(raw[0], raw[1], raw[2]);
            const OperatorJet jet = operator_jet(s);

            // Gradient from central differences of f, Hessian from central differences of the gradient.
            double grad_err = 0.0, hess_err = 0.0;
            const Vec3 sorted{s[0], s[1], s[2]};
            for (std::size_t i = 0; i < 3; ++i) {
                Vec3 up = sorted, dn = sorted;
                up[i] += h;
                dn[i] -= h;
                grad_err = std::max(grad_err, rel((f_at(up) - f_at(dn)) / (2.0 * h), jet.grad[i]));
                const Vec3 gu = gradient_at(up), gd = gradient_at(dn);
                for (std::size_t j = 0; j < 3; ++j)
                    hess_err = std::max(hess_err, rel((gu[j] - gd[j]) / (2.0 * h),
                                                      jet.hess(static_cast<int>(i), static_cast<int>(j))));
            }

            double fii = 0.0, fij = 0.0, b_diag = 0.0;
            for (int i = 0; i < 3; ++i) {
                const auto ui = static_cast<std::size_t>(i);
                fii = std::max(fii, rel(jet.grad[ui] * jet.grad[ui] / jet.f, jet.hess(i, i) + jet.b(i, i)));
                for (int j = 0; j < 3; ++j) {
                    if (j == i) continue;
                    const auto uj = static_cast<std::size_t>(j);
                    fij = std::max(fij, rel(jet.grad[ui] * jet.grad[uj] / jet.f, jet.hess(i, j) + jet.b(i, j)));
                }
                double direct = 0.0;
                for (int k = 0; k < 3; ++k)
                    if (k != i) {
                        const double pair = s[ui] + s[static_cast<std::size_t>(k)];
                        direct += jet.f / (pair * pair);
                    }
                b_diag = std::max(b_diag, rel(jet.b(i, i), direct));
            }
            const double s12 = s.pair_sum_without(2);
            const double product = rel(jet.grad[0] * jet.grad[1] / jet.f, 2.0 * s.sigma1() + jet.f / (s12 * s12));
            const double nu0 = s.pair_sum_without(0), sp0 = s.sigma_plus(0);
            const double b11 = rel(jet.f * jet.b(0, 0), nu0 * nu0 * sp0 * sp0 - 2.0 * jet.f * nu0);

            // Determinant form against the eigenvalue path on a rotated copy of the spectrum.
            const SymMatrix3 m = conjugate(rotation(rng), sorted);
            const EigenDecomposition eig = eig_sym3(m);
            const double det_res = rel(m2_det_form(m), m_p_value(eig.spectrum, 2));
            Mat3 back{};
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j)
                    for (std::size_t k = 0; k < 3; ++k)
                        back[i][j] += eig.rotation[k][i] * eig.spectrum[k] * eig.rotation[k][j];
            const double recon = (SymMatrix3::from_dense(back) - m).frobenius_norm() / m.frobenius_norm();

            ++a.samples;
            merge_max(a.max_grad_error, grad_err);
            merge_max(a.max_hess_error, hess_err);
            merge_max(a.max_fii_residual, fii);
            merge_max(a.max_fij_residual, fij);
            merge_max(a.max_product_residual, product);
            merge_max(a.max_b11_residual, b11);
            merge_max(a.max_b_diagonal_residual, b_diag);
            merge_max(a.max_det_form_residual, det_res);
            merge_max(a.max_reconstruction_residual, recon);
            if (cfg.row_stride > 0 && idx % static_cast<std::size_t>(cfg.row_stride) == 0)
                a.rows.push_back({static_cast<std::int64_t>(idx), sorted, grad_err, hess_err,
                                  std::max({fii, fij, product, b11, b_diag}), det_res});
        }
        return a;
    };
    auto combine = [](DerivativeAudit acc, DerivativeAudit p) {
        acc.samples += p.samples;
        merge_max(acc.max_grad_error, p.max_grad_error);
        merge_max(acc.max_hess_error, p.max_hess_error);
        merge_max(acc.max_fii_residual, p.max_fii_residual);
        merge_max(acc.max_fij_residual, p.max_fij_residual);
        merge_max(acc.max_product_residual, p.max_product_residual);
        merge_max(acc.max_b11_residual, p.max_b11_residual);
        merge_max(acc.max_b_diagonal_residual, p.max_b_diagonal_residual);
        merge_max(acc.max_det_form_residual, p.max_det_form_residual);
        merge_max(acc.max_reconstruction_residual, p.max_reconstruction_residual);
        acc.rows.insert(acc.rows.end(), p.rows.begin(), p.rows.end());
        return acc;
    };
    return chunked_reduce(n, 1024, DerivativeAudit{}, map, combine);
}

LemmaAudit audit_lemmas(const LemmaAuditConfig& cfg) {
    cfg.sampler.validate();
    for (double beta : cfg.betas)
        if (!(beta >= 6.0)) throw InputError("divided-difference sweep needs beta >= 6");
    const SampleBatch batch = sample_level_set(cfg.sampler);
    LemmaAudit out;
    out.draws = batch.draws;
    out.samples = static_cast<std::int64_t>(batch.spectra.size());
    out.key2 = verify_lemma_key2(batch.spectra);

    out.min_trace_ratio = std::numeric_limits<double>::infinity();
    for (const Spectrum& s : batch.spectra) {
        if (!verify_trace_lower_bound(s)) ++out.trace_violations;
        const double l1 = s.largest();
        out.min_trace_ratio = std::min(out.min_trace_ratio, trace_of_gradient(s) / (0.5 * l1 * l1));
    }

    const auto dd_count = std::min<std::size_t>(batch.spectra.size(),
                                                static_cast<std::size_t>(std::max<std::int64_t>(0, cfg.divided_difference_samples)));
    for (double beta : cfg.betas) {
        DividedDifferenceSweep sweep{beta, 0, 0};
        for (std::size_t i = 0; i < dd_count; ++i) {
            ++sweep.checked;
            if (!verify_divided_difference_bound(batch.spectra[i], beta)) ++sweep.failures;
        }
        out.divided_difference.push_back(sweep);
    }
    out.witness_outside_fails = !verify_divided_difference_bound(Spectrum::from_values(2.0, 1.5, -1.0 - 1e-6), 6.0);
    out.witness_inside_holds = verify_divided_difference_bound(Spectrum::from_values(2.0, 1.0, -0.9), 6.0);
    return out;
}

std::vector<GridRun> refinement_study(const std::vector<std::int64_t>& grids, bool ball, const SolverConfig& config,
                                      const ScalarFunction* exact) {
    std::vector<GridRun> runs;
    for (std::int64_t n : grids) {
        const auto t0 = std::chrono::steady_clock::now();
        const GridField shell = ball ? GridField::ball(n, 1.0) : GridField::box(n, {-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0});
        Solution sol = solve_dirichlet(config, shell);
        GridRun run;
        run.n = n;
        run.h = shell.spacing()[0];
        run.max_error = exact ? max_interior_error(sol.field, *exact) : std::numeric_limits<double>::quiet_NaN();
        run.report = std::move(sol.report);
        run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        runs.push_back(std::move(run));
    }
    return runs;
}

double rounding_floor(double scale) noexcept {
    return 1e3 * std::numeric_limits<double>::epsilon() * std::max(scale, 1.0);
}

double observed_order(double coarse_error, double fine_error, double floor) {
    if (!(fine_error > floor) || !(coarse_error > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return std::log2(coarse_error / fine_error);
}

} // namespace monge2::harness
