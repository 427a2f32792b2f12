#include "monge2/concavity.hpp"

#include "extended_jet.hpp"
#include "monge2/errors.hpp"

#include <algorithm>
#include <cmath>

namespace monge2 {

using detail::quad;

namespace {

constexpr double kLevelSetTolerance = 1e-9;

std::size_t pivot_index(Pivot p) noexcept { return static_cast<std::size_t>(p); }
std::size_t partner_index(Pivot p) noexcept { return p == Pivot::Second ? 2 : 1; }

double rel_gap(double a, double b) noexcept {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

void require_strict_top(const Spectrum& lambda) {
    if (!(lambda.largest() > 0.0)) throw DomainError("the largest eigenvalue must be positive");
    if (!(lambda[0] > lambda[1]))
        throw DegeneracyError("the largest eigenvalue must be strictly separated (lambda1 > lambda2)");
}

void require_level_set(const Spectrum& lambda, const char* what) {
    const double f = m_p_value(lambda, 2);
    if (!(std::abs(f - 1.0) <= kLevelSetTolerance))
        throw PreconditionError(std::string(what) + " requires f(lambda) = 1 (|f - 1| <= 1e-9)");
}

// Quantities shared by the step decompositions of one pivot row.
struct RowFrame {
    double l1, lp, lq;
    double n1, np, nq;  // nu_1 = lambda_p + lambda_q, np = l1 + lq, nq = l1 + lp
    double sigma, s1;   // sigma1 and sigma1 + lambda1
    double F1, Fp, Fq;
    double f;
    double top_gap;     // lambda1 - lambda_p
    double row_gap;     // lambda_p - lambda_q
};

RowFrame row_frame(const Spectrum& lambda, Pivot pivot) {
    require_strict_top(lambda);
    const std::size_t p = pivot_index(pivot);
    const std::size_t q = partner_index(pivot);
    if (!(lambda.pair_sum_without(0) > 0.0 && lambda.pair_sum_without(1) > 0.0 &&
          lambda.pair_sum_without(2) > 0.0))
        throw DomainError("the spectrum must lie in P2");
    RowFrame r{};
    r.l1 = lambda[0];
    r.lp = lambda[p];
    r.lq = lambda[q];
    r.n1 = lambda.pair_sum_without(0);
    r.np = lambda.pair_sum_without(p);
    r.nq = lambda.pair_sum_without(q);
    r.sigma = lambda.sigma1();
    r.s1 = lambda.sigma_plus(0);
    r.F1 = r.n1 * r.s1;
    r.Fp = r.np * lambda.sigma_plus(p);
    r.Fq = r.nq * lambda.sigma_plus(q);
    r.f = r.n1 * r.np * r.nq;
    r.top_gap = r.l1 - r.lp;
    r.row_gap = 2.0 * r.lp - r.n1;
    return r;
}

double delta_identity_rhs(const RowFrame& r, double delta) {
    return -(2.0 * r.l1 + delta * r.s1) / (r.l1 * r.n1 * r.s1 * r.s1);
}

} // namespace

void VerifierConfig::validate() const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InputError("epsilon must be positive");
    if (samples <= 0) throw InputError("samples must be positive");
    if (!(lambda1_min > 0.0) || !std::isfinite(lambda1_max) || !(lambda1_min < lambda1_max))
        throw InputError("require 0 < lambda1_min < lambda1_max");
    if (!(relative_tolerance >= 0.0)) throw InputError("relative_tolerance must be non-negative");
    if (buckets_per_decade < 1) throw InputError("buckets_per_decade must be at least 1");
    if (row_stride < 0) throw InputError("row_stride must be non-negative");
}

int sign_case(const Spectrum& lambda, Pivot pivot) noexcept {
    if (lambda[pivot_index(pivot)] < 0.0) return 2;
    if (lambda[partner_index(pivot)] < 0.0) return 3;
    return 1;
}

double quadratic_form_Q(const Spectrum& lambda, const ThirdDerivVector& xi, double delta) {
    require_strict_top(lambda);
    const OperatorJet jet = operator_jet(lambda);
    const auto& x = xi.xi;
    double q = 0.0;
    for (int p = 0; p < 3; ++p)
        for (int r = 0; r < 3; ++r) q -= jet.hess(p, r) * x[static_cast<std::size_t>(p)] * x[static_cast<std::size_t>(r)];
    for (std::size_t i = 1; i < 3; ++i) q += 2.0 * jet.grad[i] * x[i] * x[i] / (lambda[0] - lambda[i]);
    q -= delta * jet.grad[0] * x[0] * x[0] / lambda[0];
    return q;
}

ThirdDerivVector constraint_completion(const Spectrum& lambda, double xi2, double xi3) {
    const OperatorJet jet = operator_jet(lambda);
    return {{-(jet.grad[1] * xi2 + jet.grad[2] * xi3) / jet.grad[0], xi2, xi3}};
}

QFormReport reduced_a_matrix(const Spectrum& lambda, double delta) {
    require_strict_top(lambda);
    const OperatorJet jet = operator_jet(lambda);
    if (!(jet.grad[0] > 0.0)) throw DomainError("F^11 must be positive");
    const detail::QuadForm form = detail::quad_reduced_form(detail::quad_jet(lambda), delta);
    QFormReport out;
    out.a_matrix = {{{static_cast<double>(form.a22), static_cast<double>(form.a23)},
                     {static_cast<double>(form.a23), static_cast<double>(form.a33)}}};
    out.constraint_normal = jet.grad;
    out.min_eig_a = static_cast<double>(form.min_eig);
    out.frobenius_a = static_cast<double>(form.frobenius);
    return out;
}

Step1Terms step1_decomposition(const Spectrum& lambda, double delta, Pivot pivot) {
    const RowFrame r = row_frame(lambda, pivot);
    Step1Terms s;
    const double b_p1 = r.np * r.n1 / r.nq; // f / (lambda1 + lambda_p)^2
    s.terms[0] = b_p1;
    s.terms[1] = b_p1 * r.row_gap / r.s1;
    s.terms[2] = 2.0 * r.Fp / r.top_gap;
    s.terms[3] = r.Fp * r.row_gap * (2.0 * r.l1 + delta * r.s1) / (r.l1 * r.s1 * r.s1);
    s.diff = s.terms[0] + s.terms[1] + s.terms[2] + s.terms[3];
    s.case_v = r.s1 * r.s1 + 2.0 * r.row_gap * r.top_gap;
    s.case_vi = r.s1 * r.l1 + delta * r.row_gap * r.top_gap;
    s.case_id = sign_case(lambda, pivot);

    // Identities: the grouped terms from their definitions, in binary128.
    const detail::QuadJet j = detail::quad_jet(lambda);
    const std::size_t p = pivot_index(pivot);
    const std::size_t q = partner_index(pivot);
    const quad bq_p1 = j.b[p][0];
    const quad term_i = bq_p1;
    const quad term_ii = -bq_p1 / j.grad[0] * (j.grad[p] - j.grad[q]);
    s.pair_identity_residual = detail::relative_gap(term_i + term_ii, 2.0 * r.np * r.n1 / r.s1);

    const quad lhs = j.b[0][0] / (j.grad[0] * j.grad[0]) - quad(delta) / (j.lambda[0] * j.grad[0]) - 1 / j.f;
    s.delta_identity_residual = detail::relative_gap(lhs, delta_identity_rhs(r, delta));

    const double split = (r.Fp / r.s1) * (s.case_v / (r.top_gap * r.s1) + s.case_vi / (r.top_gap * r.l1));
    s.split_identity_residual = rel_gap(s.terms[2] + s.terms[3], split);
    return s;
}

Step2Terms step2_decomposition(const Spectrum& lambda, double delta, Pivot pivot) {
    const RowFrame r = row_frame(lambda, pivot);
    require_level_set(lambda, "step2_decomposition");
    Step2Terms s;
    const double b_p1 = r.np * r.n1 / r.nq;
    const double b_pq = r.np * r.nq / r.n1;
    const double b_11 = r.n1 * r.np / r.nq + r.n1 * r.nq / r.np;
    const double bracket = b_11 / (r.F1 * r.F1) - delta / (r.l1 * r.F1);
    s.terms[0] = (b_p1 + 2.0 * b_pq) - r.Fp * b_11 / r.F1;
    s.terms[1] = -b_p1 * (r.Fp + r.Fq) / r.F1;
    s.terms[2] = 2.0 * r.Fp / r.top_gap;
    s.terms[3] = r.Fp * (r.Fp + r.Fq) * bracket;
    s.sum = s.terms[0] + s.terms[1] + s.terms[2] + s.terms[3];

    const double lp = r.lp, lq = r.lq, l1 = r.l1, sg = r.sigma;
    s.case_v = r.nq * r.s1 - 2.0 * sg * r.n1 + 2.0 * lp * lp + 2.0 * lq * lq;
    s.case_vi = r.nq * r.np * r.top_gap + 2.0 * sg * r.nq * r.top_gap + 2.0 * sg * r.np * (l1 - lq) -
                (delta / l1) * r.Fp * (r.Fp + r.Fq);

    // Normalized spectrum: t_i = lambda_i / lambda1; every 1 + t is a pairwise sum.
    const double one_plus_tp = r.nq / l1;
    const double one_plus_tq = r.np / l1;
    const double one_minus_tp = r.top_gap / l1;
    const double one_minus_tq = (l1 - lq) / l1;
    const double st = 1.0 + r.n1 / l1;
    s.case_vii = one_minus_tp * one_plus_tp * (1.0 + 2.0 * st / one_plus_tq) + 2.0 * st * one_minus_tq -
                 2.0 * delta * one_plus_tp * st * st;
    s.vii_remainder = -2.0 * delta * (r.n1 / l1) * st * st;
    s.case_vii += s.vii_remainder;

    s.case_id = sign_case(lambda, pivot);
    s.lower_bound = s.terms[2] + (r.Fp * s.case_v / r.s1 + s.case_vi) / r.F1;
    s.vi_floor = l1 * l1 * r.np * s.case_vii;
    return s;
}

QFormReport qform_report(const Spectrum& lambda, double delta) {
    QFormReport out = reduced_a_matrix(lambda, delta);
    const detail::QuadJet j = detail::quad_jet(lambda);
    const detail::QuadForm form = detail::quad_reduced_form(j, delta);
    const bool on_level_set = std::abs(m_p_value(lambda, 2) - 1.0) <= kLevelSetTolerance;

    const Pivot pivots[2] = {Pivot::Second, Pivot::Third};
    const quad diag[2] = {form.a22, form.a33};
    double cross = 0.0;
    double split2 = 0.0;
    for (int k = 0; k < 2; ++k) {
        out.step1[static_cast<std::size_t>(k)] = step1_decomposition(lambda, delta, pivots[k]);
        cross = std::max(cross, detail::relative_gap(diag[k] - form.a23, out.step1[static_cast<std::size_t>(k)].diff));
        if (on_level_set) {
            out.step2[static_cast<std::size_t>(k)] = step2_decomposition(lambda, delta, pivots[k]);
            cross = std::max(cross, detail::relative_gap(diag[k] + form.a23, out.step2[static_cast<std::size_t>(k)].sum));
        }
        const std::size_t p = pivot_index(pivots[k]);
        const std::size_t q = partner_index(pivots[k]);
        const quad lhs = j.hess[p][p] + j.hess[p][q];
        const quad rhs = j.grad[p] * (j.grad[p] + j.grad[q]) / j.f - j.b[p][p] - j.b[p][q];
        split2 = std::max(split2, detail::relative_gap(lhs, rhs));
    }
    out.step_crosscheck_residual = cross;
    out.step2_identity_residual = split2;

    const double n1 = lambda.pair_sum_without(0);
    const double F1 = n1 * lambda.sigma_plus(0);
    const double f = m_p_value(lambda, 2);
    const OperatorJet jet = operator_jet(lambda);
    out.b11_identity_residual = rel_gap(f * (jet.b.xy + jet.b.xz), F1 * F1 - 2.0 * f * n1);
    return out;
}

double unrestricted_min_eig_ratio(const Spectrum& lambda, double delta) {
    require_strict_top(lambda);
    const OperatorJet jet = operator_jet(lambda);
    SymMatrix3 m = -1.0 * jet.hess;
    m.xx -= delta * jet.grad[0] / lambda[0];
    m.yy += 2.0 * jet.grad[1] / (lambda[0] - lambda[1]);
    m.zz += 2.0 * jet.grad[2] / (lambda[0] - lambda[2]);
    const double norm = m.frobenius_norm();
    return eigenvalues_sym3(m).smallest() / norm;
}

LemmaKey2Report verify_lemma_key2(std::span<const Spectrum> samples) {
    LemmaKey2Report out;
    for (const Spectrum& s : samples) {
        if (!cone_membership(s, ConeSpec::p2_half()).inside)
            throw PreconditionError("verify_lemma_key2: sample outside P2Half");
        require_level_set(s, "verify_lemma_key2");
        const double pair = s.pair_sum_without(0);
        const double ratio = pair * s[0] * s[0] / 4.0;
        ++out.samples;
        out.max_ratio = std::max(out.max_ratio, ratio);
        if (!(pair > 0.0) || !(ratio <= 1.0)) {
            ++out.violations;
            if (out.violating.size() < 100) out.violating.push_back(s);
        }
    }
    return out;
}

bool verify_divided_difference_bound(const Spectrum& lambda, double beta) {
    if (!(beta >= 6.0)) throw PreconditionError("verify_divided_difference_bound requires beta >= 6");
    if (!cone_membership(lambda, ConeSpec::p2()).inside)
        throw PreconditionError("verify_divided_difference_bound requires a spectrum in P2");
    require_strict_top(lambda);
    const OperatorJet jet = operator_jet(lambda);
    const double l1 = lambda[0];
    bool ok = true;
    for (std::size_t l = 1; l < 3; ++l) {
        const double gap = l1 - lambda[l];
        // 2/(l1 - l) >= 4/(3 l1)  <=>  l1 + 2 l >= 0, compared without division.
        const bool link = l1 + 2.0 * lambda[l] >= 0.0;
        const bool direct = 2.0 * jet.grad[l] * l1 >= (1.0 + 2.0 / beta) * jet.grad[l] * gap;
        ok = ok && link && direct;
    }
    return ok && (4.0 / 3.0 >= 1.0 + 2.0 / beta);
}

double trace_of_gradient(const Spectrum& lambda) {
    const OperatorJet jet = operator_jet(lambda);
    return jet.grad[0] + jet.grad[1] + jet.grad[2];
}

bool verify_trace_lower_bound(const Spectrum& lambda) {
    require_level_set(lambda, "verify_trace_lower_bound");
    return trace_of_gradient(lambda) >= 0.5 * lambda[0] * lambda[0];
}

} // namespace monge2
