#pragma once

#include "monge2/concavity.hpp"
#include "monge2/dirichlet.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace monge2::harness {

struct DerivativeAuditConfig {
    std::int64_t samples = 10000;
    std::uint64_t seed = 42;
    /// Central-difference step for gradient and Hessian checks.
    double fd_step = 1e-6;
    /// Raw triples are uniform in [lower, upper]^3, kept when every pair sum is >= min_pair_sum.
    double lower = -5.0;
    double upper = 10.0;
    double min_pair_sum = 0.1;
    /// Every row_stride-th sample is kept as a detail row.
    std::int64_t row_stride = 100;
};

struct DerivativeRow {
    std::int64_t index = 0;
    Vec3 lambda{};
    double grad_error = 0.0;
    double hess_error = 0.0;
    double identity_residual = 0.0;
    double det_form_residual = 0.0;
};

struct DerivativeAudit {
    std::int64_t samples = 0;
    double max_grad_error = 0.0;
    double max_hess_error = 0.0;
    /// f_i f_j / f = f_ij + b_ij (diagonal and off-diagonal), the f1 f2 product identity, the b11 expansion and b_ii against its defining sum.
    double max_fii_residual = 0.0;
    double max_fij_residual = 0.0;
    double max_product_residual = 0.0;
    double max_b11_residual = 0.0;
    double max_b_diagonal_residual = 0.0;
    /// det(tr(M) I - M) against the eigenvalue path on rotated P2 spectra.
    double max_det_form_residual = 0.0;
    double max_reconstruction_residual = 0.0;
    std::vector<DerivativeRow> rows;
};

DerivativeAudit audit_derivatives(const DerivativeAuditConfig& config);

struct LemmaAuditConfig {
    VerifierConfig sampler;
    std::vector<double> betas{6.0, 18.0, 100.0};
    /// Samples (from the front of the batch) used for the divided-difference sweep.
    std::int64_t divided_difference_samples = 100000;
};

struct DividedDifferenceSweep {
    double beta = 0.0;
    std::int64_t checked = 0;
    std::int64_t failures = 0;
};

struct LemmaAudit {
    std::int64_t draws = 0;
    std::int64_t samples = 0;
    LemmaKey2Report key2;
    std::int64_t trace_violations = 0;
    /// min of sum F^ii / (lambda1^2 / 2); at least 1 when the bound holds.
    double min_trace_ratio = 0.0;
    std::vector<DividedDifferenceSweep> divided_difference;
    /// (2, 1.5, -1 - 1e-6) with beta = 6 must fail; (2, 1, -0.9) must pass.
    bool witness_outside_fails = false;
    bool witness_inside_holds = false;
};

LemmaAudit audit_lemmas(const LemmaAuditConfig& config);

struct GridRun {
    std::int64_t n = 0;
    double h = 0.0;
    SolveReport report;
    /// Max interior error against the exact solution (NaN when none is known).
    double max_error = 0.0;
    double seconds = 0.0;
};

/// Solves on each grid of the family and records the error against `exact` when given.
std::vector<GridRun> refinement_study(const std::vector<std::int64_t>& grids, bool ball, const SolverConfig& config,
                                      const ScalarFunction* exact);

/// log2(e_coarse / e_fine); NaN when e_fine is at or below `floor`, where the
/// ratio is rounding noise rather than discretization error.
double observed_order(double coarse_error, double fine_error, double floor);

/// Rounding floor for nodal errors of a field of magnitude `scale`.
double rounding_floor(double scale) noexcept;

} // namespace monge2::harness
