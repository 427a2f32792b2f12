#include "monge2/dirichlet.hpp"

#include "monge2/errors.hpp"

#include <cmath>

namespace monge2 {

PogorelovRecord pogorelov_check(const GridField& field, double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw InputError("beta must be positive");
    PogorelovRecord rec;
    rec.beta = beta;
    for (std::size_t node : field.interior_nodes()) {
        const double u = field[node];
        if (u > 0.0) ++rec.positive_nodes;
        if (!(u < 0.0)) continue;
        ++rec.negative_nodes;
        const SymMatrix3 h = hessian_unchecked(field, node);
        const double lmax = eigenvalues_sym3(h).largest();
        const Vec3 x = field.position(node);
        const double w = -u;

        const double ub = std::pow(w, beta) * h.trace();
        rec.sup_ub_delta = std::max(rec.sup_ub_delta, ub);
        const double ul = w * lmax * lmax;
        if (ul > rec.sup_ulam2) {
            rec.sup_ulam2 = ul;
            rec.argmax_ulam2 = x;
        }
        if (lmax > 0.0) {
            const double p = std::log(lmax) + beta * std::log(w) + 0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
            if (p > rec.max_test_function) {
                rec.max_test_function = p;
                rec.argmax_test_function = x;
                rec.ulam2_at_test_max = ul;
            }
        }
    }
    return rec;
}

} // namespace monge2
