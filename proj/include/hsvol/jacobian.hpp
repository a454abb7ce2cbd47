#pragma once

// Jacobians Jac(nu) of the diagonal simplex at fixed ratio nu.
//
// Real:    nu^(3/2) (12 P(nu) log sqrt(nu) - 5 Q(nu)) / (3780 (nu - 1)^9)
// Complex: -nu^3 (h1(nu) + h2(nu)) / (3603600 (nu - 1)^15)
//
// The numerators vanish to ninth / fifteenth order at nu = 1, so the closed
// forms are evaluated in 50-digit arithmetic and replaced by a Taylor series
// about nu = 1 inside |nu - 1| <= delta.

#include <vector>

#include "hsvol/bloore.hpp"
#include "hsvol/quadrature.hpp"

namespace hsvol {

struct JacobianCase {
    Case kind = Case::real;
    double series_radius = 0.1;
    int series_terms = 16;

    // Throws std::invalid_argument unless delta in (0, 0.5) and terms >= 12.
    void validate() const;
};

// Evaluates the series branch where |nu - 1| <= delta, the closed form elsewhere.
// Throws std::domain_error for negative or non-finite nu.
double jac(double nu, const JacobianCase& c);
inline double jac(double nu, Case c) { return jac(nu, JacobianCase{c}); }

// Branch-forced evaluations, used to check the seam.
double jac_closed_form(double nu, Case c);
double jac_series(double nu, const JacobianCase& c);

// Series coefficients s_k with jac(nu) = prefactor(nu) * sum_k s_k (nu - 1)^k.
// Computed once from exact rational expansions.
const std::vector<double>& jac_series_coefficients(Case c);

// Forces the one-time coefficient setup; call before spawning workers.
void init_jacobian_tables();

// Globally adaptive Gauss-Kronrod integral of jac(nu) * weight(nu) over [lo, hi] within [0, 1].
// Throws std::runtime_error if the error estimate misses the tolerances
// (absolute 1e-15, relative 1e-11).
template <typename Weight>
QuadratureResult integrate_jac_weighted(Case c, Weight&& weight, double lo = 0.0, double hi = 1.0);

// Integral of jac over [0, 1] (or [lo, hi]).
QuadratureResult jac_integral(Case c, double lo = 0.0, double hi = 1.0);

}  // namespace hsvol

#include "hsvol/detail/jacobian_quadrature.hpp"
