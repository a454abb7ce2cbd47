#pragma once

#include <string>
#include <vector>

#include "hsvol/bloore.hpp"
#include "hsvol/fgrid.hpp"

namespace hsvol {

// Unregularized incomplete beta function B_x(a, b) = int_0^x w^(a-1) (1-w)^(b-1) dw.
// Throws std::domain_error unless 0 <= x <= 1 and a, b > 0.
double beta_inc(double x, double a, double b);

// Complete beta function B(a, b).
double beta_complete(double a, double b);

// Regularized form I_x(a, b) = B_x(a, b) / B(a, b).
double beta_inc_regularized(double x, double a, double b);

// Scaled incomplete beta model: value(nu) = scale * B_nu(a, b).
struct GModel {
    double scale = 1.0;
    double a = 1.0;
    double b = 1.0;

    double operator()(double nu) const { return scale * beta_inc(nu, a, b); }
    bool valid() const { return scale > 0.0 && a > 0.0 && b > 0.0; }
};

// Fitted models with their printed constants:
//   real:    (4 + 1/(5 sqrt 2)) B(1/2, sqrt 3)^8 B_nu(1/2, sqrt 3)
//   complex: 1e8 / (2 cbrt 2 + 10^(3/4) / 3^(2/3)) B(a, b)^14 B_nu(a, b),
//            a = 2 sqrt(6) / 5, b = 3 / sqrt 2
GModel reference_model(Case c);
double g_value(double nu, Case c);

struct FitOptions {
    int max_simplex_iterations = 4000;
    int max_polish_iterations = 200;
    double step_tolerance = 1e-10;
    double sse_tolerance = 1e-12;
};

struct FitReport {
    GModel model;
    std::vector<double> nu;
    std::vector<double> residuals;  // data - model at each nu
    double sse = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Unweighted least squares for (scale, a, b): Nelder-Mead simplex descent,
// then damped Gauss-Newton with finite-difference derivatives. Requires at
// least 10 points with 0 < nu < 1. On non-convergence the best model found is
// returned with converged = false.
FitReport fit_beta(const std::vector<double>& nu, const std::vector<double>& f, const GModel& init,
                   const FitOptions& options = {});

// Fits F against nu over the whole grid, endpoints included.
FitReport fit_beta(const FGrid& grid, const GModel& init, const FitOptions& options = {});

// Initial guess used when none is given: a = b = 1, scale = max(F).
GModel default_initial_model(const std::vector<double>& f);

// f - model(nu) per point.
std::vector<double> residuals(const std::vector<double>& nu, const std::vector<double>& f, const GModel& model);

std::vector<double> residuals(const FGrid& grid, const GModel& model);

// Local cubic (four-point Lagrange) interpolation of samples f(mu) on the
// uniform mu-grid, evaluated at mu = sqrt(nu) for each requested nu.
std::vector<double> interpolate_mu_grid(const std::vector<double>& mu, const std::vector<double>& f,
                                        const std::vector<double>& nu_targets);

// Residuals on a uniform nu-grid of the given size, through the cubic
// interpolation above.
struct ResidualSeries {
    std::vector<double> nu;
    std::vector<double> residual;
};
ResidualSeries interpolated_residuals(const std::vector<double>& mu, const std::vector<double>& f, const GModel& model,
                                      std::size_t nu_points);

std::string fit_report_json(const FitReport& report, const std::string& config_json = "{}");

}  // namespace hsvol
