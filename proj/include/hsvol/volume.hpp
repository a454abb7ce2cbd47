#pragma once

#include <functional>
#include <string>

#include "hsvol/betafit.hpp"
#include "hsvol/jacobian.hpp"

namespace hsvol {

// 2 int_0^1 Jac(nu) model(nu) dnu by adaptive Gauss-Kronrod quadrature.
QuadratureResult integrate_sep(Case c, const GModel& model);
QuadratureResult integrate_sep(Case c, const std::function<double(double)>& model);

struct SeriesIntegration {
    double value = 0.0;
    int terms = 0;
    double last_term = 0.0;
};

// Cross-check path: model = scale nu^a sum_k (1-b)_k nu^k / (k! (a + k)),
// integrated term by term against Jac with a composite Gauss-Legendre rule
// (in powers of sqrt(nu) when a is a half-integer). Stops when a term falls
// below rel_tol of the running sum, after at least min_terms terms.
SeriesIntegration integrate_sep_series(Case c, const GModel& model, int min_terms = 75, double rel_tol = 1e-13,
                                       int max_terms = 200000);

struct VolumeReport {
    Case kind = Case::real;
    double v_total = 0.0;
    double v_sep = 0.0;
    double p_sep = 0.0;
    double h_sep = 0.0;
    double hyperarea_ratio = 0.0;           // H_sep / V_sep used for h_sep
    double doubled_boundary_ratio = 0.0;     // twice the total-set boundary/volume ratio
    double total_boundary_ratio = 0.0;       // 30 sqrt 3 (complex) / 18 sqrt 3 (real)
    // Earlier conjectured closed forms (complex case only; zero otherwise).
    double conjectured_v_sep = 0.0;
    double conjectured_p_sep = 0.0;
    double integration_error = 0.0;
    int integration_pieces = 0;
};

// H_sep = total_boundary_ratio * V_sep, which reproduces the reported
// hyperareas 1.42285e-5 (complex) and 0.02279111 (real).
VolumeReport report(Case c, double v_sep, const QuadratureResult* diagnostics = nullptr);

std::string volume_report_json(const VolumeReport& r, const std::string& config_json = "{}");
std::string volume_report_table(const VolumeReport& r);

}  // namespace hsvol
