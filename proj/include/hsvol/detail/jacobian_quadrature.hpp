#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hsvol {

inline constexpr double kQuadAbsTol = 1e-15;
inline constexpr double kQuadRelTol = 1e-11;

template <typename Weight>
QuadratureResult integrate_jac_weighted(Case c, Weight&& weight, double lo, double hi)
{
    if (!(lo >= 0.0 && hi <= 1.0 && lo <= hi)) throw std::invalid_argument("integration range must lie within [0, 1]");
    if (lo == hi) return {0.0, 0.0, 0, true};

    // Start from the series seam and 1/2 so each initial piece is smooth inside.
    const JacobianCase jc{c};
    std::vector<double> breaks{lo};
    for (double cut : {0.5, 1.0 - jc.series_radius})
        if (cut > breaks.back() && cut < hi) breaks.push_back(cut);
    breaks.push_back(hi);

    const auto r = adaptive_gauss_kronrod([&](double nu) { return jac(nu, jc) * weight(nu); }, breaks, kQuadAbsTol,
                                          kQuadRelTol);
    if (!r.converged)
        throw std::runtime_error("jacobian quadrature did not converge (error estimate " +
                                 std::to_string(r.error_estimate) + ")");
    return r;
}

}  // namespace hsvol
