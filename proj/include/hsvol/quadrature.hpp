#pragma once

// Globally adaptive Gauss-Kronrod (7/15-point) quadrature: the interval with
// the largest error estimate is bisected until the summed estimate is below
// both abs_tol and rel_tol * |integral|.

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <span>
#include <stdexcept>
#include <vector>

namespace hsvol {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int pieces = 0;
    bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (the 7-point rule).
inline constexpr std::array<double, 4> kGaussWeights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780, 0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Piece {
    double a, b, value, error;
    bool operator<(const Piece& o) const { return error < o.error; }
};

template <typename F>
Piece kronrod15(F& f, double a, double b)
{
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        const double sum = f(centre - dx) + f(centre + dx);
        kronrod += kKronrodWeights[j] * sum;
        if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

// Integrates f over consecutive breakpoints (at least two, ascending).
template <typename F>
QuadratureResult adaptive_gauss_kronrod(F&& f, std::span<const double> breaks, double abs_tol, double rel_tol,
                                        int max_pieces = 20000)
{
    if (breaks.size() < 2) throw std::invalid_argument("quadrature needs at least two breakpoints");
    std::priority_queue<detail::Piece> heap;
    double value = 0.0, error = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i + 1] > breaks[i])) continue;
        auto p = detail::kronrod15(f, breaks[i], breaks[i + 1]);
        value += p.value;
        error += p.error;
        heap.push(p);
    }
    QuadratureResult r;
    auto done = [abs_tol, rel_tol](double err, double val) {
        return err <= abs_tol && err <= rel_tol * std::abs(val);
    };
    while (!heap.empty() && !(done(error, value) || error == 0.0) &&
           static_cast<int>(heap.size()) < max_pieces) {
        const detail::Piece worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;  // cannot split further
        heap.pop();
        const auto left = detail::kronrod15(f, worst.a, mid);
        const auto right = detail::kronrod15(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to drop accumulated cancellation in the running totals.
    r.value = 0.0;
    r.error_estimate = 0.0;
    r.pieces = static_cast<int>(heap.size());
    while (!heap.empty()) {
        r.value += heap.top().value;
        r.error_estimate += heap.top().error;
        heap.pop();
    }
    r.converged = done(r.error_estimate, r.value) || r.error_estimate == 0.0;
    return r;
}

}  // namespace hsvol
