#include "hsvol/jacobian.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace hsvol {

namespace mp = boost::multiprecision;
using wide = mp::cpp_bin_float_50;

void JacobianCase::validate() const
{
    if (!(series_radius > 0.0 && series_radius < 0.5)) throw std::invalid_argument("series radius must lie in (0, 0.5)");
    if (series_terms < 12) throw std::invalid_argument("series must keep at least 12 terms");
}

namespace {

// Numerator P(nu) log sqrt(nu) + Q(nu), divided by den (nu - 1)^order and
// multiplied by nu^(prefactor_halves / 2).
struct ClosedForm {
    std::vector<long long> p;  // coefficients of nu^k
    std::vector<long long> q;
    long long den;
    int order;
    int prefactor_halves;
};

const ClosedForm& closed_form(Case c)
{
    static const ClosedForm real{
        {12 * 1, 12 * 16, 12 * 36, 12 * 16, 12 * 1},
        {-5 * -5, -5 * -32, 0, -5 * 32, -5 * 5},
        3780,
        9,
        3,
    };
    // h1 = Q, h2 = P log sqrt(nu); the leading minus sign moves into den.
    static const ClosedForm complex{
        {-140 * 1, -140 * 49, -140 * 441, -140 * 1225, -140 * 1225, -140 * 441, -140 * 49, -140 * 1},
        {-363, -9947, -48363, -42875, 42875, 48363, 9947, 363},
        -3603600,
        15,
        6,
    };
    return c == Case::real ? real : complex;
}

constexpr int kMaxSeriesTerms = 40;

std::vector<double> derive_series(const ClosedForm& f)
{
    using rational = mp::cpp_rational;
    const int n = f.order + kMaxSeriesTerms;

    // Polynomial coefficients re-expanded in t = nu - 1.
    auto shift = [n](const std::vector<long long>& poly) {
        std::vector<rational> out(n, rational(0));
        for (std::size_t k = 0; k < poly.size(); ++k) {
            mp::cpp_int binom = 1;
            for (std::size_t i = 0; i <= k && static_cast<int>(i) < n; ++i) {
                out[i] += rational(binom * poly[k]);
                binom = binom * (k - i) / (i + 1);
            }
        }
        return out;
    };
    const auto p = shift(f.p);
    const auto q = shift(f.q);

    // log sqrt(1 + t) = sum_{k>=1} (-1)^(k+1) t^k / (2k)
    std::vector<rational> log_half(n, rational(0));
    for (int k = 1; k < n; ++k) log_half[k] = rational((k % 2) ? 1 : -1, 2 * k);

    std::vector<rational> num(q);
    for (int i = 0; i < n; ++i)
        for (int j = 1; i + j < n; ++j) num[i + j] += p[i] * log_half[j];

    for (int i = 0; i < f.order; ++i)
        if (num[i] != 0) throw std::logic_error("jacobian numerator does not vanish to the expected order");

    std::vector<double> s(kMaxSeriesTerms);
    for (int i = 0; i < kMaxSeriesTerms; ++i) s[i] = static_cast<double>(num[f.order + i] / rational(f.den));
    return s;
}

double prefactor(double nu, int halves)
{
    return halves == 3 ? nu * std::sqrt(nu) : nu * nu * nu;
}

void check_nu(double nu)
{
    if (!(nu >= 0.0) || !std::isfinite(nu)) throw std::domain_error("jacobian: nu must be finite and nonnegative");
}

}  // namespace

const std::vector<double>& jac_series_coefficients(Case c)
{
    static const std::vector<double> real = derive_series(closed_form(Case::real));
    static const std::vector<double> complex = derive_series(closed_form(Case::complex));
    return c == Case::real ? real : complex;
}

void init_jacobian_tables()
{
    (void)jac_series_coefficients(Case::real);
    (void)jac_series_coefficients(Case::complex);
}

double jac_closed_form(double nu, Case c)
{
    check_nu(nu);
    if (nu == 0.0) return 0.0;
    if (nu == 1.0) throw std::domain_error("jacobian closed form is 0/0 at nu = 1");
    const ClosedForm& f = closed_form(c);
    const wide x(nu);
    auto horner = [&x](const std::vector<long long>& poly) {
        wide acc = 0;
        for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * x + *it;
        return acc;
    };
    const wide num = horner(f.p) * (log(x) / 2) + horner(f.q);
    const wide den = wide(f.den) * pow(x - 1, f.order);
    const wide pre = f.prefactor_halves == 3 ? x * sqrt(x) : x * x * x;
    return static_cast<double>(pre * num / den);
}

double jac_series(double nu, const JacobianCase& c)
{
    check_nu(nu);
    c.validate();
    const auto& s = jac_series_coefficients(c.kind);
    const int terms = std::min<int>(c.series_terms, static_cast<int>(s.size()));
    const double t = nu - 1.0;
    double acc = 0.0;
    for (int k = terms - 1; k >= 0; --k) acc = acc * t + s[k];
    return prefactor(nu, closed_form(c.kind).prefactor_halves) * acc;
}

double jac(double nu, const JacobianCase& c)
{
    check_nu(nu);
    c.validate();
    if (std::abs(nu - 1.0) <= c.series_radius) return jac_series(nu, c);
    return jac_closed_form(nu, c.kind);
}

QuadratureResult jac_integral(Case c, double lo, double hi)
{
    return integrate_jac_weighted(c, [](double) { return 1.0; }, lo, hi);
}

}  // namespace hsvol
