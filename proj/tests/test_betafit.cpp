#include <boost/math/quadrature/tanh_sinh.hpp>

#include "doctest.h"
#include "hsvol/betafit.hpp"
#include "hsvol/estimator.hpp"
#include "reference_values.hpp"
#include "test_util.hpp"

using namespace hsvol;
using testutil::rel;

namespace {

// Independent oracle: B_x(a, b) by tanh-sinh quadrature of the integrand.
double beta_inc_oracle(double x, double a, double b)
{
    boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate([a, b](double w) { return std::pow(w, a - 1.0) * std::pow(1.0 - w, b - 1.0); }, 0.0, x);
}

struct Synthetic {
    std::vector<double> nu, f;
};

Synthetic synthetic(const GModel& m, double noise = 0.0)
{
    Synthetic s;
    std::mt19937_64 rng(99);
    std::normal_distribution<double> n(0.0, 1.0);
    for (double mu : mu_grid(201)) {
        s.nu.push_back(mu * mu);
        s.f.push_back(m(mu * mu) * (1.0 + noise * n(rng)));
    }
    return s;
}

}  // namespace

TEST_SUITE("betafit")
{
    TEST_CASE("incomplete beta matches reference values")
    {
        for (const auto& p : reference::kIncompleteBeta) {
            CAPTURE(p.x);
            CHECK(rel(beta_inc(p.x, p.a, p.b), p.value) < 1e-13);
        }
    }

    TEST_CASE("incomplete beta matches tanh-sinh quadrature")
    {
        for (double a : {0.5, 0.98, 1.0, 1.7, 3.2})
            for (double b : {0.4, 1.0, 1.732, 2.12, 5.0})
                for (double x : {0.001, 0.1, 0.37, 0.5, 0.8, 0.999}) {
                    CAPTURE(a);
                    CAPTURE(b);
                    CAPTURE(x);
                    CHECK(rel(beta_inc(x, a, b), beta_inc_oracle(x, a, b)) < 1e-10);
                }
    }

    TEST_CASE("special values and identities")
    {
        for (double nu : {0.0, 0.1, 0.25, 0.5, 0.9, 1.0}) CHECK(beta_inc(nu, 1.0, 1.0) == nu);
        CHECK(rel(beta_inc(0.5, 0.5, 0.5), std::numbers::pi / 2.0) < 1e-12);
        CHECK(rel(beta_complete(2.0, 3.0), 1.0 / 12.0) < 1e-15);
        CHECK(beta_inc(0.0, 2.0, 3.0) == 0.0);
        CHECK(rel(beta_inc(1.0, 2.0, 3.0), 1.0 / 12.0) < 1e-14);
        CHECK(rel(beta_inc_regularized(0.3, 2.5, 1.5) + beta_inc_regularized(0.7, 1.5, 2.5), 1.0) < 1e-14);
        for (double a : {0.3, 1.2, 4.0})
            for (double b : {0.5, 1.732, 7.0})
                for (double x : {0.05, 0.4, 0.95})
                    CHECK(rel(beta_inc(x, a, b) + beta_inc(1.0 - x, b, a), beta_complete(a, b)) < 1e-13);
    }

    TEST_CASE("incomplete beta is increasing in x and rejects bad input")
    {
        double prev = -1.0;
        for (double x = 0.0; x <= 1.0; x += 1.0 / 512) {
            const double v = beta_inc(x, 0.9798, 2.1213);
            CHECK(v > prev);
            prev = v;
        }
        CHECK_THROWS_AS(beta_inc(-0.1, 1.0, 1.0), std::domain_error);
        CHECK_THROWS_AS(beta_inc(1.1, 1.0, 1.0), std::domain_error);
        CHECK_THROWS_AS(beta_inc(0.5, 0.0, 1.0), std::domain_error);
        CHECK_THROWS_AS(beta_complete(1.0, -2.0), std::domain_error);
    }

    TEST_CASE("reference models")
    {
        const GModel r = reference_model(Case::real);
        CHECK(r.a == 0.5);
        CHECK(r.b == std::sqrt(3.0));
        CHECK(rel(r.scale, reference::kScaleReal) < 1e-13);
        for (auto [nu, v] : reference::kModelReal) CHECK(rel(g_value(nu, Case::real), v) < 1e-12);

        const GModel c = reference_model(Case::complex);
        CHECK(c.a == doctest::Approx(2.0 * std::sqrt(6.0) / 5.0));
        CHECK(c.b == doctest::Approx(3.0 / std::sqrt(2.0)));
        CHECK(rel(c.scale, reference::kScaleComplex) < 1e-13);
        for (auto [nu, v] : reference::kModelComplex) CHECK(rel(g_value(nu, Case::complex), v) < 1e-12);
    }

    TEST_CASE("zero-noise fit recovers the generating parameters")
    {
        for (Case c : {Case::real, Case::complex}) {
            const GModel truth = reference_model(c);
            const Synthetic s = synthetic(truth);
            const FitReport fit = fit_beta(s.nu, s.f, default_initial_model(s.f));
            CHECK(fit.converged);
            CHECK(rel(fit.model.a, truth.a) < 1e-6);
            CHECK(rel(fit.model.b, truth.b) < 1e-6);
            CHECK(rel(fit.model.scale, truth.scale) < 1e-6);
            CHECK(fit.residuals.size() == s.nu.size());
            for (double r : residuals(s.nu, s.f, truth)) CHECK(std::abs(r) < 1e-12);
        }
    }

    TEST_CASE("noisy fit stays close to the generating parameters")
    {
        const GModel truth{100.0, 0.7, 2.5};
        const Synthetic s = synthetic(truth, 0.005);
        const FitReport fit = fit_beta(s.nu, s.f, default_initial_model(s.f));
        CHECK(fit.converged);
        CHECK(rel(fit.model.a, truth.a) < 0.03);
        CHECK(rel(fit.model.b, truth.b) < 0.03);
        CHECK(rel(fit.model.scale, truth.scale) < 0.03);
        CHECK(fit.sse > 0.0);
    }

    TEST_CASE("fit from an FGrid and residuals against a zero model")
    {
        EstimationConfig cfg;
        cfg.points = 200000;
        const FGrid g = estimate_f(cfg);
        const auto r0 = residuals(g, GModel{0.0, 1.0, 1.0});
        const auto f = g.f();
        for (std::size_t k = 0; k < f.size(); ++k) CHECK(r0[k] == f[k]);
        const FitReport fit = fit_beta(g, default_initial_model(f));
        CHECK(fit.converged);
        CHECK(fit.model.a == doctest::Approx(0.5).epsilon(0.05));
        CHECK(fit.model.b == doctest::Approx(std::sqrt(3.0)).epsilon(0.05));
    }

    TEST_CASE("fit preconditions")
    {
        const Synthetic s = synthetic(GModel{1.0, 1.0, 1.0});
        std::vector<double> few(s.nu.begin(), s.nu.begin() + 5), few_f(s.f.begin(), s.f.begin() + 5);
        CHECK_THROWS_AS(fit_beta(few, few_f, GModel{}), std::invalid_argument);
        CHECK_THROWS_AS(fit_beta(s.nu, few_f, GModel{}), std::invalid_argument);
        CHECK_THROWS_AS(fit_beta(s.nu, s.f, GModel{-1.0, 1.0, 1.0}), std::invalid_argument);
        CHECK(default_initial_model(s.f).scale == *std::max_element(s.f.begin(), s.f.end()));
    }

    TEST_CASE("mu-grid interpolation is exact for cubics")
    {
        const auto mu = mu_grid(41);
        std::vector<double> f;
        for (double m : mu) f.push_back(1.0 - 2.0 * m + 0.5 * m * m * m);
        const std::vector<double> targets{0.0, 0.013, 0.25, 0.5, 0.77, 1.0};
        const auto v = interpolate_mu_grid(mu, f, targets);
        for (std::size_t i = 0; i < targets.size(); ++i) {
            const double m = std::sqrt(targets[i]);
            CHECK(v[i] == doctest::Approx(1.0 - 2.0 * m + 0.5 * m * m * m).epsilon(1e-12));
        }
        CHECK_THROWS_AS(interpolate_mu_grid(mu, f, {1.5}), std::domain_error);
        const auto series = interpolated_residuals(mu, f, GModel{0.0, 1.0, 1.0}, 11);
        CHECK(series.nu.size() == 11);
        CHECK(series.residual.front() == doctest::Approx(1.0));
    }

    TEST_CASE("fit report JSON")
    {
        const Synthetic s = synthetic(reference_model(Case::real));
        const FitReport fit = fit_beta(s.nu, s.f, default_initial_model(s.f));
        const std::string json = fit_report_json(fit, R"({"in": "F.csv"})");
        CHECK(json.find("\"a\"") != std::string::npos);
        CHECK(json.find("\"converged\": true") != std::string::npos);
        CHECK(json.find("F.csv") != std::string::npos);
    }
}
