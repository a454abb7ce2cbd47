#include "hsvol/betafit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

#include "json.hpp"

namespace hsvol {

namespace {

// Continued fraction for B_x(a, b) (modified Lentz), converging for x < (a+1)/(a+b+2).
double beta_continued_fraction(double x, double a, double b)
{
    constexpr double kTiny = 1e-300;
    constexpr double kEps = 1e-16;
    constexpr int kMaxIter = 100000;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw std::runtime_error("incomplete beta continued fraction did not converge");
}

// x^a (1-x)^b / a * CF(x; a, b)
double lower_tail(double x, double a, double b)
{
    const double front = std::exp(a * std::log(x) + b * std::log1p(-x)) / a;
    return front * beta_continued_fraction(x, a, b);
}

}  // namespace

double beta_complete(double a, double b)
{
    if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("beta: parameters must be positive");
    return std::beta(a, b);
}

double beta_inc(double x, double a, double b)
{
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("beta_inc: x must lie in [0, 1]");
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw std::domain_error("beta_inc: parameters must be positive");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return beta_complete(a, b);
    // Closed forms for unit parameters.
    if (b == 1.0) return std::pow(x, a) / a;
    if (a == 1.0) return -std::expm1(b * std::log1p(-x)) / b;
    if (x < (a + 1.0) / (a + b + 2.0)) return lower_tail(x, a, b);
    return beta_complete(a, b) - lower_tail(1.0 - x, b, a);
}

double beta_inc_regularized(double x, double a, double b) { return beta_inc(x, a, b) / beta_complete(a, b); }

GModel reference_model(Case c)
{
    if (c == Case::real) {
        const double a = 0.5;
        const double b = std::sqrt(3.0);
        return {(4.0 + 1.0 / (5.0 * std::sqrt(2.0))) * std::pow(beta_complete(a, b), 8), a, b};
    }
    const double a = 2.0 * std::sqrt(6.0) / 5.0;
    const double b = 3.0 / std::sqrt(2.0);
    const double lead = 1e8 / (2.0 * std::cbrt(2.0) + std::pow(10.0, 0.75) / std::pow(3.0, 2.0 / 3.0));
    return {lead * std::pow(beta_complete(a, b), 14), a, b};
}

double g_value(double nu, Case c) { return reference_model(c)(nu); }

GModel default_initial_model(const std::vector<double>& f)
{
    const double fmax = f.empty() ? 1.0 : *std::max_element(f.begin(), f.end());
    return {fmax > 0.0 ? fmax : 1.0, 1.0, 1.0};
}

std::vector<double> residuals(const std::vector<double>& nu, const std::vector<double>& f, const GModel& model)
{
    if (nu.size() != f.size()) throw std::invalid_argument("residuals: nu and F differ in length");
    std::vector<double> r(nu.size());
    for (std::size_t k = 0; k < nu.size(); ++k) r[k] = f[k] - model(nu[k]);
    return r;
}

std::vector<double> residuals(const FGrid& grid, const GModel& model) { return residuals(grid.nu, grid.f(), model); }

namespace {

using Params = std::array<double, 3>;  // log scale, log a, log b

GModel to_model(const Params& q) { return {std::exp(q[0]), std::exp(q[1]), std::exp(q[2])}; }
Params to_params(const GModel& m) { return {std::log(m.scale), std::log(m.a), std::log(m.b)}; }

struct Objective {
    const std::vector<double>& nu;
    const std::vector<double>& f;

    bool residual(const Params& q, Eigen::VectorXd& r) const
    {
        const GModel m = to_model(q);
        if (!m.valid() || !std::isfinite(m.scale) || !std::isfinite(m.a) || !std::isfinite(m.b)) return false;
        r.resize(static_cast<Eigen::Index>(nu.size()));
        try {
            for (std::size_t k = 0; k < nu.size(); ++k) r[static_cast<Eigen::Index>(k)] = f[k] - m(nu[k]);
        } catch (const std::exception&) {
            return false;
        }
        return r.allFinite();
    }

    double sse(const Params& q) const
    {
        Eigen::VectorXd r;
        if (!residual(q, r)) return std::numeric_limits<double>::infinity();
        return r.squaredNorm();
    }
};

struct SimplexResult {
    Params best;
    double value;
    int iterations;
};

SimplexResult nelder_mead(const Objective& obj, const Params& start, int max_iter, double scale_ref)
{
    constexpr int n = 3;
    std::array<Params, n + 1> x;
    std::array<double, n + 1> fx;
    x[0] = start;
    for (int i = 0; i < n; ++i) {
        x[i + 1] = start;
        x[i + 1][i] += 0.25;
    }
    for (int i = 0; i <= n; ++i) fx[i] = obj.sse(x[i]);

    int it = 0;
    for (; it < max_iter; ++it) {
        std::array<int, n + 1> order;
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int i, int j) { return fx[i] < fx[j]; });
        auto xs = x;
        auto fs = fx;
        for (int i = 0; i <= n; ++i) {
            x[i] = xs[order[i]];
            fx[i] = fs[order[i]];
        }
        double spread = 0.0;
        for (int i = 1; i <= n; ++i)
            for (int k = 0; k < n; ++k) spread = std::max(spread, std::abs(x[i][k] - x[0][k]));
        if (spread < 1e-9 || fx[n] - fx[0] <= 1e-15 * (fx[0] + scale_ref)) break;

        Params centroid{};
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) centroid[k] += x[i][k] / n;
        auto along = [&](double t) {
            Params p;
            for (int k = 0; k < n; ++k) p[k] = centroid[k] + t * (x[n][k] - centroid[k]);
            return p;
        };

        const Params xr = along(-1.0);
        const double fr = obj.sse(xr);
        if (fr < fx[0]) {
            const Params xe = along(-2.0);
            const double fe = obj.sse(xe);
            if (fe < fr) {
                x[n] = xe;
                fx[n] = fe;
            } else {
                x[n] = xr;
                fx[n] = fr;
            }
            continue;
        }
        if (fr < fx[n - 1]) {
            x[n] = xr;
            fx[n] = fr;
            continue;
        }
        const bool outside = fr < fx[n];
        const Params xc = along(outside ? -0.5 : 0.5);
        const double fc = obj.sse(xc);
        if (fc < (outside ? fr : fx[n])) {
            x[n] = xc;
            fx[n] = fc;
            continue;
        }
        for (int i = 1; i <= n; ++i) {
            for (int k = 0; k < n; ++k) x[i][k] = x[0][k] + 0.5 * (x[i][k] - x[0][k]);
            fx[i] = obj.sse(x[i]);
        }
    }
    const auto best = std::min_element(fx.begin(), fx.end()) - fx.begin();
    return {x[best], fx[best], it};
}

}  // namespace

FitReport fit_beta(const std::vector<double>& nu, const std::vector<double>& f, const GModel& init,
                   const FitOptions& options)
{
    if (nu.size() != f.size()) throw std::invalid_argument("fit_beta: nu and F differ in length");
    const auto interior = std::count_if(nu.begin(), nu.end(), [](double v) { return v > 0.0 && v < 1.0; });
    if (interior < 10) throw std::invalid_argument("fit_beta: need at least 10 interior grid points");
    if (!init.valid()) throw std::invalid_argument("fit_beta: initial model must have positive parameters");
    for (double v : nu)
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("fit_beta: nu values must lie in [0, 1]");

    const Objective obj{nu, f};
    double norm_f = 0.0;
    for (double v : f) norm_f += v * v;
    const double floor_sse = 1e-30 * std::max(norm_f, 1.0);

    const auto simplex = nelder_mead(obj, to_params(init), options.max_simplex_iterations, floor_sse);
    Params q = simplex.best;
    double sse = simplex.value;
    int iterations = simplex.iterations;
    bool converged = false;

    // Damped Gauss-Newton (Levenberg-Marquardt) with central-difference jacobian.
    double lambda = 1e-3;
    Eigen::VectorXd r, rp, rm;
    for (int it = 0; it < options.max_polish_iterations && std::isfinite(sse); ++it) {
        ++iterations;
        if (!obj.residual(q, r)) break;
        Eigen::MatrixXd J(r.size(), 3);
        bool ok = true;
        for (int k = 0; k < 3 && ok; ++k) {
            const double h = 1e-6 * std::max(1.0, std::abs(q[k]));
            Params qp = q, qm = q;
            qp[k] += h;
            qm[k] -= h;
            ok = obj.residual(qp, rp) && obj.residual(qm, rm);
            if (ok) J.col(k) = (rp - rm) / (2.0 * h);
        }
        if (!ok) break;

        const Eigen::Matrix3d jtj = J.transpose() * J;
        const Eigen::Vector3d g = J.transpose() * r;
        bool accepted = false;
        for (int attempt = 0; attempt < 30; ++attempt) {
            Eigen::Matrix3d damped = jtj;
            for (int k = 0; k < 3; ++k) damped(k, k) += lambda * std::max(jtj(k, k), 1e-300);
            const Eigen::Vector3d step = damped.ldlt().solve(-g);
            Params trial = q;
            for (int k = 0; k < 3; ++k) trial[k] += step[k];
            const double trial_sse = obj.sse(trial);
            if (trial_sse <= sse) {
                const double improvement = sse - trial_sse;
                const double prev = sse;
                q = trial;
                sse = trial_sse;
                lambda = std::max(lambda * 0.1, 1e-12);
                accepted = true;
                if (step.cwiseAbs().maxCoeff() < options.step_tolerance &&
                    (improvement <= options.sse_tolerance * prev || sse <= floor_sse))
                    converged = true;
                break;
            }
            lambda *= 10.0;
        }
        if (converged) break;
        if (!accepted) {
            // No descent direction left: the simplex optimum is already stationary.
            converged = sse <= floor_sse || lambda > 1e10;
            break;
        }
    }

    FitReport rep;
    rep.model = to_model(q);
    rep.nu = nu;
    rep.residuals = residuals(nu, f, rep.model);
    rep.sse = 0.0;
    for (double v : rep.residuals) rep.sse += v * v;
    rep.iterations = iterations;
    rep.converged = converged;
    return rep;
}

FitReport fit_beta(const FGrid& grid, const GModel& init, const FitOptions& options)
{
    return fit_beta(grid.nu, grid.f(), init, options);
}

std::vector<double> interpolate_mu_grid(const std::vector<double>& mu, const std::vector<double>& f,
                                        const std::vector<double>& nu_targets)
{
    const std::size_t n = mu.size();
    if (n < 4 || f.size() != n) throw std::invalid_argument("interpolation needs at least 4 samples");
    const double h = mu[1] - mu[0];
    std::vector<double> out;
    out.reserve(nu_targets.size());
    for (double nu : nu_targets) {
        if (!(nu >= 0.0 && nu <= 1.0)) throw std::domain_error("interpolation target outside [0, 1]");
        const double x = std::sqrt(nu);
        auto i = static_cast<std::ptrdiff_t>(std::floor((x - mu[0]) / h)) - 1;
        i = std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(n) - 4);
        double value = 0.0;
        for (std::ptrdiff_t j = i; j < i + 4; ++j) {
            double w = 1.0;
            for (std::ptrdiff_t m = i; m < i + 4; ++m)
                if (m != j) w *= (x - mu[m]) / (mu[j] - mu[m]);
            value += w * f[j];
        }
        out.push_back(value);
    }
    return out;
}

ResidualSeries interpolated_residuals(const std::vector<double>& mu, const std::vector<double>& f, const GModel& model,
                                      std::size_t nu_points)
{
    ResidualSeries rs;
    rs.nu = mu_grid(nu_points);  // uniform on [0, 1]
    const auto fi = interpolate_mu_grid(mu, f, rs.nu);
    rs.residual.resize(fi.size());
    for (std::size_t k = 0; k < fi.size(); ++k) rs.residual[k] = fi[k] - model(rs.nu[k]);
    return rs;
}

std::string fit_report_json(const FitReport& report, const std::string& config_json)
{
    nlohmann::ordered_json j;
    j["model"] = {{"scale", report.model.scale}, {"a", report.model.a}, {"b", report.model.b}};
    j["sse"] = report.sse;
    j["iterations"] = report.iterations;
    j["converged"] = report.converged;
    double max_abs = 0.0;
    for (double r : report.residuals) max_abs = std::max(max_abs, std::abs(r));
    j["max_abs_residual"] = max_abs;
    j["grid_points"] = report.residuals.size();
    j["config"] = nlohmann::ordered_json::parse(config_json);
    return j.dump(2);
}

}  // namespace hsvol
