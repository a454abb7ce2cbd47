#include "hsvol/volume.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <vector>

#include "hsvol/estimator.hpp"
#include "json.hpp"

namespace hsvol {

QuadratureResult integrate_sep(Case c, const std::function<double(double)>& model)
{
    QuadratureResult r = integrate_jac_weighted(c, model);
    r.value *= 2.0;
    r.error_estimate *= 2.0;
    return r;
}

QuadratureResult integrate_sep(Case c, const GModel& model)
{
    if (!model.valid()) throw std::invalid_argument("integrate_sep: model parameters must be positive");
    return integrate_sep(c, std::function<double(double)>([&model](double nu) { return model(nu); }));
}

namespace {

struct GaussRule {
    std::vector<double> x;  // on [-1, 1]
    std::vector<double> w;
};

GaussRule gauss_legendre(int n)
{
    GaussRule g;
    g.x.resize(n);
    g.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        g.x[i] = -x;
        g.w[i] = w;
        g.x[n - 1 - i] = x;
        g.w[n - 1 - i] = w;
    }
    return g;
}

// Nodes and weights (already multiplied by 2 Jac) on [0, 1], geometrically
// graded toward both endpoints.
struct JacobianRule {
    std::vector<double> nu;
    std::vector<double> weight;
};

JacobianRule jacobian_rule(Case c)
{
    std::vector<double> cuts{0.0};
    for (int j = 48; j >= 2; --j) cuts.push_back(std::ldexp(1.0, -j));
    cuts.push_back(0.5);
    cuts.push_back(1.0 - JacobianCase{c}.series_radius);
    for (int j = 2; j <= 48; ++j) {
        const double v = 1.0 - std::ldexp(1.0, -j);
        if (v > cuts.back()) cuts.push_back(v);
    }
    cuts.push_back(1.0);

    const GaussRule g = gauss_legendre(30);
    JacobianRule rule;
    const JacobianCase jc{c};
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
        const double lo = cuts[p], hi = cuts[p + 1];
        const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            const double nu = mid + half * g.x[i];
            rule.nu.push_back(nu);
            rule.weight.push_back(2.0 * half * g.w[i] * jac(nu, jc));
        }
    }
    return rule;
}

}  // namespace

SeriesIntegration integrate_sep_series(Case c, const GModel& model, int min_terms, double rel_tol, int max_terms)
{
    if (!model.valid()) throw std::invalid_argument("integrate_sep_series: model parameters must be positive");
    const JacobianRule rule = jacobian_rule(c);

    // pw[i] = nu_i^(a + k), advanced by one power of nu per term.
    std::vector<double> pw(rule.nu.size());
    for (std::size_t i = 0; i < pw.size(); ++i) pw[i] = std::pow(rule.nu[i], model.a);

    SeriesIntegration out;
    double pochhammer = 1.0;  // (1 - b)_k / k!
    for (int k = 0; k < max_terms; ++k) {
        if (k > 0) pochhammer *= (k - model.b) / k;
        double moment = 0.0;
        for (std::size_t i = 0; i < pw.size(); ++i) {
            moment += rule.weight[i] * pw[i];
            pw[i] *= rule.nu[i];
        }
        const double term = model.scale * pochhammer / (model.a + k) * moment;
        out.value += term;
        out.last_term = term;
        out.terms = k + 1;
        if (k + 1 >= min_terms && std::abs(term) <= rel_tol * std::abs(out.value)) break;
    }
    return out;
}

VolumeReport report(Case c, double v_sep, const QuadratureResult* diagnostics)
{
    using std::numbers::pi;
    const double sqrt3 = std::sqrt(3.0);
    VolumeReport r;
    r.kind = c;
    r.v_total = exact_total_volume(c);
    r.v_sep = v_sep;
    r.p_sep = v_sep / r.v_total;
    r.total_boundary_ratio = (c == Case::complex ? 30.0 : 18.0) * sqrt3;
    r.doubled_boundary_ratio = 2.0 * r.total_boundary_ratio;
    r.hyperarea_ratio = r.total_boundary_ratio;
    r.h_sep = r.hyperarea_ratio * v_sep;
    if (c == Case::complex) {
        r.conjectured_v_sep = std::pow(5.0 * sqrt3, -7);
        r.conjectured_p_sep = 4.0 * 3.0 * 49.0 * 11.0 * 13.0 * sqrt3 / (625.0 * std::pow(pi, 6));
    }
    if (diagnostics) {
        r.integration_error = diagnostics->error_estimate;
        r.integration_pieces = diagnostics->pieces;
    }
    return r;
}

std::string volume_report_json(const VolumeReport& r, const std::string& config_json)
{
    nlohmann::ordered_json j;
    j["case"] = to_string(r.kind);
    j["V_total"] = r.v_total;
    j["V_sep"] = r.v_sep;
    j["P_sep"] = r.p_sep;
    j["H_sep"] = r.h_sep;
    j["hyperarea_ratio"] = r.hyperarea_ratio;
    j["total_boundary_ratio"] = r.total_boundary_ratio;
    j["doubled_boundary_ratio"] = r.doubled_boundary_ratio;
    if (r.kind == Case::complex) {
        j["conjectured_V_sep"] = r.conjectured_v_sep;
        j["conjectured_P_sep"] = r.conjectured_p_sep;
    }
    j["integration"] = {{"error_estimate", r.integration_error}, {"pieces", r.integration_pieces}};
    j["config"] = nlohmann::ordered_json::parse(config_json);
    return j.dump(2);
}

std::string volume_report_table(const VolumeReport& r)
{
    std::ostringstream os;
    auto row = [&os](const char* name, double v) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "%-22s %.10g\n", name, v);
        os << buf;
    };
    os << "case                   " << to_string(r.kind) << '\n';
    row("V_total", r.v_total);
    row("V_sep", r.v_sep);
    row("P_sep", r.p_sep);
    row("H_sep", r.h_sep);
    row("hyperarea ratio", r.hyperarea_ratio);
    if (r.kind == Case::complex) {
        row("conjectured V_sep", r.conjectured_v_sep);
        row("conjectured P_sep", r.conjectured_p_sep);
    }
    row("quadrature error", r.integration_error);
    return os.str();
}

}  // namespace hsvol
