#include "hsvol/acceptance.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "hsvol/betafit.hpp"
#include "hsvol/estimator.hpp"
#include "hsvol/jacobian.hpp"
#include "hsvol/volume.hpp"

namespace hsvol {

namespace {

std::string fmt(const char* format, auto... args)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

double rel_diff(double value, double target) { return std::abs(value - target) / std::abs(target); }

std::vector<Case> selected_cases(const AcceptanceOptions& o)
{
    if (o.only) return {*o.only};
    return {Case::real, Case::complex};
}

class Runner {
public:
    Runner(const AcceptanceOptions& o, std::ostream* live) : options_(o), live_(live) {}

    template <typename Body>
    void criterion(int id, std::string title, Body&& body)
    {
        if (options_.progress) options_.progress("criterion " + std::to_string(id) + ": " + title);
        CriterionResult r;
        r.id = id;
        r.title = std::move(title);
        const auto t0 = std::chrono::steady_clock::now();
        try {
            r.pass = body(r.details);
        } catch (const std::exception& e) {
            r.pass = false;
            r.details.push_back(std::string("exception: ") + e.what());
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (live_) *live_ << format_result(r) << std::flush;
        results_.push_back(std::move(r));
    }

    std::vector<CriterionResult> take() { return std::move(results_); }

private:
    const AcceptanceOptions& options_;
    std::ostream* live_;
    std::vector<CriterionResult> results_;
};

// Records one comparison line and returns whether it passed.
bool check(std::vector<std::string>& details, const std::string& what, double value, double target, double tol)
{
    const double rel = rel_diff(value, target);
    const bool ok = rel <= tol;
    details.push_back(fmt("%-4s %-28s %.10g vs %.10g (rel %.2e, tol %.0e)", ok ? "ok" : "FAIL", what.c_str(), value,
                          target, rel, tol));
    return ok;
}

bool check_quoted(std::vector<std::string>& details, const std::string& what, double value, const std::string& quoted,
                  double tol)
{
    const bool ok = matches_quoted(value, quoted, tol);
    details.push_back(fmt("%-4s %-28s %.10g vs %s (rel %.2e, tol %.0e or last digit)", ok ? "ok" : "FAIL",
                          what.c_str(), value, quoted.c_str(), rel_diff(value, std::stod(quoted)), tol));
    return ok;
}

EstimationConfig desk_config(const AcceptanceOptions& o, Case c, std::uint64_t points)
{
    EstimationConfig cfg;
    cfg.kind = c;
    cfg.points = points;
    cfg.seed = o.seed;
    cfg.workers = o.workers;
    return cfg;
}

BlooreRealVector random_real(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    BlooreRealVector z;
    for (auto& x : z.z) x = u(rng);
    return z;
}

BlooreComplexVector random_complex(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    BlooreComplexVector z;
    for (auto& x : z.z) x = std::polar(std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
    return z;
}

// Direct nu * det(rho_PT) / prod(d) with the canonical diagonal.
double direct_pt_value(const DensityMatrix4& rho, const DiagonalVector& d, double nu)
{
    return nu * partial_transpose(rho).determinant().real() / d.product();
}

}  // namespace

bool matches_quoted(double value, const std::string& quoted, double rel_tol)
{
    const double target = std::stod(quoted);
    // Position of the last printed digit relative to the decimal point.
    const auto e_pos = quoted.find_first_of("eE");
    const std::string mantissa = quoted.substr(0, e_pos);
    const int exponent = e_pos == std::string::npos ? 0 : std::stoi(quoted.substr(e_pos + 1));
    const auto dot = mantissa.find('.');
    const int decimals = dot == std::string::npos ? 0 : static_cast<int>(mantissa.size() - dot - 1);
    const double half_unit = 0.5 * std::pow(10.0, exponent - decimals);
    return std::abs(value - target) <= std::max(rel_tol * std::abs(target), half_unit);
}

std::string format_result(const CriterionResult& r)
{
    std::ostringstream os;
    os << (r.pass ? "PASS" : "FAIL") << " [" << r.id << "] " << r.title << fmt(" (%.1f s)", r.seconds) << '\n';
    for (const auto& d : r.details) os << "       " << d << '\n';
    return os.str();
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& o, std::ostream* live)
{
    init_jacobian_tables();
    Runner run(o, live);
    const auto cases = selected_cases(o);

    // Criteria 1-3 share the desk-scale F grids.
    std::optional<FGrid> grid_real, grid_complex;
    auto grid_for = [&](Case c) -> const FGrid& {
        auto& slot = c == Case::real ? grid_real : grid_complex;
        if (!slot) slot = estimate_f(desk_config(o, c, c == Case::real ? o.real_points : o.complex_points));
        return *slot;
    };

    for (Case c : cases) {
        const bool real = c == Case::real;
        run.criterion(real ? 1 : 2, std::string("total ") + to_string(c) + " Hilbert-Schmidt volume",
                      [&](std::vector<std::string>& details) {
                          const FGrid& g = grid_for(c);
                          details.push_back(fmt("N = %llu, n_psd = %llu", static_cast<unsigned long long>(g.n_points),
                                                static_cast<unsigned long long>(g.n_psd)));
                          return check(details, "V_total estimate", total_volume(g), exact_total_volume(c),
                                       real ? 0.01 : 0.02);
                      });
    }

    run.criterion(3, "spot values of F at nu = 1 and nu = 1/4", [&](std::vector<std::string>& details) {
        bool ok = true;
        for (Case c : cases) {
            const FGrid& g = grid_for(c);
            const bool real = c == Case::real;
            const std::string name = real ? "F_real" : "F_complex";
            ok &= check(details, name + "(1)", g.f_at(g.index_of_mu(1.0)), real ? 114.62351 : 387.5080921, 0.02);
            ok &= check(details, name + "(1/4)", g.f_at(g.index_of_mu(0.5)), real ? 74.10608 : 180.7173447, 0.02);
        }
        return ok;
    });

    run.criterion(4, "model evaluation G(1)", [&](std::vector<std::string>& details) {
        bool ok = true;
        for (Case c : cases)
            ok &= check_quoted(details, std::string("G_") + to_string(c) + "(1)", g_value(1.0, c),
                               c == Case::real ? "114.6270015" : "387.486102", 1e-6);
        return ok;
    });

    run.criterion(5, "separable volume, probability and hyperarea", [&](std::vector<std::string>& details) {
        bool ok = true;
        for (Case c : cases) {
            const bool real = c == Case::real;
            const double tol = real ? 1e-5 : 1e-6;
            const auto q = integrate_sep(c, reference_model(c));
            const VolumeReport r = report(c, q.value, &q);
            const std::string s = to_string(c);
            ok &= check_quoted(details, "V_sep " + s, r.v_sep, real ? "0.0007310253" : "2.73827578e-7", tol);
            ok &= check_quoted(details, "P_sep " + s, r.p_sep, real ? "0.4538838" : "0.24248582", tol);
            ok &= check_quoted(details, "H_sep " + s, r.h_sep, real ? "0.02279111" : "1.42285e-5", tol);
        }
        return ok;
    });

    run.criterion(6, "oracle equivalences (determinant, PT sign, CAD)", [&](std::vector<std::string>& details) {
        std::mt19937_64 rng(20240601);
        std::uniform_real_distribution<double> mu_dist(0.0, 2.0);
        bool ok = true;
        const std::uint64_t n = o.oracle_samples;

        // (a) closed-form determinant of W against a direct LU determinant.
        double worst = 0.0;
        for (std::uint64_t i = 0; i < n; ++i) {
            const auto zr = random_real(rng);
            worst = std::max(worst, std::abs(a2_real(zr) - bloore_matrix(zr).determinant()) /
                                        std::max(1.0, std::abs(bloore_matrix(zr).determinant())));
            const auto zc = random_complex(rng);
            const double direct = bloore_matrix(zc).determinant().real();
            worst = std::max(worst, std::abs(a2_complex(zc) - direct) / std::max(1.0, std::abs(direct)));
        }
        const bool a_ok = worst <= 1e-10;
        details.push_back(fmt("%-4s (a) determinant polynomial: worst rel error %.2e over %llu inputs per case",
                              a_ok ? "ok" : "FAIL", worst, static_cast<unsigned long long>(n)));
        ok &= a_ok;

        // (b) quartic / scaled-determinant sign against the direct PT determinant.
        std::uint64_t disagree = 0, skipped = 0;
        for (std::uint64_t i = 0; i < n; ++i) {
            const NuRatio nu = NuRatio::from_mu(mu_dist(rng));
            const DiagonalVector d = canonical_diagonals(nu);
            const auto zr = random_real(rng);
            const double direct_r = direct_pt_value(assemble_density(zr, d), d, nu.nu());
            const double fast_r = eval_quartic(a3_quartic_coeffs(zr), nu.mu());
            const auto zc = random_complex(rng);
            const double direct_c = direct_pt_value(assemble_density(zc, d), d, nu.nu());
            const double fast_c = scaled_pt_determinant(zc, nu.mu());
            for (auto [direct, fast] : {std::pair{direct_r, fast_r}, std::pair{direct_c, fast_c}}) {
                if (std::abs(direct) < 1e-8) {
                    ++skipped;
                    continue;
                }
                disagree += (direct > 0.0) != (fast > 0.0);
            }
        }
        const bool b_ok = disagree == 0;
        details.push_back(fmt("%-4s (b) PT determinant sign: %llu disagreements, %llu near-zero pairs skipped",
                              b_ok ? "ok" : "FAIL", static_cast<unsigned long long>(disagree),
                              static_cast<unsigned long long>(skipped)));
        ok &= b_ok;

        // (c) CAD membership against the smallest eigenvalue.
        std::uint64_t mismatch = 0, boundary = 0, inside = 0;
        for (std::uint64_t i = 0; i < n; ++i) {
            const auto z = random_real(rng);
            const double lambda_min =
                Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(bloore_matrix(z), Eigen::EigenvaluesOnly)
                    .eigenvalues()(0);
            const bool by_eigen = lambda_min >= 0.0;
            inside += by_eigen;
            if (cad_contains(z) == by_eigen) continue;
            if (std::abs(lambda_min) < 1e-9) {
                ++boundary;
                continue;
            }
            ++mismatch;
        }
        const bool c_ok = mismatch == 0;
        details.push_back(fmt("%-4s (c) CAD vs eigenvalues: %llu mismatches, %llu at the boundary, %llu PSD samples",
                              c_ok ? "ok" : "FAIL", static_cast<unsigned long long>(mismatch),
                              static_cast<unsigned long long>(boundary), static_cast<unsigned long long>(inside)));
        return ok && c_ok;
    });

    run.criterion(7, "reflection law and estimator symmetry", [&](std::vector<std::string>& details) {
        bool ok = true;
        for (Case c : cases) {
            double worst = 0.0;
            for (double nu : {0.001, 0.05, 0.3, 0.5, 0.9, 0.95, 0.999, 1.0, 1.05, 1.5, 3.0, 20.0, 250.0})
                worst = std::max(worst, rel_diff(jac(1.0 / nu, c), nu * nu * jac(nu, c)));
            const bool r_ok = worst <= 1e-10;
            details.push_back(fmt("%-4s jac(1/nu) = nu^2 jac(nu), %s: worst rel %.2e", r_ok ? "ok" : "FAIL",
                                  to_string(c), worst));
            ok &= r_ok;

            // Pointwise: relabeling the second qubit maps the PPT test at nu to the one at 1/nu.
            std::mt19937_64 rng(20240602);
            std::uniform_real_distribution<double> mu_dist(0.05, 1.0);
            std::uint64_t disagree = 0;
            for (std::uint64_t i = 0; i < o.oracle_samples; ++i) {
                const NuRatio nu = NuRatio::from_mu(mu_dist(rng));
                const NuRatio inverse = NuRatio::from_mu(1.0 / nu.mu());
                if (c == Case::real) {
                    const auto z = random_real(rng);
                    disagree += is_ppt(z, nu) != is_ppt(flip_second_qubit(z), inverse);
                } else {
                    const auto z = random_complex(rng);
                    disagree += is_ppt(z, nu) != is_ppt(flip_second_qubit(z), inverse);
                }
            }
            const bool p_ok = disagree == 0;
            details.push_back(fmt("%-4s PPT(z, nu) = PPT(flip(z), 1/nu), %s: %llu disagreements", p_ok ? "ok" : "FAIL",
                                  to_string(c), static_cast<unsigned long long>(disagree)));
            ok &= p_ok;

            const std::uint64_t n = c == Case::real ? o.symmetry_points_real : o.symmetry_points_complex;
            const SymmetryResult s = symmetry_check(desk_config(o, c, n), 0.25);
            const bool s_ok = s.relative_difference <= 0.02;
            details.push_back(fmt("%-4s F(1/4) = %.6g vs F(4) = %.6g, %s, N = %llu: rel %.2e", s_ok ? "ok" : "FAIL",
                                  s.f_nu, s.f_inverse, to_string(c), static_cast<unsigned long long>(n),
                                  s.relative_difference));
            ok &= s_ok;
        }
        return ok;
    });

    run.criterion(8, "jacobian seam between series and closed form", [&](std::vector<std::string>& details) {
        bool ok = true;
        for (Case c : cases) {
            double worst = 0.0;
            for (double offset : {-0.1, -0.05, 0.05, 0.1})
                worst = std::max(worst, rel_diff(jac_series(1.0 + offset, JacobianCase{c}), jac_closed_form(1.0 + offset, c)));
            const bool c_ok = worst <= 1e-10;
            details.push_back(fmt("%-4s %s: worst rel %.2e at |nu - 1| in {0.05, 0.1}", c_ok ? "ok" : "FAIL",
                                  to_string(c), worst));
            ok &= c_ok;
        }
        return ok;
    });

    run.criterion(9, "beta machinery and fit recovery", [&](std::vector<std::string>& details) {
        bool ok = true;
        bool exact = true;
        for (double nu : {0.0, 1e-9, 0.125, 0.3, 0.5, 0.7, 0.99, 1.0}) exact &= beta_inc(nu, 1.0, 1.0) == nu;
        details.push_back(fmt("%-4s B_nu(1,1) == nu exactly", exact ? "ok" : "FAIL"));
        ok &= exact;
        ok &= check(details, "B_0.5(1/2,1/2)", beta_inc(0.5, 0.5, 0.5), std::numbers::pi / 2.0, 1e-12);

        double worst = 0.0;
        for (double a : {0.3, 0.5, 0.98, 1.7, 4.0})
            for (double b : {0.4, 1.0, 1.732, 2.12, 6.0})
                for (double x : {0.01, 0.2, 0.5, 0.8, 0.97})
                    worst = std::max(worst, rel_diff(beta_inc(x, a, b) + beta_inc(1.0 - x, b, a), beta_complete(a, b)));
        const bool sym_ok = worst <= 1e-13;
        details.push_back(fmt("%-4s B_x(a,b) + B_(1-x)(b,a) = B(a,b): worst rel %.2e", sym_ok ? "ok" : "FAIL", worst));
        ok &= sym_ok;

        for (Case c : cases) {
            const GModel truth = reference_model(c);
            std::vector<double> nu, f;
            for (double mu : mu_grid(201)) {
                nu.push_back(mu * mu);
                f.push_back(truth(mu * mu));
            }
            const FitReport fit = fit_beta(nu, f, default_initial_model(f));
            const double err = std::max({rel_diff(fit.model.scale, truth.scale), rel_diff(fit.model.a, truth.a),
                                         rel_diff(fit.model.b, truth.b)});
            const bool fit_ok = fit.converged && err <= 1e-6;
            details.push_back(fmt("%-4s zero-noise fit, %s model: worst parameter rel error %.2e", fit_ok ? "ok" : "FAIL",
                                  to_string(c), err));
            ok &= fit_ok;
        }
        return ok;
    });

    run.criterion(10, "determinism across worker counts", [&](std::vector<std::string>& details) {
        bool ok = true;
        for (Case c : cases) {
            EstimationConfig cfg = desk_config(o, c, o.determinism_points);
            cfg.workers = 1;
            const FGrid one = estimate_f(cfg);
            cfg.workers = o.determinism_workers;
            const FGrid many = estimate_f(cfg);
            const bool same = one.n_psd == many.n_psd && one.n_sep == many.n_sep;
            details.push_back(fmt("%-4s %s, N = %llu: counters with 1 and %d workers %s", same ? "ok" : "FAIL",
                                  to_string(c), static_cast<unsigned long long>(cfg.points), o.determinism_workers,
                                  same ? "identical" : "differ"));
            ok &= same;
        }
        return ok;
    });

    return run.take();
}

}  // namespace hsvol
