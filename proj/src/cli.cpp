#include "hsvol/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "hsvol/acceptance.hpp"
#include "hsvol/estimator.hpp"
#include "hsvol/jacobian.hpp"
#include "hsvol/volume.hpp"
#include "json.hpp"

namespace hsvol::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Options {
    std::string case_name = "real";
    std::optional<std::uint64_t> points;
    std::size_t grid = 201;
    std::uint64_t seed = 1;
    std::uint64_t skip = 0;
    int workers = 1;
    std::string out;
    std::string summary;
    std::string checkpoint;
    std::uint64_t checkpoint_interval = 10'000'000;
    std::string dump_points;
    std::string model = "reference";
    std::string in;
    std::string residuals;
    double nu_max = 1.0;
    bool series = false;
    bool quiet = false;
};

const CLI::Validator kPositivePoints(
    [](std::string& v) -> std::string {
        return v.find_first_not_of("0") == std::string::npos ? "empty campaign: the number of points must be positive"
                                                             : "";
    },
    "POSITIVE");

std::uint64_t desk_points(Case c) { return c == Case::real ? 1'000'000 : 2'000'000; }

// The resolved configuration as a config-file section that `--config` accepts.
std::string to_ini(const std::string& subcommand, const Json& cfg)
{
    std::ostringstream os;
    os << '[' << subcommand << "]\n";
    for (const auto& [key, value] : cfg.items()) os << key << " = " << value.dump() << '\n';
    return os.str();
}

Json with_subcommand(const std::string& subcommand, const Json& cfg)
{
    Json j;
    j["subcommand"] = subcommand;
    for (const auto& [key, value] : cfg.items()) j[key] = value;
    return j;
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path + " for writing");
    os << text;
    if (!os) throw IoError("write failed for " + path);
}

// Writes to `path`, or to `out` when the path is empty or "-".
void emit(const std::string& path, const std::string& text, std::ostream& out)
{
    if (path.empty() || path == "-")
        out << text;
    else
        write_text(path, text);
}

std::string read_text(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

std::string fmt_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------- jacobian

int cmd_jacobian(const Options& o, std::ostream& out)
{
    if (o.grid < 2) throw std::invalid_argument("--grid must be at least 2");
    if (!(o.nu_max > 0.0) || !std::isfinite(o.nu_max)) throw std::invalid_argument("--nu-max must be positive");
    init_jacobian_tables();
    const Json cfg{{"grid", o.grid}, {"nu-max", o.nu_max}, {"out", o.out}};

    std::ostringstream os;
    os << "nu,jac_real,jac_complex\n";
    for (std::size_t k = 0; k < o.grid; ++k) {
        const double nu = o.nu_max * static_cast<double>(k) / static_cast<double>(o.grid - 1);
        os << fmt_double(nu) << ',' << fmt_double(jac(nu, Case::real)) << ',' << fmt_double(jac(nu, Case::complex))
           << '\n';
    }
    std::istringstream ini(to_ini("jacobian", cfg));
    for (std::string line; std::getline(ini, line);) os << "#config," << line << '\n';
    emit(o.out, os.str(), out);
    return kOk;
}

// ---------------------------------------------------------------- estimate

struct EstimateSetup {
    EstimationConfig config;
    Json resolved;
};

EstimateSetup estimate_setup(const Options& o, const std::string& subcommand, std::ostream& err, Json extra = {})
{
    EstimateSetup s;
    EstimationConfig& c = s.config;
    c.kind = parse_case(o.case_name);
    c.points = o.points.value_or(desk_points(c.kind));
    c.grid_points = o.grid;
    c.seed = o.seed;
    c.skip = o.skip;
    c.workers = o.workers;
    c.checkpoint_path = o.checkpoint;
    c.checkpoint_interval = o.checkpoint_interval;
    c.validate();

    s.resolved = Json{{"case", o.case_name},       {"points", c.points},   {"grid", c.grid_points},
                      {"seed", c.seed},            {"skip", c.skip},       {"workers", c.workers},
                      {"checkpoint", o.checkpoint}, {"checkpoint-interval", c.checkpoint_interval}};
    for (const auto& [key, value] : extra.items()) s.resolved[key] = value;
    c.config_text = to_ini(subcommand, s.resolved);
    if (!o.quiet) {
        c.progress = [&err, subcommand](std::uint64_t done, std::uint64_t total) {
            err << subcommand << ": " << done << " / " << total << " points\n" << std::flush;
        };
    }
    return s;
}

std::string default_summary_path(const std::string& csv)
{
    return std::filesystem::path(csv).replace_extension(".json").string();
}

int cmd_estimate(const Options& o, std::ostream& out, std::ostream& err)
{
    const std::string csv = o.out.empty() ? "F_" + o.case_name + ".csv" : o.out;
    const std::string summary = o.summary.empty() ? default_summary_path(csv) : o.summary;
    const auto setup = estimate_setup(o, "estimate", err,
                                      Json{{"out", csv}, {"summary", summary}, {"dump-points", o.dump_points}});

    if (!o.dump_points.empty()) dump_points(setup.config.sequence(), o.dump_points);
    const FGrid g = estimate_f(setup.config);
    write_fgrid_csv(g, csv);
    const std::string json = fgrid_summary_json(g, with_subcommand("estimate", setup.resolved).dump()) + "\n";
    write_text(summary, json);
    out << json;
    return kOk;
}

// ---------------------------------------------------------------- fit

std::string residual_csv(const FitReport& r, const std::string& ini)
{
    std::ostringstream os;
    os << "nu,residual\n";
    for (std::size_t k = 0; k < r.nu.size(); ++k) os << fmt_double(r.nu[k]) << ',' << fmt_double(r.residuals[k]) << '\n';
    std::istringstream lines(ini);
    for (std::string line; std::getline(lines, line);) os << "#config," << line << '\n';
    return os.str();
}

int cmd_fit(const Options& o, std::ostream& out, std::ostream& err)
{
    if (o.in.empty()) throw std::invalid_argument("fit needs an FGrid CSV (--in)");
    const FGrid g = read_fgrid_csv(o.in);
    const Json cfg{{"in", o.in}, {"out", o.out}, {"residuals", o.residuals}};
    const FitReport r = fit_beta(g, default_initial_model(g.f()));
    if (!r.converged) err << "fit: warning: least squares did not converge; reporting the best model found\n";

    Json report = Json::parse(fit_report_json(r, with_subcommand("fit", cfg).dump()));
    report["case"] = to_string(g.kind);
    report["input_run_id"] = g.run_id;
    emit(o.out, report.dump(2) + "\n", out);
    if (!o.residuals.empty()) write_text(o.residuals, residual_csv(r, to_ini("fit", cfg)));
    return r.converged ? kOk : kNumerical;
}

// ---------------------------------------------------------------- integrate

// "reference" or "fitted:PATH" (a FitReport JSON written by `fit`).
GModel resolve_model(const std::string& spec, Case c)
{
    if (spec == "reference") return reference_model(c);
    const std::string prefix = "fitted:";
    if (spec.rfind(prefix, 0) != 0) throw std::invalid_argument("--model must be 'reference' or 'fitted:PATH'");
    const std::string path = spec.substr(prefix.size());
    const std::string text = read_text(path);
    try {
        const Json j = Json::parse(text);
        if (j.contains("case") && j.at("case").get<std::string>() != to_string(c))
            throw std::invalid_argument("fit report " + path + " is for the " + j.at("case").get<std::string>() +
                                        " case");
        GModel m{j.at("model").at("scale").get<double>(), j.at("model").at("a").get<double>(),
                 j.at("model").at("b").get<double>()};
        if (!m.valid()) throw MalformedInput("fit report " + path + ": model parameters must be positive");
        return m;
    } catch (const Json::exception& e) {
        throw MalformedInput("fit report " + path + ": " + e.what());
    }
}

struct Integration {
    GModel model;
    QuadratureResult quadrature;
    VolumeReport report;
    std::optional<SeriesIntegration> series;
};

Integration integrate_model(Case c, const GModel& model, bool series)
{
    Integration r{model, integrate_sep(c, model), {}, {}};
    r.report = report(c, r.quadrature.value, &r.quadrature);
    if (series) r.series = integrate_sep_series(c, model);
    return r;
}

Json integration_json(const Integration& r, const Json& cfg)
{
    Json j = Json::parse(volume_report_json(r.report, cfg.dump()));
    j["model"] = {{"scale", r.model.scale}, {"a", r.model.a}, {"b", r.model.b}};
    if (r.series) {
        j["series_cross_check"] = {{"V_sep", r.series->value},
                                   {"terms", r.series->terms},
                                   {"relative_difference", std::abs(r.series->value / r.report.v_sep - 1.0)}};
    }
    return j;
}

std::string integration_table(const Integration& r)
{
    std::string t = volume_report_table(r.report);
    if (r.series) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%-22s %.10g (%d terms)\n", "V_sep (series)", r.series->value, r.series->terms);
        t += buf;
    }
    return t;
}

int cmd_integrate(const Options& o, std::ostream& out)
{
    const Case c = parse_case(o.case_name);
    const GModel model = resolve_model(o.model, c);
    const Json cfg{{"case", o.case_name}, {"model", o.model}, {"series", o.series}, {"out", o.out}};
    const Integration r = integrate_model(c, model, o.series);
    if (!o.out.empty()) write_text(o.out, integration_json(r, with_subcommand("integrate", cfg)).dump(2) + "\n");
    out << integration_table(r);
    return kOk;
}

// ---------------------------------------------------------------- pipeline

int cmd_pipeline(const Options& o, std::ostream& out, std::ostream& err)
{
    const std::string dir = o.out.empty() ? "run_" + o.case_name : o.out;
    const auto setup = estimate_setup(o, "pipeline", err, Json{{"out", dir}, {"series", o.series}});
    const Json resolved = with_subcommand("pipeline", setup.resolved);
    std::filesystem::create_directories(dir);
    auto path = [&dir](const char* name) { return (std::filesystem::path(dir) / name).string(); };

    const FGrid g = estimate_f(setup.config);
    write_fgrid_csv(g, path("F.csv"));
    write_text(path("F.json"), fgrid_summary_json(g, resolved.dump()) + "\n");

    if (!o.quiet) err << "pipeline: fitting\n";
    const FitReport fit = fit_beta(g, default_initial_model(g.f()));
    Json fit_json = Json::parse(fit_report_json(fit, resolved.dump()));
    fit_json["case"] = to_string(g.kind);
    fit_json["input_run_id"] = g.run_id;
    write_text(path("fit.json"), fit_json.dump(2) + "\n");
    write_text(path("residuals.csv"), residual_csv(fit, setup.config.config_text));
    if (!fit.converged) {
        err << "pipeline: least squares did not converge\n";
        return kNumerical;
    }

    if (!o.quiet) err << "pipeline: integrating\n";
    const Integration fitted = integrate_model(g.kind, fit.model, o.series);
    const Integration reference = integrate_model(g.kind, reference_model(g.kind), false);
    Json volume = integration_json(fitted, resolved);
    volume["reference_model_V_sep"] = reference.report.v_sep;
    volume["relative_difference_to_reference_model"] = fitted.report.v_sep / reference.report.v_sep - 1.0;
    volume["estimated_V_total"] = total_volume(g);
    write_text(path("volume.json"), volume.dump(2) + "\n");

    std::string table = integration_table(fitted);
    char buf[512];
    std::snprintf(buf, sizeof buf, "%-22s %.10g\n%-22s %.10g\n%-22s %.10g\n%-22s %.6g\n%-22s %.6g\n%-22s %.6g\n",
                  "fitted a", fit.model.a, "fitted b", fit.model.b, "fitted scale", fit.model.scale,
                  "V_sep (reference model)", reference.report.v_sep, "rel. to reference model",
                  fitted.report.v_sep / reference.report.v_sep - 1.0, "V_total (estimated)", total_volume(g));
    table += buf;
    write_text(path("volume.txt"), table);
    out << table;
    return kOk;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err, bool case_given)
{
    AcceptanceOptions a;
    a.seed = o.seed;
    a.workers = o.workers;
    if (case_given) a.only = parse_case(o.case_name);
    if (o.points) {
        if (!case_given) throw std::invalid_argument("--points needs --case for verify");
        if (*o.points == 0) throw std::invalid_argument("empty campaign: --points must be positive");
        (*a.only == Case::real ? a.real_points : a.complex_points) = *o.points;
    }
    if (!o.quiet) a.progress = [&err](const std::string& m) { err << "verify: " << m << '\n' << std::flush; };
    const auto results = run_acceptance(a, &out);
    int failed = 0;
    for (const auto& r : results) failed += !r.pass;
    out << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
    return failed == 0 ? kOk : kVerifyFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Hilbert-Schmidt separable volumes of two-qubit states"};
    app.name("hsvol");
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "Read option defaults from a config file ([subcommand] sections)");

    Options o;
    auto add_case = [&o](CLI::App* s) {
        return s->add_option("--case", o.case_name, "real or complex")
            ->check(CLI::IsMember({"real", "complex"}))
            ->capture_default_str();
    };
    auto add_estimation = [&o, &add_case](CLI::App* s) {
        add_case(s);
        s->add_option("--points", o.points, "QMC points (default 1000000 real, 2000000 complex)")
            ->check(kPositivePoints);
        s->add_option("--grid", o.grid, "mu-grid points")->check(CLI::Range(2, 1'000'000))->capture_default_str();
        s->add_option("--seed", o.seed, "scrambling seed (0: unscrambled)")->capture_default_str();
        s->add_option("--skip", o.skip, "leading points to skip")->capture_default_str();
        s->add_option("--workers", o.workers, "OpenMP threads")->check(CLI::Range(1, 4096))->capture_default_str();
        s->add_option("--checkpoint", o.checkpoint, "checkpoint file (resumed when it matches the run)");
        s->add_option("--checkpoint-interval", o.checkpoint_interval, "points between checkpoints")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        s->add_flag("--quiet", o.quiet, "no progress messages");
    };

    auto* jacobian = app.add_subcommand("jacobian", "tabulate jac(nu) for both cases as CSV");
    jacobian->add_option("--grid", o.grid, "number of nu values")->capture_default_str();
    jacobian->add_option("--nu-max", o.nu_max, "largest nu")->capture_default_str();
    jacobian->add_option("--out", o.out, "output CSV (default: standard output)");

    auto* estimate = app.add_subcommand("estimate", "estimate F on the mu-grid and write an FGrid CSV");
    add_estimation(estimate);
    estimate->add_option("--out", o.out, "FGrid CSV (default F_<case>.csv)");
    estimate->add_option("--summary", o.summary, "JSON summary (default: CSV path with .json)");
    estimate->add_option("--dump-points", o.dump_points, "also write the raw point stream (little-endian doubles)");

    auto* fit = app.add_subcommand("fit", "fit the scaled incomplete-beta model to an FGrid CSV");
    fit->add_option("--in,in", o.in, "FGrid CSV")->required();
    fit->add_option("--out", o.out, "FitReport JSON (default: standard output)");
    fit->add_option("--residuals", o.residuals, "residual CSV (nu, residual)");

    auto* integrate = app.add_subcommand("integrate", "separable volume, probability and hyperarea for a model");
    add_case(integrate);
    integrate->add_option("--model", o.model, "reference or fitted:PATH")->capture_default_str();
    integrate->add_option("--out", o.out, "VolumeReport JSON");
    integrate->add_flag("--series", o.series, "also run the power-series cross-check");

    auto* pipeline = app.add_subcommand("pipeline", "estimate, fit and integrate in one run");
    add_estimation(pipeline);
    pipeline->add_option("--out", o.out, "output directory (default run_<case>)");
    pipeline->add_flag("--series", o.series, "also run the power-series cross-check");

    auto* verify = app.add_subcommand("verify", "run the desk-scale acceptance suite");
    auto* verify_case = add_case(verify);
    verify->add_option("--points", o.points, "QMC points for the volume checks of --case")->check(kPositivePoints);
    verify->add_option("--seed", o.seed, "scrambling seed")->capture_default_str();
    verify->add_option("--workers", o.workers, "OpenMP threads")->check(CLI::Range(1, 4096))->capture_default_str();
    verify->add_flag("--quiet", o.quiet, "no progress messages");

    try {
        app.parse(argc, argv);
    } catch (const CLI::FileError& e) {
        err << "hsvol: " << e.what() << '\n';
        return kUnreadable;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*jacobian) return cmd_jacobian(o, out);
        if (*estimate) return cmd_estimate(o, out, err);
        if (*fit) return cmd_fit(o, out, err);
        if (*integrate) return cmd_integrate(o, out);
        if (*pipeline) return cmd_pipeline(o, out, err);
        if (*verify) return cmd_verify(o, out, err, verify_case->count() > 0);
    } catch (const IoError& e) {
        err << "hsvol: " << e.what() << '\n';
        return kUnreadable;
    } catch (const MalformedInput& e) {
        err << "hsvol: " << e.what() << '\n';
        return kMalformed;
    } catch (const std::invalid_argument& e) {
        err << "hsvol: " << e.what() << '\n';
        return kUsage;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "hsvol: " << e.what() << '\n';
        return kUnreadable;
    } catch (const std::exception& e) {
        err << "hsvol: numerical failure: " << e.what() << '\n';
        return kNumerical;
    }
    return kUsage;
}

}  // namespace hsvol::cli
