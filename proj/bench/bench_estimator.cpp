// Times the OpenMP estimator against the serial reference on the same
// campaign and checks that both produce identical counters.

#include <chrono>
#include <cstdio>
#include <string>

#include <omp.h>

#include "CLI11.hpp"
#include "hsvol/estimator.hpp"

namespace {

template <typename F>
double seconds(F&& f)
{
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Compare the parallel and serial F(mu) estimators"};
    std::string kind = "real";
    std::uint64_t points = 200'000;
    int workers = omp_get_max_threads();
    int repeat = 3;
    app.add_option("--case", kind, "real or complex")->check(CLI::IsMember({"real", "complex"}));
    app.add_option("--points", points, "points per run")->check(CLI::PositiveNumber);
    app.add_option("--workers", workers, "parallel workers")->check(CLI::PositiveNumber);
    app.add_option("--repeat", repeat, "runs per estimator; the fastest is reported")->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    hsvol::EstimationConfig cfg;
    cfg.kind = hsvol::parse_case(kind);
    cfg.points = points;
    cfg.workers = workers;

    hsvol::FGrid serial, parallel;
    double t_serial = 1e300, t_parallel = 1e300;
    for (int r = 0; r < repeat; ++r) {
        t_serial = std::min(t_serial, seconds([&] { serial = hsvol::estimate_f_serial(cfg); }));
        t_parallel = std::min(t_parallel, seconds([&] { parallel = hsvol::estimate_f(cfg); }));
    }
    const bool same = serial.n_psd == parallel.n_psd && serial.n_sep == parallel.n_sep;

    const double n = static_cast<double>(points);
    std::printf("case=%s points=%llu workers=%d repeat=%d\n", kind.c_str(), static_cast<unsigned long long>(points),
                workers, repeat);
    std::printf("%-10s %10s %14s\n", "estimator", "seconds", "points/s");
    std::printf("%-10s %10.3f %14.0f\n", "serial", t_serial, n / t_serial);
    std::printf("%-10s %10.3f %14.0f\n", "parallel", t_parallel, n / t_parallel);
    std::printf("speedup %.2fx, counters %s\n", t_serial / t_parallel, same ? "identical" : "DIFFER");
    return same ? 0 : 1;
}
