#include "hsvol/estimator.hpp"

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "hsvol/jacobian.hpp"
#include "json.hpp"

namespace hsvol {

void EstimationConfig::validate() const
{
    if (points == 0) throw std::invalid_argument("empty campaign: number of points must be positive");
    if (grid_points < 2) throw std::invalid_argument("grid must have at least two points");
    if (workers < 1) throw std::invalid_argument("worker count must be positive");
    if (checkpoint_interval == 0) throw std::invalid_argument("checkpoint interval must be positive");
    sequence().validate();
}

SequenceSpec EstimationConfig::sequence() const { return default_sequence(kind, points, seed, skip); }

std::string EstimationConfig::run_id() const
{
    std::ostringstream os;
    os << to_string(kind) << '|' << grid_points << '|' << sequence().describe();
    // FNV-1a, 64 bit
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : os.str()) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf, 12);
}

Counters& Counters::operator+=(const Counters& o)
{
    if (o.n_sep.size() != n_sep.size()) throw std::logic_error("counter grids differ in size");
    n_psd += o.n_psd;
    for (std::size_t k = 0; k < n_sep.size(); ++k) n_sep[k] += o.n_sep[k];
    return *this;
}

void count_range(const FaureSequence& seq, Case kind, const std::vector<double>& mu, std::uint64_t first,
                 std::uint64_t count, Counters& c)
{
    const int d = seq.dimension();
    std::vector<double> u(static_cast<std::size_t>(d));
    const std::uint64_t base_index = seq.stream_index(first);
    const std::size_t grid = mu.size();
    if (kind == Case::real) {
        for (std::uint64_t i = 0; i < count; ++i) {
            seq.point(base_index + i, u);
            const BlooreRealVector z = to_real_bloore(u.data());
            if (!is_psd(z)) continue;
            ++c.n_psd;
            const auto q = a3_quartic_coeffs(z);
            for (std::size_t k = 0; k < grid; ++k) c.n_sep[k] += nonnegative(eval_quartic(q, mu[k]));
        }
    } else {
        for (std::uint64_t i = 0; i < count; ++i) {
            seq.point(base_index + i, u);
            const BlooreComplexVector z = to_complex_bloore(u.data());
            if (!is_psd(z)) continue;
            ++c.n_psd;
            for (std::size_t k = 0; k < grid; ++k) c.n_sep[k] += nonnegative(scaled_pt_determinant(z, mu[k]));
        }
    }
}

void count_range_reference(const FaureSequence& seq, Case kind, const std::vector<double>& mu, std::uint64_t first,
                           std::uint64_t count, Counters& c)
{
    std::vector<double> u(static_cast<std::size_t>(seq.dimension()));
    for (std::uint64_t i = 0; i < count; ++i) {
        seq.point(seq.stream_index(first + i), u);
        const MappedPoint p = map_to_bloore(u, kind);
        std::visit(
            [&](const auto& z) {
                if (!is_psd(z)) return;
                ++c.n_psd;
                for (std::size_t k = 0; k < mu.size(); ++k)
                    if (is_ppt(z, NuRatio::from_mu(mu[k]))) ++c.n_sep[k];
            },
            p.z);
    }
}

namespace {

FGrid make_grid(const EstimationConfig& config, const Counters& c)
{
    FGrid g;
    g.kind = config.kind;
    g.n_points = config.points;
    g.n_psd = c.n_psd;
    g.mu = mu_grid(config.grid_points);
    g.nu.resize(g.mu.size());
    for (std::size_t k = 0; k < g.mu.size(); ++k) g.nu[k] = g.mu[k] * g.mu[k];
    g.n_sep = c.n_sep;
    g.sequence = config.sequence();
    g.run_id = config.run_id();
    g.config = config.config_text;
    g.check_invariants();
    return g;
}

}  // namespace

void write_checkpoint(const Checkpoint& cp, const std::string& path)
{
    nlohmann::ordered_json j;
    j["run_id"] = cp.run_id;
    j["next_index"] = cp.next_index;
    j["n_psd"] = cp.counters.n_psd;
    j["n_sep"] = cp.counters.n_sep;
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp);
        if (!os) throw IoError("cannot write checkpoint " + tmp);
        os << j.dump() << '\n';
    }
    std::filesystem::rename(tmp, path);
}

bool read_checkpoint(const std::string& path, Checkpoint& cp)
{
    std::ifstream is(path);
    if (!is) return false;
    nlohmann::json j;
    try {
        is >> j;
        cp.run_id = j.at("run_id").get<std::string>();
        cp.next_index = j.at("next_index").get<std::uint64_t>();
        cp.counters.n_psd = j.at("n_psd").get<std::uint64_t>();
        cp.counters.n_sep = j.at("n_sep").get<std::vector<std::uint64_t>>();
    } catch (const nlohmann::json::exception& e) {
        throw MalformedInput("malformed checkpoint " + path + ": " + e.what());
    }
    return true;
}

FGrid estimate_f(const EstimationConfig& config)
{
    config.validate();
    const FaureSequence seq(config.sequence());
    const std::vector<double> mu = mu_grid(config.grid_points);

    Counters total(mu.size());
    std::uint64_t next = 0;
    const std::string run_id = config.run_id();
    if (!config.checkpoint_path.empty()) {
        Checkpoint cp;
        if (read_checkpoint(config.checkpoint_path, cp) && cp.run_id == run_id &&
            cp.counters.n_sep.size() == mu.size() && cp.next_index <= config.points) {
            total = cp.counters;
            next = cp.next_index;
        }
    }

    // Segments of 16 blocks; checkpoints land on segment boundaries.
    constexpr std::uint64_t kSegment = 16 * kBlockSize;
    std::uint64_t last_checkpoint = next;
    while (next < config.points) {
        const std::uint64_t seg_end = std::min(config.points, next + kSegment);
        const std::uint64_t blocks = (seg_end - next + kBlockSize - 1) / kBlockSize;
        Counters segment(mu.size());

#pragma omp parallel num_threads(config.workers)
        {
            Counters local(mu.size());
#pragma omp for schedule(dynamic, 1)
            for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
                const std::uint64_t first = next + static_cast<std::uint64_t>(b) * kBlockSize;
                const std::uint64_t count = std::min(kBlockSize, seg_end - first);
                count_range(seq, config.kind, mu, first, count, local);
            }
#pragma omp critical(hsvol_merge)
            segment += local;
        }

        total += segment;
        next = seg_end;
        if (config.progress) config.progress(next, config.points);
        if (!config.checkpoint_path.empty() &&
            (next - last_checkpoint >= config.checkpoint_interval || next == config.points)) {
            write_checkpoint({run_id, next, total}, config.checkpoint_path);
            last_checkpoint = next;
        }
    }
    return make_grid(config, total);
}

FGrid estimate_f_serial(const EstimationConfig& config)
{
    config.validate();
    const FaureSequence seq(config.sequence());
    const std::vector<double> mu = mu_grid(config.grid_points);
    Counters total(mu.size());
    count_range_reference(seq, config.kind, mu, 0, config.points, total);
    return make_grid(config, total);
}

double exact_total_volume(Case c)
{
    using std::numbers::pi;
    return c == Case::real ? std::pow(pi, 4) / 60480.0 : std::pow(pi, 6) / 851350500.0;
}

double total_volume(const FGrid& grid)
{
    if (grid.n_points == 0) throw std::invalid_argument("total_volume: empty campaign");
    return 2.0 * grid.f_tot() * jac_integral(grid.kind).value;
}

SymmetryResult symmetry_check(const EstimationConfig& config, double nu)
{
    if (!(nu > 0.0) || !std::isfinite(nu)) throw std::invalid_argument("symmetry_check: nu must be positive");
    EstimationConfig probe = config;
    probe.validate();
    const FaureSequence seq(probe.sequence());
    const std::vector<double> mu{std::sqrt(nu), 1.0 / std::sqrt(nu)};

    Counters total(mu.size());
    const std::uint64_t blocks = (probe.points + kBlockSize - 1) / kBlockSize;
#pragma omp parallel num_threads(probe.workers)
    {
        Counters local(mu.size());
#pragma omp for schedule(dynamic, 1)
        for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
            const std::uint64_t first = static_cast<std::uint64_t>(b) * kBlockSize;
            count_range(seq, probe.kind, mu, first, std::min(kBlockSize, probe.points - first), local);
        }
#pragma omp critical(hsvol_merge)
        total += local;
    }

    const double factor = measure_factor(probe.kind) / static_cast<double>(probe.points);
    SymmetryResult r;
    r.nu = nu;
    r.f_nu = factor * static_cast<double>(total.n_sep[0]);
    r.f_inverse = factor * static_cast<double>(total.n_sep[1]);
    const double mean = 0.5 * (r.f_nu + r.f_inverse);
    r.relative_difference = mean > 0.0 ? std::abs(r.f_nu - r.f_inverse) / mean : 0.0;
    return r;
}

}  // namespace hsvol
