#pragma once

// Quasi-Monte Carlo estimation of F(nu) on a uniform mu-grid.
//
// Every point of one shared Faure stream is mapped to the Bloore cube; PSD is
// tested once per point (it does not depend on the diagonal), and PPT is
// tested independently at every grid value of mu. Counters are 64-bit
// integers, so the parallel merge is exact and independent of scheduling.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hsvol/fgrid.hpp"
#include "hsvol/qmc.hpp"

namespace hsvol {

struct EstimationConfig {
    Case kind = Case::real;
    std::size_t grid_points = 201;
    std::uint64_t points = 1'000'000;
    std::uint64_t seed = 1;
    std::uint64_t skip = 0;
    int workers = 1;
    std::string checkpoint_path;  // empty: no checkpoints
    std::uint64_t checkpoint_interval = 10'000'000;
    std::string config_text;  // embedded into the FGrid as its resolved configuration
    std::function<void(std::uint64_t done, std::uint64_t total)> progress;

    // Throws std::invalid_argument for an empty campaign or a grid with < 2 points.
    void validate() const;
    SequenceSpec sequence() const;
    // Hash of everything that determines the counters.
    std::string run_id() const;
};

struct Counters {
    std::uint64_t n_psd = 0;
    std::vector<std::uint64_t> n_sep;

    explicit Counters(std::size_t grid = 0) : n_sep(grid, 0) {}
    Counters& operator+=(const Counters& o);
    bool operator==(const Counters& o) const = default;
};

// Parallel kernel: counts stream indices [first, first + count) (skip applied
// by the sequence) into c. Uses precomputed quartic coefficients in the real case.
void count_range(const FaureSequence& seq, Case kind, const std::vector<double>& mu, std::uint64_t first,
                 std::uint64_t count, Counters& c);

// Reference kernel: one point at a time through is_psd / is_ppt.
void count_range_reference(const FaureSequence& seq, Case kind, const std::vector<double>& mu, std::uint64_t first,
                           std::uint64_t count, Counters& c);

// OpenMP estimator with optional checkpoint/resume.
FGrid estimate_f(const EstimationConfig& config);

// Single-threaded reference estimator; same counters as estimate_f.
FGrid estimate_f_serial(const EstimationConfig& config);

// 2 F_tot int_0^1 Jac(nu) dnu. Throws std::invalid_argument for an empty grid.
double total_volume(const FGrid& grid);

// Exact Hilbert-Schmidt volumes: pi^4 / 60480 (real), pi^6 / 851350500 (complex).
double exact_total_volume(Case c);

struct SymmetryResult {
    double nu = 0.0;
    double f_nu = 0.0;
    double f_inverse = 0.0;
    double relative_difference = 0.0;
};

// F at nu and at 1/nu from the configured point set (1/nu lies off the
// standard grid, so PPT is tested at mu = sqrt(nu) and 1/sqrt(nu) directly).
SymmetryResult symmetry_check(const EstimationConfig& config, double nu);

struct Checkpoint {
    std::string run_id;
    std::uint64_t next_index = 0;
    Counters counters;
};
void write_checkpoint(const Checkpoint& cp, const std::string& path);
// Returns false if the file does not exist.
bool read_checkpoint(const std::string& path, Checkpoint& cp);

}  // namespace hsvol
