#pragma once

// Per-mu separability counters and the derived F estimates.
//
// F[k] = measure_factor * n_sep[k] / N, where measure_factor is the volume
// of the sampling domain (see domain_volume) times the Hilbert-Schmidt normalization
// 2^(d/2 + 1): sqrt 2 per off-diagonal real coordinate and sqrt 4 for the
// unit-trace hyperplane. With that normalization 2 int_0^1 Jac F dnu is the
// Hilbert-Schmidt volume.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "hsvol/bloore.hpp"
#include "hsvol/errors.hpp"
#include "hsvol/qmc.hpp"

namespace hsvol {

// 2^(d/2 + 1): 16 (real) or 128 (complex).
constexpr double hs_metric_factor(Case c) { return c == Case::real ? 16.0 : 128.0; }
inline double measure_factor(Case c) { return domain_volume(c) * hs_metric_factor(c); }

// Uniform mu-grid on [0, 1] with both endpoints.
std::vector<double> mu_grid(std::size_t points);

struct FGrid {
    Case kind = Case::real;
    std::uint64_t n_points = 0;
    std::uint64_t n_psd = 0;
    std::vector<double> mu;
    std::vector<double> nu;
    std::vector<std::uint64_t> n_sep;
    SequenceSpec sequence;
    std::string run_id;
    std::string config;  // resolved run configuration, one "key = value" per line

    int dimension() const { return hsvol::dimension(kind); }
    double f_at(std::size_t k) const;
    std::vector<double> f() const;
    double f_tot() const;
    std::size_t index_of_mu(double mu_value) const;  // nearest grid index

    // Throws std::logic_error if the counter invariants are broken.
    void check_invariants() const;
};


// CSV: header "mu,nu,n_sep,F", one row per grid point, then footer rows
// "#key,value" (N, d, n_psd, F_tot, case, sequence, run_id) and
// "#config,key = value" lines.
// Path overloads throw IoError when the file cannot be opened or written,
// and readers throw MalformedInput on bad contents.
void write_fgrid_csv(const FGrid& g, std::ostream& os);
void write_fgrid_csv(const FGrid& g, const std::string& path);
FGrid read_fgrid_csv(std::istream& is);
FGrid read_fgrid_csv(const std::string& path);

// JSON mirror of the footer. The "config" member is config_json when given,
// otherwise the "key = value" lines of g.config as strings.
std::string fgrid_summary_json(const FGrid& g, const std::string& config_json = "");

}  // namespace hsvol
