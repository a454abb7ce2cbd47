#pragma once

// Desk-scale acceptance suite: one pass/fail verdict per criterion.
// Shared by the acceptance test binary and `hsvol verify`.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hsvol/bloore.hpp"

namespace hsvol {

struct AcceptanceOptions {
    std::optional<Case> only;  // restrict case-specific checks to one case
    std::uint64_t real_points = 1'000'000;
    std::uint64_t complex_points = 2'000'000;
    std::uint64_t seed = 1;
    int workers = 1;
    std::uint64_t oracle_samples = 100'000;
    // The complex PSD region fills under 1% of its sampling domain, so F(1/4)
    // and F(4) need more points there to agree to 2%.
    std::uint64_t symmetry_points_real = 100'000;
    std::uint64_t symmetry_points_complex = 8'000'000;
    std::uint64_t determinism_points = 200'000;
    int determinism_workers = 8;
    std::function<void(const std::string&)> progress;  // stage messages
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::vector<std::string> details;
    double seconds = 0.0;
};

// One line: "PASS [n] title (t s)" followed by indented detail lines.
std::string format_result(const CriterionResult& r);

// Runs criteria 1..10. Each result is printed to `live` (if given) as soon as
// it is known.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream* live = nullptr);

// True if value agrees with the printed decimal `quoted` to rel_tol, or to
// half a unit in its last printed digit, whichever is looser.
bool matches_quoted(double value, const std::string& quoted, double rel_tol);

}  // namespace hsvol
