#pragma once

// Generalized Faure low-discrepancy sequence.
//
// Coordinate j of point n is the radical inverse (base b) of the digit vector
// C_j a(n) mod b, where a(n) are the base-b digits of n and
// C_j = A_j P^j: P is the upper-triangular Pascal matrix and A_j a random
// nonsingular lower-triangular matrix (identity when unscrambled). Points are
// computed directly from their index, so any index range can be produced
// independently of the others.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hsvol/bloore.hpp"
#include "hsvol/errors.hpp"

namespace hsvol {

struct SequenceSpec {
    int dimension = 6;
    std::uint32_t base = 7;
    std::uint64_t scramble_seed = 0;  // 0 = plain Faure
    std::uint64_t skip = 0;
    std::uint64_t count = 0;

    // Throws std::invalid_argument when base is not prime or base < dimension.
    void validate() const;
    std::string describe() const;
};

bool is_prime(std::uint64_t n);
std::uint32_t smallest_prime_at_least(std::uint32_t n);

// Default spec for an estimation case: smallest prime base >= dimension.
SequenceSpec default_sequence(Case c, std::uint64_t count, std::uint64_t seed, std::uint64_t skip);

inline constexpr std::uint64_t kBlockSize = std::uint64_t{1} << 16;

class FaureSequence {
public:
    explicit FaureSequence(const SequenceSpec& spec);

    const SequenceSpec& spec() const { return spec_; }
    int dimension() const { return spec_.dimension; }
    int digits() const { return out_digits_; }

    // Point with absolute sequence index n (skip is not applied here).
    void point(std::uint64_t n, std::span<double> out) const;

    // Absolute index of the i-th emitted point. The stream starts at index 1:
    // index 0 is the origin of the cube, which every scrambling leaves fixed.
    std::uint64_t stream_index(std::uint64_t i) const { return 1 + spec_.skip + i; }

    // Emitted points first .. first+count-1 (see stream_index), row-major.
    void fill(std::uint64_t first, std::uint64_t count, std::span<double> out) const;

private:
    SequenceSpec spec_;
    int out_digits_ = 0;  // digits of each coordinate
    int in_digits_ = 0;   // maximum digits of the index
    double scale_ = 0.0;  // base^-out_digits
    // generator_[j] is out_digits_ x in_digits_, row-major, entries in [0, base).
    std::vector<std::vector<std::uint32_t>> generator_;
};

// Emit the stream described by spec as little-endian doubles, row-major.
void dump_points(const SequenceSpec& spec, const std::string& path);

struct MappedPoint {
    std::variant<BlooreRealVector, BlooreComplexVector> z;
    double volume_factor;  // 2^6 or pi^6
};

// Volume of the sampling domain: the cube [-1,1]^6 (real) or the polydisc
// |z_ij| <= 1 (complex). Both contain every PSD Bloore vector.
inline double domain_volume(Case c) { return c == Case::real ? 64.0 : std::pow(std::numbers::pi, 6); }

// Real: u -> 2u - 1 per coordinate. Complex: each coordinate pair (u, v) maps
// to sqrt(u) exp(2 pi i v), uniform on the unit disc.
// Throws std::invalid_argument on a dimension mismatch.
MappedPoint map_to_bloore(std::span<const double> point, Case c);

inline BlooreRealVector to_real_bloore(const double* u)
{
    BlooreRealVector z;
    for (int k = 0; k < 6; ++k) z.z[k] = 2.0 * u[k] - 1.0;
    return z;
}

inline BlooreComplexVector to_complex_bloore(const double* u)
{
    BlooreComplexVector z;
    for (int k = 0; k < 6; ++k) z.z[k] = std::polar(std::sqrt(u[2 * k]), 2.0 * std::numbers::pi * u[2 * k + 1]);
    return z;
}

}  // namespace hsvol
