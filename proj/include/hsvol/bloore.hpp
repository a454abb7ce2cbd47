#pragma once

// Bloore parameterization of two-qubit (4x4) density matrices.
//
// Off-diagonal entries are written rho_ij = sqrt(rho_ii rho_jj) z_ij, which
// factors every principal minor into (product of diagonals) x (polynomial in
// z). Positivity therefore depends on z alone, and the determinant of the
// partial transpose depends on z and the single ratio
// nu = rho_11 rho_44 / (rho_22 rho_33).

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string_view>

#include <Eigen/Core>

namespace hsvol {

enum class Case { real, complex };

const char* to_string(Case c);
Case parse_case(std::string_view s);

// Number of free off-diagonal coordinates: 6 (real) or 12 (complex).
constexpr int dimension(Case c) { return c == Case::real ? 6 : 12; }

using cplx = std::complex<double>;
using DensityMatrix4 = Eigen::Matrix4cd;

// Upper-triangle order used everywhere: z12, z13, z14, z23, z24, z34.
enum Pair : int { z12 = 0, z13, z14, z23, z24, z34 };
inline constexpr std::array<std::array<int, 2>, 6> kPairIndex{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

struct BlooreRealVector {
    std::array<double, 6> z{};
    double operator[](int k) const { return z[k]; }
    double& operator[](int k) { return z[k]; }
};

struct BlooreComplexVector {
    std::array<cplx, 6> z{};
    cplx operator[](int k) const { return z[k]; }
    cplx& operator[](int k) { return z[k]; }
};

struct DiagonalVector {
    std::array<double, 4> d{};

    // Throws std::invalid_argument on negative entries or trace != 1 (1e-12).
    void validate() const;
    double product() const { return d[0] * d[1] * d[2] * d[3]; }
};

class NuRatio {
public:
    explicit NuRatio(double nu);
    static NuRatio from_mu(double mu);

    double nu() const { return nu_; }
    double mu() const { return mu_; }

private:
    NuRatio(double nu, double mu) : nu_(nu), mu_(mu) {}
    double nu_;
    double mu_;
};

class OutOfRegion : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

DensityMatrix4 assemble_density(const BlooreRealVector& z, const DiagonalVector& d);
DensityMatrix4 assemble_density(const BlooreComplexVector& z, const DiagonalVector& d);

// Unit-diagonal Hermitian matrix W with W_ij = z_ij, so rho = D^(1/2) W D^(1/2).
Eigen::Matrix4d bloore_matrix(const BlooreRealVector& z);
Eigen::Matrix4cd bloore_matrix(const BlooreComplexVector& z);

// det(rho) / prod(d) for the real case, as a polynomial in z.
double a2_real(const BlooreRealVector& z);
// Same quantity for the complex case (determinant of the unit-diagonal matrix).
double a2_complex(const BlooreComplexVector& z);

// Coefficients of the characteristic polynomial of W: e_k is the sum of all
// principal minors of order k. W is PSD iff e_1..e_4 are all nonnegative.
std::array<double, 4> principal_minor_sums(const BlooreRealVector& z);
std::array<double, 4> principal_minor_sums(const BlooreComplexVector& z);

bool is_psd(const BlooreRealVector& z);
bool is_psd(const BlooreComplexVector& z);

struct Interval {
    double lo;
    double hi;
    bool contains(double x) const { return lo <= x && x <= hi; }
};

struct CadBounds {
    Interval z23;
    Interval z24;
    Interval z34;
};

// Nested CAD description of the real PSD region. Throws OutOfRegion if
// z12, z13, z14 leave [-1, 1], |z12| == 1, or z23 / z24 fall outside the
// intervals implied by the earlier coordinates.
CadBounds cad_bounds(double z12_, double z13_, double z14_, double z23_, double z24_);

// Full membership test through the CAD intervals; false for out-of-region input.
bool cad_contains(const BlooreRealVector& z);

// d1 = d4 = c mu, d2 = d3 = c with c = 1 / (2 (1 + mu)).
DiagonalVector canonical_diagonals(const NuRatio& nu);

// Transpose over the second qubit: rho_{(a b),(c d)} -> rho_{(a d),(c b)}.
DensityMatrix4 partial_transpose(const DensityMatrix4& rho);

// Relabels |0> <-> |1> on the second qubit (basis order 2,1,4,3). This swaps
// rho_11 <-> rho_22 and rho_33 <-> rho_44, so nu -> 1/nu, and leaves both
// positivity and PPT unchanged.
BlooreRealVector flip_second_qubit(const BlooreRealVector& z);
BlooreComplexVector flip_second_qubit(const BlooreComplexVector& z);

// c0..c4 in powers of mu = sqrt(nu). The polynomial equals
// nu * det(rho_PT) / prod(d) for any diagonal with ratio nu.
std::array<double, 5> a3_quartic_coeffs(const BlooreRealVector& z);

inline double eval_quartic(const std::array<double, 5>& c, double mu)
{
    return (((c[4] * mu + c[3]) * mu + c[2]) * mu + c[1]) * mu + c[0];
}

// nu * det(rho_PT) / prod(d), computed from the scaled Bloore PT matrix
// diag(mu,1,1,1) W_PT(mu) diag(mu,1,1,1), which stays polynomial at mu = 0.
double scaled_pt_determinant(const BlooreComplexVector& z, double mu);

// Sign classification with no tolerance band: nonnegative iff the sign bit is clear.
inline bool nonnegative(double v) { return !std::signbit(v); }

bool is_ppt(const BlooreRealVector& z, const NuRatio& nu);
bool is_ppt(const BlooreComplexVector& z, const NuRatio& nu);

}  // namespace hsvol
