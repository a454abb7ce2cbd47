#include "hsvol/bloore.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <string>

namespace hsvol {

const char* to_string(Case c) { return c == Case::real ? "real" : "complex"; }

Case parse_case(std::string_view s)
{
    if (s == "real") return Case::real;
    if (s == "complex") return Case::complex;
    throw std::invalid_argument("unknown case '" + std::string(s) + "' (expected real|complex)");
}

void DiagonalVector::validate() const
{
    double trace = 0.0;
    for (double v : d) {
        if (!(v >= 0.0)) throw std::invalid_argument("diagonal entries must be nonnegative");
        trace += v;
    }
    if (std::abs(trace - 1.0) > 1e-12) throw std::invalid_argument("diagonal entries must sum to 1");
}

NuRatio::NuRatio(double nu) : nu_(nu), mu_(std::sqrt(nu))
{
    if (!(nu >= 0.0) || !std::isfinite(nu)) throw std::invalid_argument("nu must be a finite nonnegative number");
}

NuRatio NuRatio::from_mu(double mu)
{
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw std::invalid_argument("mu must be a finite nonnegative number");
    return NuRatio(mu * mu, mu);
}

namespace {

template <typename Vec>
DensityMatrix4 assemble(const Vec& z, const DiagonalVector& d)
{
    for (double v : d.d)
        if (!(v >= 0.0)) throw std::invalid_argument("assemble_density: negative diagonal entry");
    DensityMatrix4 rho = DensityMatrix4::Zero();
    for (int i = 0; i < 4; ++i) rho(i, i) = d.d[i];
    for (int k = 0; k < 6; ++k) {
        const auto [i, j] = kPairIndex[k];
        const cplx v = std::sqrt(d.d[i] * d.d[j]) * cplx(z[k]);
        rho(i, j) = v;
        rho(j, i) = std::conj(v);
    }
    return rho;
}

}  // namespace

DensityMatrix4 assemble_density(const BlooreRealVector& z, const DiagonalVector& d) { return assemble(z, d); }
DensityMatrix4 assemble_density(const BlooreComplexVector& z, const DiagonalVector& d) { return assemble(z, d); }

Eigen::Matrix4d bloore_matrix(const BlooreRealVector& z)
{
    Eigen::Matrix4d w = Eigen::Matrix4d::Identity();
    for (int k = 0; k < 6; ++k) {
        const auto [i, j] = kPairIndex[k];
        w(i, j) = w(j, i) = z[k];
    }
    return w;
}

Eigen::Matrix4cd bloore_matrix(const BlooreComplexVector& z)
{
    Eigen::Matrix4cd w = Eigen::Matrix4cd::Identity();
    for (int k = 0; k < 6; ++k) {
        const auto [i, j] = kPairIndex[k];
        w(i, j) = z[k];
        w(j, i) = std::conj(z[k]);
    }
    return w;
}

double a2_real(const BlooreRealVector& v)
{
    const double z12_ = v[z12], z13_ = v[z13], z14_ = v[z14];
    const double z23_ = v[z23], z24_ = v[z24], z34_ = v[z34];
    return (z34_ * z34_ - 1) * z12_ * z12_
         + 2 * (z14_ * (z24_ - z23_ * z34_) + z13_ * (z23_ - z24_ * z34_)) * z12_
         - z23_ * z23_ - z24_ * z24_ - z34_ * z34_
         + z14_ * z14_ * (z23_ * z23_ - 1) + z13_ * z13_ * (z24_ * z24_ - 1)
         + 2 * z23_ * z24_ * z34_ + 2 * z13_ * z14_ * (z34_ - z23_ * z24_) + 1;
}

namespace {

// Determinant of a Hermitian 4x4 matrix by expansion in complementary 2x2 minors.
double hermitian_det4(const Eigen::Matrix4cd& m)
{
    auto minor2 = [&](int r0, int r1, int c0, int c1) {
        return m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
    };
    const cplx det = minor2(0, 1, 0, 1) * minor2(2, 3, 2, 3) - minor2(0, 1, 0, 2) * minor2(2, 3, 1, 3)
                   + minor2(0, 1, 0, 3) * minor2(2, 3, 1, 2) + minor2(0, 1, 1, 2) * minor2(2, 3, 0, 3)
                   - minor2(0, 1, 1, 3) * minor2(2, 3, 0, 2) + minor2(0, 1, 2, 3) * minor2(2, 3, 0, 1);
    return det.real();
}

inline double norm2(cplx c) { return c.real() * c.real() + c.imag() * c.imag(); }

// Principal 3x3 minor of a unit-diagonal Hermitian matrix with off-diagonals
// a = w_ij, b = w_ik, c = w_jk (i < j < k).
inline double minor3(cplx a, cplx b, cplx c)
{
    return 1.0 - norm2(a) - norm2(b) - norm2(c) + 2.0 * (a * c * std::conj(b)).real();
}

inline double minor3(double a, double b, double c) { return 1.0 - a * a - b * b - c * c + 2.0 * a * b * c; }

}  // namespace

double a2_complex(const BlooreComplexVector& z) { return hermitian_det4(bloore_matrix(z)); }

std::array<double, 4> principal_minor_sums(const BlooreRealVector& z)
{
    double e2 = 0.0;
    for (double v : z.z) e2 += 1.0 - v * v;
    const double e3 = minor3(z[z12], z[z13], z[z23]) + minor3(z[z12], z[z14], z[z24])
                    + minor3(z[z13], z[z14], z[z34]) + minor3(z[z23], z[z24], z[z34]);
    return {4.0, e2, e3, a2_real(z)};
}

std::array<double, 4> principal_minor_sums(const BlooreComplexVector& z)
{
    double e2 = 0.0;
    for (cplx v : z.z) e2 += 1.0 - norm2(v);
    const double e3 = minor3(z[z12], z[z13], z[z23]) + minor3(z[z12], z[z14], z[z24])
                    + minor3(z[z13], z[z14], z[z34]) + minor3(z[z23], z[z24], z[z34]);
    return {4.0, e2, e3, a2_complex(z)};
}

namespace {

template <typename Vec>
bool psd_from_minors(const Vec& z)
{
    const auto e = principal_minor_sums(z);
    return nonnegative(e[1]) && nonnegative(e[2]) && nonnegative(e[3]);
}

}  // namespace

bool is_psd(const BlooreRealVector& z) { return psd_from_minors(z); }
bool is_psd(const BlooreComplexVector& z) { return psd_from_minors(z); }

CadBounds cad_bounds(double z12_, double z13_, double z14_, double z23_, double z24_)
{
    auto in_unit = [](double x) { return x >= -1.0 && x <= 1.0; };
    if (!in_unit(z12_) || !in_unit(z13_) || !in_unit(z14_))
        throw OutOfRegion("cad_bounds: z12, z13, z14 must lie in [-1, 1]");
    const double q12 = 1.0 - z12_ * z12_;
    if (q12 <= 0.0) throw OutOfRegion("cad_bounds: |z12| = 1 is a degenerate boundary");

    const double w23 = std::sqrt(q12) * std::sqrt(1.0 - z13_ * z13_);
    const double w24 = std::sqrt(q12) * std::sqrt(1.0 - z14_ * z14_);
    CadBounds b{};
    b.z23 = {z12_ * z13_ - w23, z12_ * z13_ + w23};
    b.z24 = {z12_ * z14_ - w24, z12_ * z14_ + w24};
    if (!b.z23.contains(z23_)) throw OutOfRegion("cad_bounds: z23 outside its interval");
    if (!b.z24.contains(z24_)) throw OutOfRegion("cad_bounds: z24 outside its interval");

    // Both radicands are nonpositive in-region; their product is taken under one root.
    const double r1 = -1.0 + z12_ * z12_ + z13_ * z13_ - 2.0 * z12_ * z13_ * z23_ + z23_ * z23_;
    const double r2 = -1.0 + z12_ * z12_ + z14_ * z14_ - 2.0 * z12_ * z14_ * z24_ + z24_ * z24_;
    const double s = std::sqrt(std::max(r1 * r2, 0.0));
    const double centre = z13_ * z14_ - z12_ * z14_ * z23_ - z12_ * z13_ * z24_ + z23_ * z24_;
    b.z34 = {(centre - s) / q12, (centre + s) / q12};
    return b;
}

bool cad_contains(const BlooreRealVector& z)
{
    try {
        return cad_bounds(z[z12], z[z13], z[z14], z[z23], z[z24]).z34.contains(z[z34]);
    } catch (const OutOfRegion&) {
        return false;
    }
}

DiagonalVector canonical_diagonals(const NuRatio& nu)
{
    const double mu = nu.mu();
    const double c = 1.0 / (2.0 * (1.0 + mu));
    return {{c * mu, c, c, c * mu}};
}

DensityMatrix4 partial_transpose(const DensityMatrix4& rho)
{
    DensityMatrix4 out;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) out(2 * a + b, 2 * c + d) = rho(2 * a + d, 2 * c + b);
    return out;
}

BlooreRealVector flip_second_qubit(const BlooreRealVector& z)
{
    return {{z[z12], z[z24], z[z23], z[z14], z[z13], z[z34]}};
}

BlooreComplexVector flip_second_qubit(const BlooreComplexVector& z)
{
    return {{std::conj(z[z12]), z[z24], z[z23], z[z14], z[z13], std::conj(z[z34])}};
}

std::array<double, 5> a3_quartic_coeffs(const BlooreRealVector& v)
{
    const double z12_ = v[z12], z13_ = v[z13], z14_ = v[z14];
    const double z23_ = v[z23], z24_ = v[z24], z34_ = v[z34];
    const double s = (z34_ * z34_ - 1) * z12_ * z12_ - 2 * (z14_ * z23_ + z13_ * z24_) * z34_ * z12_
                   - z13_ * z13_ + z14_ * z14_ * z23_ * z23_ + (z13_ * z13_ - 1) * z24_ * z24_
                   - z34_ * z34_ - 2 * z13_ * z14_ * z23_ * z24_ + 1;
    return {
        -z23_ * z23_,
        2 * z23_ * (z12_ * z24_ + z13_ * z34_),
        s,
        2 * z14_ * (z12_ * z13_ + z24_ * z34_),
        -z14_ * z14_,
    };
}

double scaled_pt_determinant(const BlooreComplexVector& z, double mu)
{
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
    m(0, 0) = mu * mu;
    m(0, 1) = mu * std::conj(z[z12]);
    m(0, 2) = mu * z[z13];
    m(0, 3) = z[z23];
    m(1, 2) = mu * z[z14];
    m(1, 3) = z[z24];
    m(2, 3) = std::conj(z[z34]);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) m(j, i) = std::conj(m(i, j));
    return hermitian_det4(m);
}

bool is_ppt(const BlooreRealVector& z, const NuRatio& nu)
{
    return nonnegative(eval_quartic(a3_quartic_coeffs(z), nu.mu()));
}

bool is_ppt(const BlooreComplexVector& z, const NuRatio& nu)
{
    return nonnegative(scaled_pt_determinant(z, nu.mu()));
}

}  // namespace hsvol
