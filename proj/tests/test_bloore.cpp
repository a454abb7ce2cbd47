#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "doctest.h"
#include "hsvol/bloore.hpp"
#include "test_util.hpp"

using namespace hsvol;
using testutil::random_complex;
using testutil::random_diagonal;
using testutil::random_real;

namespace {

double min_eigenvalue(const Eigen::Matrix4cd& m)
{
    return Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd>(m, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

double min_eigenvalue(const Eigen::Matrix4d& m)
{
    return Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(m, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

}  // namespace

TEST_SUITE("bloore")
{
    TEST_CASE("assembled density is Hermitian with the requested diagonal")
    {
        std::mt19937_64 rng(1);
        const auto z = random_complex(rng);
        const DiagonalVector d{{0.1, 0.2, 0.3, 0.4}};
        const DensityMatrix4 rho = assemble_density(z, d);
        CHECK((rho - rho.adjoint()).norm() == doctest::Approx(0.0));
        CHECK(rho.trace().real() == doctest::Approx(1.0));
        for (int i = 0; i < 4; ++i) CHECK(rho(i, i).real() == d.d[i]);
        CHECK(std::abs(rho(0, 3) - std::sqrt(0.1 * 0.4) * z[z14]) < 1e-15);

        // rho = D^(1/2) W D^(1/2)
        Eigen::Vector4cd s;
        for (int i = 0; i < 4; ++i) s(i) = std::sqrt(d.d[i]);
        const Eigen::Matrix4cd expected = s.asDiagonal() * bloore_matrix(z) * s.asDiagonal();
        CHECK((rho - expected).norm() < 1e-15);
    }

    TEST_CASE("diagonal validation and ratio construction")
    {
        CHECK_THROWS_AS((DiagonalVector{{0.5, 0.5, 0.5, -0.5}}.validate()), std::invalid_argument);
        CHECK_THROWS_AS((DiagonalVector{{0.3, 0.3, 0.3, 0.3}}.validate()), std::invalid_argument);
        CHECK_NOTHROW((DiagonalVector{{0.25, 0.25, 0.25, 0.25}}.validate()));
        CHECK_THROWS_AS(NuRatio(-1.0), std::invalid_argument);
        CHECK_THROWS_AS(NuRatio::from_mu(std::nan("")), std::invalid_argument);
        CHECK(NuRatio::from_mu(0.5).nu() == 0.25);
        CHECK(NuRatio(4.0).mu() == 2.0);
        CHECK_THROWS_AS(parse_case("quaternion"), std::invalid_argument);
        CHECK(parse_case("complex") == Case::complex);
    }

    TEST_CASE("determinant polynomials match direct determinants")
    {
        std::mt19937_64 rng(2);
        for (int i = 0; i < 20000; ++i) {
            const auto zr = random_real(rng);
            CHECK(a2_real(zr) == doctest::Approx(bloore_matrix(zr).determinant()).epsilon(1e-12).scale(1.0));
            const auto zc = random_complex(rng);
            CHECK(a2_complex(zc) ==
                  doctest::Approx(bloore_matrix(zc).determinant().real()).epsilon(1e-12).scale(1.0));
        }
    }

    TEST_CASE("determinant of rho factors into diagonal product times the polynomial")
    {
        std::mt19937_64 rng(3);
        for (int i = 0; i < 1000; ++i) {
            const auto z = random_real(rng);
            const DiagonalVector d = random_diagonal(rng, 0.7);
            const double det = assemble_density(z, d).determinant().real();
            CHECK(det / d.product() == doctest::Approx(a2_real(z)).epsilon(1e-9).scale(1.0));
        }
    }

    TEST_CASE("principal minor sums are the characteristic coefficients")
    {
        std::mt19937_64 rng(4);
        for (int i = 0; i < 2000; ++i) {
            const auto z = random_complex(rng);
            const Eigen::Vector4d ev =
                Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd>(bloore_matrix(z), Eigen::EigenvaluesOnly).eigenvalues();
            double e2 = 0.0, e3 = 0.0;
            for (int a = 0; a < 4; ++a)
                for (int b = a + 1; b < 4; ++b) {
                    e2 += ev(a) * ev(b);
                    for (int c = b + 1; c < 4; ++c) e3 += ev(a) * ev(b) * ev(c);
                }
            const auto e = principal_minor_sums(z);
            CHECK(e[0] == 4.0);
            CHECK(e[1] == doctest::Approx(e2).scale(1.0));
            CHECK(e[2] == doctest::Approx(e3).scale(1.0));
            CHECK(e[3] == doctest::Approx(ev.prod()).scale(1.0));
        }
    }

    TEST_CASE("PSD test agrees with the smallest eigenvalue")
    {
        std::mt19937_64 rng(5);
        int psd_real = 0, psd_complex = 0;
        for (int i = 0; i < 20000; ++i) {
            const auto zr = random_real(rng);
            const double lr = min_eigenvalue(bloore_matrix(zr));
            if (std::abs(lr) > 1e-9) {
                CHECK(is_psd(zr) == (lr > 0.0));
                psd_real += lr > 0.0;
            }
            const auto zc = random_complex(rng);
            const double lc = min_eigenvalue(bloore_matrix(zc));
            if (std::abs(lc) > 1e-9) {
                CHECK(is_psd(zc) == (lc > 0.0));
                psd_complex += lc > 0.0;
            }
        }
        // Both regions must actually be exercised.
        CHECK(psd_real > 1000);
        CHECK(psd_complex > 50);
    }

    TEST_CASE("CAD membership agrees with the eigenvalue test")
    {
        std::mt19937_64 rng(6);
        for (int i = 0; i < 20000; ++i) {
            const auto z = random_real(rng);
            const double l = min_eigenvalue(bloore_matrix(z));
            if (std::abs(l) > 1e-9) CHECK(cad_contains(z) == (l > 0.0));
        }
    }

    TEST_CASE("CAD bounds reject points outside the nested region")
    {
        CHECK_THROWS_AS(cad_bounds(1.0, 0.0, 0.0, 0.0, 0.0), OutOfRegion);
        CHECK_THROWS_AS(cad_bounds(1.5, 0.0, 0.0, 0.0, 0.0), OutOfRegion);
        CHECK_THROWS_AS(cad_bounds(0.9, 0.9, 0.0, -0.9, 0.0), OutOfRegion);
        const CadBounds b = cad_bounds(0.0, 0.0, 0.0, 0.0, 0.0);
        CHECK(b.z23.lo == -1.0);
        CHECK(b.z23.hi == 1.0);
        CHECK(b.z34.lo == doctest::Approx(-1.0));
        CHECK(b.z34.hi == doctest::Approx(1.0));
        CHECK_FALSE(cad_contains(BlooreRealVector{{0.0, 0.0, 0.0, 0.0, 0.0, 1.5}}));
    }

    TEST_CASE("partial transpose is an involution preserving trace and hermiticity")
    {
        std::mt19937_64 rng(7);
        const auto z = random_complex(rng);
        const DensityMatrix4 rho = assemble_density(z, random_diagonal(rng, 1.3));
        const DensityMatrix4 pt = partial_transpose(rho);
        CHECK((partial_transpose(pt) - rho).norm() == 0.0);
        CHECK(pt.trace().real() == doctest::Approx(1.0));
        CHECK((pt - pt.adjoint()).norm() < 1e-15);
        // Index rule: rho_{(a b),(c d)} -> rho_{(a d),(c b)}
        CHECK(pt(0, 3) == rho(1, 2));
        CHECK(pt(1, 2) == rho(0, 3));
        CHECK(pt(0, 1) == rho(1, 0));
    }

    TEST_CASE("Bell state fails PPT, product state passes")
    {
        // (|00> + |11>)/sqrt 2: d = (1/2, 0, 0, 1/2), z14 = 1.
        DensityMatrix4 bell = DensityMatrix4::Zero();
        bell(0, 0) = bell(3, 3) = bell(0, 3) = bell(3, 0) = 0.5;
        CHECK(min_eigenvalue(partial_transpose(bell)) == doctest::Approx(-0.5));
        const BlooreRealVector zero{};
        const DiagonalVector d{{0.25, 0.25, 0.25, 0.25}};
        CHECK(min_eigenvalue(partial_transpose(assemble_density(zero, d))) == doctest::Approx(0.25));
        CHECK(is_ppt(zero, NuRatio(1.0)));
        // Only rho_14 coupled: PPT iff z14^2 <= 1 / nu.
        const BlooreRealVector corner{{0.0, 0.0, 0.99, 0.0, 0.0, 0.0}};
        CHECK(is_ppt(corner, NuRatio(1.0)));
        CHECK_FALSE(is_ppt(corner, NuRatio(1.03)));
        CHECK(is_ppt(corner, NuRatio(0.25)));
    }

    TEST_CASE("quartic equals nu det(rho_PT) / prod(d) for any diagonal with that ratio")
    {
        std::mt19937_64 rng(8);
        std::uniform_real_distribution<double> mu_dist(0.05, 3.0);
        for (int i = 0; i < 5000; ++i) {
            const auto z = random_real(rng);
            const double mu = mu_dist(rng);
            const auto q = a3_quartic_coeffs(z);
            for (int rep = 0; rep < 2; ++rep) {
                const DiagonalVector d = random_diagonal(rng, mu * mu);
                const double direct =
                    mu * mu * partial_transpose(assemble_density(z, d)).determinant().real() / d.product();
                CHECK(eval_quartic(q, mu) == doctest::Approx(direct).epsilon(1e-9).scale(1.0));
            }
        }
    }

    TEST_CASE("scaled PT determinant equals nu det(rho_PT) / prod(d) in the complex case")
    {
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> mu_dist(0.05, 3.0);
        for (int i = 0; i < 5000; ++i) {
            const auto z = random_complex(rng);
            const double mu = mu_dist(rng);
            const DiagonalVector d = random_diagonal(rng, mu * mu);
            const double direct = mu * mu * partial_transpose(assemble_density(z, d)).determinant().real() / d.product();
            CHECK(scaled_pt_determinant(z, mu) == doctest::Approx(direct).epsilon(1e-9).scale(1.0));
        }
    }

    TEST_CASE("real vectors give the same PT value through both paths")
    {
        std::mt19937_64 rng(10);
        for (int i = 0; i < 2000; ++i) {
            const auto zr = random_real(rng);
            BlooreComplexVector zc;
            for (int k = 0; k < 6; ++k) zc[k] = zr[k];
            for (double mu : {0.0, 0.3, 1.0, 1.7})
                CHECK(scaled_pt_determinant(zc, mu) ==
                      doctest::Approx(eval_quartic(a3_quartic_coeffs(zr), mu)).epsilon(1e-12).scale(1.0));
        }
    }

    TEST_CASE("PT value at mu = 0 is -|z23|^2")
    {
        std::mt19937_64 rng(11);
        const auto zr = random_real(rng);
        CHECK(a3_quartic_coeffs(zr)[0] == -zr[z23] * zr[z23]);
        CHECK(a3_quartic_coeffs(zr)[4] == -zr[z14] * zr[z14]);
        const auto zc = random_complex(rng);
        CHECK(scaled_pt_determinant(zc, 0.0) == doctest::Approx(-std::norm(zc[z23])).scale(1.0));
    }

    TEST_CASE("PPT classification agrees with PT eigenvalues on PSD states")
    {
        std::mt19937_64 rng(12);
        std::uniform_real_distribution<double> mu_dist(0.05, 2.0);
        int checked = 0, separable = 0;
        for (int i = 0; i < 400000 && checked < 3000; ++i) {
            const auto z = random_complex(rng);
            if (!is_psd(z)) continue;
            const NuRatio nu = NuRatio::from_mu(mu_dist(rng));
            const DiagonalVector d = canonical_diagonals(nu);
            d.validate();
            const double l = min_eigenvalue(partial_transpose(assemble_density(z, d)));
            if (std::abs(l) < 1e-10) continue;
            ++checked;
            separable += l > 0.0;
            CHECK(is_ppt(z, nu) == (l > 0.0));
        }
        CHECK(checked > 500);
        CHECK(separable > 0);
        CHECK(separable < checked);
    }

    TEST_CASE("canonical diagonal has the requested ratio and unit trace")
    {
        const NuRatio nu(0.36);
        const DiagonalVector d = canonical_diagonals(nu);
        CHECK(d.d[0] * d.d[3] / (d.d[1] * d.d[2]) == doctest::Approx(0.36));
        CHECK(d.d[0] + d.d[1] + d.d[2] + d.d[3] == doctest::Approx(1.0));
    }

    TEST_CASE("flipping the second qubit inverts nu and preserves PSD")
    {
        std::mt19937_64 rng(13);
        for (int i = 0; i < 5000; ++i) {
            const auto z = random_complex(rng);
            const auto f = flip_second_qubit(z);
            for (int k = 0; k < 6; ++k) CHECK(flip_second_qubit(f)[k] == z[k]);
            CHECK(is_psd(f) == is_psd(z));
            CHECK(is_ppt(f, NuRatio(4.0)) == is_ppt(z, NuRatio(0.25)));
        }
    }

    TEST_CASE("nonnegative classifies signed zeros by sign bit")
    {
        CHECK(nonnegative(0.0));
        CHECK_FALSE(nonnegative(-0.0));
        CHECK_FALSE(nonnegative(-1e-300));
        CHECK(nonnegative(1e-300));
    }
}
