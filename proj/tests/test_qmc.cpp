#include <fstream>
#include <set>

#include "doctest.h"
#include "hsvol/qmc.hpp"
#include "test_util.hpp"

using namespace hsvol;

namespace {

double radical_inverse(std::uint64_t n, std::uint64_t b)
{
    double x = 0.0, f = 1.0 / static_cast<double>(b);
    for (; n > 0; n /= b, f /= static_cast<double>(b)) x += static_cast<double>(n % b) * f;
    return x;
}

// Checks that absolute indices [first, first + b^m) put exactly one point in
// every elementary box with b^k1 x b^k2 cells (k1 + k2 = m) for each pair of
// coordinates.
void check_pair_stratification(const FaureSequence& seq, std::uint64_t first, int m)
{
    const auto b = seq.spec().base;
    const std::uint64_t n = static_cast<std::uint64_t>(std::pow(b, m));
    const int d = seq.dimension();
    std::vector<double> pts(n * static_cast<std::size_t>(d));
    std::vector<double> u(static_cast<std::size_t>(d));
    for (std::uint64_t i = 0; i < n; ++i) {
        seq.point(first + i, u);
        std::copy(u.begin(), u.end(), pts.begin() + static_cast<std::ptrdiff_t>(i * d));
    }
    for (int k1 = 0; k1 <= m; ++k1) {
        const double c1 = std::pow(b, k1), c2 = std::pow(b, m - k1);
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) {
                std::set<std::uint64_t> cells;
                // Unscrambled points sit exactly on cell boundaries, where the
                // double value may fall a rounding error short.
                for (std::uint64_t p = 0; p < n; ++p) {
                    const auto x = static_cast<std::uint64_t>(pts[p * d + i] * c1 + 1e-9);
                    const auto y = static_cast<std::uint64_t>(pts[p * d + j] * c2 + 1e-9);
                    cells.insert(x * static_cast<std::uint64_t>(c2) + y);
                }
                REQUIRE(cells.size() == n);
            }
    }
}

}  // namespace

TEST_SUITE("qmc")
{
    TEST_CASE("prime helpers and default bases")
    {
        CHECK(is_prime(2));
        CHECK(is_prime(13));
        CHECK_FALSE(is_prime(1));
        CHECK_FALSE(is_prime(91));
        CHECK(smallest_prime_at_least(6) == 7);
        CHECK(smallest_prime_at_least(12) == 13);
        CHECK(default_sequence(Case::real, 10, 1, 0).base == 7);
        CHECK(default_sequence(Case::complex, 10, 1, 0).base == 13);
        CHECK(default_sequence(Case::complex, 10, 1, 0).dimension == 12);
    }

    TEST_CASE("sequence specification is validated")
    {
        SequenceSpec s{6, 8, 1, 0, 10};
        CHECK_THROWS_AS(s.validate(), std::invalid_argument);
        s.base = 5;
        CHECK_THROWS_AS(s.validate(), std::invalid_argument);
        s.base = 2053;
        CHECK_THROWS_AS(s.validate(), std::invalid_argument);
        s.base = 7;
        CHECK_NOTHROW(s.validate());
        CHECK(s.describe() == "faure(dim=6,base=7,seed=1,skip=0,count=10)");
    }

    TEST_CASE("unscrambled first coordinate is the van der Corput sequence")
    {
        const FaureSequence seq(SequenceSpec{3, 7, 0, 0, 0});
        std::vector<double> u(3);
        for (std::uint64_t n : {0ull, 1ull, 6ull, 7ull, 48ull, 342ull, 12345ull, 987654321ull}) {
            seq.point(n, u);
            CHECK(u[0] == doctest::Approx(radical_inverse(n, 7)).epsilon(1e-15));
        }
        // Second coordinate: Pascal matrix applied to the digits of n.
        seq.point(7, u);  // digits (0, 1) -> (1, 1): 1/7 + 1/49
        CHECK(u[1] == doctest::Approx(1.0 / 7 + 1.0 / 49));
    }

    TEST_CASE("unscrambled index 0 is the origin; emitted stream starts at index 1")
    {
        const FaureSequence seq(SequenceSpec{6, 7, 0, 0, 0});
        std::vector<double> u(6);
        seq.point(0, u);
        for (double x : u) CHECK(x == 0.0);
        CHECK(seq.stream_index(0) == 1);
        const FaureSequence skipped(SequenceSpec{6, 7, 0, 5, 0});
        CHECK(skipped.stream_index(2) == 8);
    }

    TEST_CASE("blocks of 7^4 points are stratified in every coordinate pair")
    {
        check_pair_stratification(FaureSequence(default_sequence(Case::real, 0, 0, 0)), 0, 4);
        check_pair_stratification(FaureSequence(default_sequence(Case::real, 0, 1, 0)), 0, 4);
        // Any aligned block, not only the first one.
        check_pair_stratification(FaureSequence(default_sequence(Case::real, 0, 7, 0)), 3 * 2401, 4);
    }

    TEST_CASE("complex-case sequence is stratified in blocks of 13^2")
    {
        check_pair_stratification(FaureSequence(default_sequence(Case::complex, 0, 1, 0)), 0, 2);
    }

    TEST_CASE("coordinates lie in [0, 1) with mean 1/2")
    {
        for (Case c : {Case::real, Case::complex}) {
            const FaureSequence seq(default_sequence(c, 0, 3, 0));
            const int d = seq.dimension();
            const std::uint64_t n = c == Case::real ? 16807 : 28561;  // 7^5, 13^4
            std::vector<double> u(static_cast<std::size_t>(d)), sum(static_cast<std::size_t>(d), 0.0);
            for (std::uint64_t i = 0; i < n; ++i) {
                seq.point(i, u);
                for (int j = 0; j < d; ++j) {
                    REQUIRE(u[j] >= 0.0);
                    REQUIRE(u[j] < 1.0);
                    sum[j] += u[j];
                }
            }
            for (double s : sum) CHECK(s / static_cast<double>(n) == doctest::Approx(0.5).epsilon(1e-4));
        }
    }

    TEST_CASE("restart at any index reproduces the stream")
    {
        const FaureSequence seq(default_sequence(Case::complex, 0, 11, 0));
        const int d = seq.dimension();
        std::vector<double> all(1010 * d), tail(10 * d);
        seq.fill(0, 1010, all);
        seq.fill(1000, 10, tail);
        for (int i = 0; i < 10 * d; ++i) CHECK(tail[i] == all[1000 * d + i]);

        // skip shifts the stream
        const FaureSequence skipped(default_sequence(Case::complex, 0, 11, 1000));
        std::vector<double> s(10 * d);
        skipped.fill(0, 10, s);
        CHECK(s == tail);
    }

    TEST_CASE("same seed reproduces, different seeds differ, seed 0 is unscrambled")
    {
        std::vector<double> a(6), b(6), c(6);
        FaureSequence(default_sequence(Case::real, 0, 5, 0)).point(100, a);
        FaureSequence(default_sequence(Case::real, 0, 5, 0)).point(100, b);
        FaureSequence(default_sequence(Case::real, 0, 6, 0)).point(100, c);
        CHECK(a == b);
        CHECK(a != c);
    }

    TEST_CASE("output keeps double resolution")
    {
        const FaureSequence seq(default_sequence(Case::real, 0, 1, 0));
        CHECK(std::pow(7.0, seq.digits()) > std::ldexp(1.0, 53));
        CHECK(std::pow(7.0, seq.digits() - 1) <= std::ldexp(1.0, 53));
        std::vector<double> u(6);
        std::vector<double> w(5);
        CHECK_THROWS_AS(seq.point(1, w), std::invalid_argument);
    }

    TEST_CASE("mapping to the Bloore domain")
    {
        const std::vector<double> half(6, 0.5);
        const MappedPoint p = map_to_bloore(half, Case::real);
        CHECK(p.volume_factor == 64.0);
        for (double x : std::get<BlooreRealVector>(p.z).z) CHECK(x == 0.0);
        CHECK_THROWS_AS(map_to_bloore(half, Case::complex), std::invalid_argument);

        std::vector<double> u(12);
        for (int k = 0; k < 12; ++k) u[k] = (k + 1) / 13.0;
        const MappedPoint q = map_to_bloore(u, Case::complex);
        CHECK(q.volume_factor == doctest::Approx(std::pow(std::numbers::pi, 6)));
        const auto& z = std::get<BlooreComplexVector>(q.z);
        for (int k = 0; k < 6; ++k) {
            CHECK(std::abs(z[k]) == doctest::Approx(std::sqrt(u[2 * k])));
            CHECK(std::abs(z[k]) <= 1.0);
        }
        CHECK(domain_volume(Case::real) == 64.0);
    }

    TEST_CASE("point dump matches the in-memory stream")
    {
        testutil::TempDir dir("qmc");
        const SequenceSpec spec = default_sequence(Case::real, 50, 2, 3);
        dump_points(spec, dir.file("pts.bin"));
        std::ifstream is(dir.file("pts.bin"), std::ios::binary);
        std::vector<double> read(50 * 6);
        is.read(reinterpret_cast<char*>(read.data()), static_cast<std::streamsize>(read.size() * sizeof(double)));
        CHECK(is.gcount() == static_cast<std::streamsize>(read.size() * sizeof(double)));
        CHECK(is.peek() == std::char_traits<char>::eof());
        std::vector<double> expected(50 * 6);
        FaureSequence(spec).fill(0, 50, expected);
        CHECK(read == expected);
        CHECK_THROWS_AS(dump_points(spec, dir.file("missing/dir/pts.bin")), IoError);
    }
}
