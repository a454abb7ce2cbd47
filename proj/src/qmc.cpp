#include "hsvol/qmc.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace hsvol {

bool is_prime(std::uint64_t n)
{
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::uint32_t smallest_prime_at_least(std::uint32_t n)
{
    while (!is_prime(n)) ++n;
    return n;
}

void SequenceSpec::validate() const
{
    if (dimension < 1) throw std::invalid_argument("sequence dimension must be positive");
    if (!is_prime(base)) throw std::invalid_argument("sequence base must be prime");
    if (base < static_cast<std::uint32_t>(dimension)) throw std::invalid_argument("sequence base must be >= dimension");
    if (base > 2048) throw std::invalid_argument("sequence base must not exceed 2048");
}

std::string SequenceSpec::describe() const
{
    std::ostringstream os;
    os << "faure(dim=" << dimension << ",base=" << base << ",seed=" << scramble_seed << ",skip=" << skip
       << ",count=" << count << ")";
    return os.str();
}

SequenceSpec default_sequence(Case c, std::uint64_t count, std::uint64_t seed, std::uint64_t skip)
{
    SequenceSpec s;
    s.dimension = dimension(c);
    s.base = smallest_prime_at_least(static_cast<std::uint32_t>(s.dimension));
    s.scramble_seed = seed;
    s.skip = skip;
    s.count = count;
    return s;
}

FaureSequence::FaureSequence(const SequenceSpec& spec) : spec_(spec)
{
    spec_.validate();
    const std::uint64_t b = spec_.base;

    // Output digits: smallest K with b^-K < 2^-53.
    std::uint64_t pw = 1;
    while (pw <= (std::uint64_t{1} << 53)) {
        pw *= b;
        ++out_digits_;
    }
    scale_ = 1.0 / static_cast<double>(pw);

    // Input digits: enough for every 64-bit index.
    std::uint64_t reach = std::numeric_limits<std::uint64_t>::max();
    while (reach > 0) {
        reach /= b;
        ++in_digits_;
    }

    const int K = out_digits_;
    const int M = in_digits_;
    const int rows = std::max(K, M);

    // Binomial coefficients mod b up to the largest column index.
    std::vector<std::vector<std::uint64_t>> binom(M, std::vector<std::uint64_t>(M, 0));
    for (int n = 0; n < M; ++n) {
        binom[n][0] = 1;
        for (int k = 1; k <= n; ++k) binom[n][k] = (binom[n - 1][k - 1] + (k < n ? binom[n - 1][k] : 0)) % b;
    }

    std::mt19937_64 rng(spec_.scramble_seed);
    const bool scramble = spec_.scramble_seed != 0;

    generator_.resize(spec_.dimension);
    for (int j = 0; j < spec_.dimension; ++j) {
        // Pascal power P^j: entry (r, c) = binom(c, r) j^(c - r) mod b.
        std::vector<std::uint64_t> jpow(M, 1);
        for (int e = 1; e < M; ++e) jpow[e] = jpow[e - 1] * (static_cast<std::uint64_t>(j) % b) % b;
        std::vector<std::uint64_t> pascal(static_cast<std::size_t>(rows) * M, 0);
        for (int r = 0; r < rows && r < M; ++r)
            for (int c = r; c < M; ++c) pascal[static_cast<std::size_t>(r) * M + c] = binom[c][r] * jpow[c - r] % b;

        std::vector<std::uint64_t> lower(static_cast<std::size_t>(K) * K, 0);
        for (int r = 0; r < K; ++r) {
            for (int c = 0; c < r; ++c) lower[static_cast<std::size_t>(r) * K + c] = scramble ? rng() % b : 0;
            lower[static_cast<std::size_t>(r) * K + r] = scramble ? 1 + rng() % (b - 1) : 1;
        }

        auto& g = generator_[j];
        g.assign(static_cast<std::size_t>(K) * M, 0);
        for (int r = 0; r < K; ++r)
            for (int c = 0; c < M; ++c) {
                std::uint64_t acc = 0;
                for (int k = 0; k <= r; ++k)
                    acc = (acc + lower[static_cast<std::size_t>(r) * K + k] * pascal[static_cast<std::size_t>(k) * M + c]) % b;
                g[static_cast<std::size_t>(r) * M + c] = static_cast<std::uint32_t>(acc);
            }
    }
}

void FaureSequence::point(std::uint64_t n, std::span<double> out) const
{
    if (out.size() != static_cast<std::size_t>(spec_.dimension))
        throw std::invalid_argument("FaureSequence::point: output span has wrong dimension");
    const std::uint64_t b = spec_.base;
    std::uint32_t a[64];
    int m = 0;
    for (std::uint64_t v = n; v > 0; v /= b) a[m++] = static_cast<std::uint32_t>(v % b);

    const int K = out_digits_;
    const int M = in_digits_;
    for (int j = 0; j < spec_.dimension; ++j) {
        const std::uint32_t* g = generator_[j].data();
        std::uint64_t value = 0;
        for (int r = 0; r < K; ++r) {
            std::uint64_t acc = 0;
            const std::uint32_t* row = g + static_cast<std::size_t>(r) * M;
            for (int c = 0; c < m; ++c) acc += static_cast<std::uint64_t>(row[c]) * a[c];
            value = value * b + acc % b;
        }
        double x = static_cast<double>(value) * scale_;
        if (x >= 1.0) x = std::nextafter(1.0, 0.0);
        out[j] = x;
    }
}

void FaureSequence::fill(std::uint64_t first, std::uint64_t count, std::span<double> out) const
{
    const auto d = static_cast<std::size_t>(spec_.dimension);
    if (out.size() < count * d) throw std::invalid_argument("FaureSequence::fill: output span too small");
    for (std::uint64_t i = 0; i < count; ++i) point(stream_index(first + i), out.subspan(i * d, d));
}

void dump_points(const SequenceSpec& spec, const std::string& path)
{
    const FaureSequence seq(spec);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path + " for writing");
    const auto d = static_cast<std::size_t>(spec.dimension);
    std::vector<double> buf;
    for (std::uint64_t first = 0; first < spec.count; first += kBlockSize) {
        const std::uint64_t n = std::min(kBlockSize, spec.count - first);
        buf.resize(n * d);
        seq.fill(first, n, buf);
        for (double x : buf) {
            auto bits = std::bit_cast<std::uint64_t>(x);
            if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
            os.write(reinterpret_cast<const char*>(&bits), sizeof bits);
        }
    }
    if (!os) throw IoError("write failed for " + path);
}

MappedPoint map_to_bloore(std::span<const double> point, Case c)
{
    if (point.size() != static_cast<std::size_t>(dimension(c)))
        throw std::invalid_argument("map_to_bloore: point dimension does not match the case");
    if (c == Case::real) return {to_real_bloore(point.data()), domain_volume(c)};
    return {to_complex_bloore(point.data()), domain_volume(c)};
}

}  // namespace hsvol
