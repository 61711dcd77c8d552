#include "shocklab/philox.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>

namespace shocklab {

namespace {
constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

// Uniform on the open interval (0, 1).
inline double open_uniform(std::uint32_t x) noexcept { return (static_cast<double>(x) + 0.5) * 0x1p-32; }
} // namespace

Philox4x32::Counter Philox4x32::bijection(Counter c, Key k) noexcept {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            k[0] += kWeyl0;
            k[1] += kWeyl1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, c[0], hi0, lo0);
        mulhilo(kMul1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
    return c;
}

NormalStream::NormalStream(std::uint64_t seed, std::uint32_t realization) noexcept
    : seed_(seed), realization_(realization),
      key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

std::array<double, 4> NormalStream::block(std::uint64_t step, std::uint32_t block_index) const noexcept {
    const Philox4x32::Counter ctr{block_index, static_cast<std::uint32_t>(step),
                                  static_cast<std::uint32_t>(step >> 32), realization_};
    const auto r = Philox4x32::bijection(ctr, key_);
    std::array<double, 4> z;
    for (int p = 0; p < 2; ++p) {
        const double rad = std::sqrt(-2.0 * std::log(open_uniform(r[2 * p])));
        const double ang = 2.0 * std::numbers::pi * open_uniform(r[2 * p + 1]);
        z[2 * p] = rad * std::cos(ang);
        z[2 * p + 1] = rad * std::sin(ang);
    }
    return z;
}

void NormalStream::fill(std::uint64_t step, double* out, std::size_t count) const noexcept {
    std::size_t i = 0;
    for (std::uint32_t b = 0; i < count; ++b) {
        const auto z = block(step, b);
        for (std::size_t k = 0; k < 4 && i < count; ++k) out[i++] = z[k];
    }
}

} // namespace shocklab
