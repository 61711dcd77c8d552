#pragma once

#include <array>
#include <cstdint>

namespace shocklab {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
/// Output is a pure function of (key, counter); no hidden state.
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter bijection(Counter ctr, Key key) noexcept;
};

/// Standard normal stream addressed by (seed, realization, step, block).
/// Each block yields four normals via Box-Muller on 32-bit uniforms.
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint32_t realization) noexcept;

    std::array<double, 4> block(std::uint64_t step, std::uint32_t block_index) const noexcept;

    /// Fill out[0..count) with the normals of one step, in block order.
    void fill(std::uint64_t step, double* out, std::size_t count) const noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint32_t realization() const noexcept { return realization_; }

private:
    std::uint64_t seed_;
    std::uint32_t realization_;
    Philox4x32::Key key_;
};

} // namespace shocklab
