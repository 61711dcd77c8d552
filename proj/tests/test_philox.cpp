#include <doctest.h>

#include <cmath>
#include <vector>

#include "shocklab/philox.hpp"

using namespace shocklab;

TEST_CASE("philox4x32-10 known-answer vectors") {
    using C = Philox4x32::Counter;
    CHECK(Philox4x32::bijection({0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::bijection({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::bijection({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("normal stream is addressable and reproducible") {
    const NormalStream a(42, 3), b(42, 3), c(42, 4);
    CHECK(a.block(10, 2) == b.block(10, 2));
    CHECK(a.block(10, 2) != c.block(10, 2));
    CHECK(a.block(10, 2) != a.block(11, 2));
    std::vector<double> buf(10);
    a.fill(10, buf.data(), buf.size());
    const auto blk = a.block(10, 2);
    CHECK(buf[8] == blk[0]);
    CHECK(buf[9] == blk[1]);
}

TEST_CASE("normal stream moments") {
    const NormalStream s(7, 0);
    constexpr std::size_t N = 200000;
    std::vector<double> v(N);
    s.fill(0, v.data(), N);
    double m = 0, m2 = 0, m4 = 0;
    for (double x : v) {
        m += x;
        m2 += x * x;
        m4 += x * x * x * x;
    }
    m /= N;
    m2 /= N;
    m4 /= N;
    CHECK(std::abs(m) < 5.0 / std::sqrt(N));
    CHECK(std::abs(m2 - 1.0) < 5.0 * std::sqrt(2.0 / N));
    CHECK(std::abs(m4 - 3.0) < 5.0 * std::sqrt(96.0 / N));
}
