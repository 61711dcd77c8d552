#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "shocklab/fields.hpp"

using namespace shocklab;

namespace {
constexpr double pi = std::numbers::pi;

double max_err(const Field& f, auto&& exact) {
    double e = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) e = std::max(e, std::abs(f[j] - exact(f.grid().node(j))));
    return e;
}
} // namespace

TEST_CASE("grid geometry") {
    const GridSpec g(20.0, 1024);
    CHECK(g.dx() == doctest::Approx(40.0 / 1024));
    CHECK(g.node(0) == -20.0);
    CHECK(g.node(1023) == doctest::Approx(20.0 - g.dx()));
    CHECK(g.contains(-20.0));
    CHECK_FALSE(g.contains(20.0));
    CHECK_THROWS_AS(GridSpec(20.0, 4), DomainError);
    CHECK_THROWS_AS(GridSpec(-1.0, 64), DomainError);
}

TEST_CASE("fields reject non-finite samples and mismatched grids") {
    const GridSpec g(1.0, 16);
    std::vector<double> v(16, 0.0);
    v[3] = NAN;
    CHECK_THROWS_AS(Field(g, v), NonFiniteValue);
    CHECK_THROWS_AS(Field(g, std::vector<double>(15, 0.0)), GridMismatch);
    const Field a = Field::constant(g, 1.0), b = Field::constant(GridSpec(1.0, 32), 1.0);
    CHECK_THROWS_AS(a + b, GridMismatch);
    CHECK_THROWS_AS(a - a.with_topology(Topology::clamped), GridMismatch);
}

TEST_CASE("cyclic shift moves the profile left") {
    const GridSpec g(1.0, 8);
    const Field f = Field::sample(g, [&](double x) { return x; });
    const Field s = f.shifted_cyclic(3);
    for (std::size_t j = 0; j < 8; ++j) CHECK(s[j] == f[(j + 3) % 8]);
    const Field back = s.shifted_cyclic(-3);
    for (std::size_t j = 0; j < 8; ++j) CHECK(back[j] == f[j]);
}

TEST_CASE("monotone field requires strict increase") {
    const GridSpec g(1.0, 8);
    CHECK_NOTHROW(MonotoneField(Field::sample(g, [](double x) { return x; })));
    CHECK_THROWS_AS(MonotoneField(Field::constant(g, 1.0)), OrderingViolation);
}

TEST_CASE("central derivative of sin is second order") {
    const double L = 20.0;
    auto err = [&](std::size_t n) {
        const GridSpec g(L, n);
        const Field f = Field::sample(g, [&](double x) { return std::sin(pi * x / L); });
        return max_err(spatial_derivative(f), [&](double x) { return pi / L * std::cos(pi * x / L); });
    };
    const double e512 = err(512), e1024 = err(1024);
    const double dx = 2.0 * L / 512;
    // Truncation term (pi/L)^3 dx^2 / 6.
    CHECK(e512 <= std::pow(pi / L, 3) * dx * dx / 6.0 * 1.01);
    CHECK(e512 / e1024 == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("clamped derivative uses second-order one-sided ends") {
    const GridSpec g(1.0, 64, Topology::clamped);
    const Field f = Field::sample(g, [](double x) { return x * x; });
    const Field d = spatial_derivative(f);
    CHECK(max_err(d, [](double x) { return 2.0 * x; }) < 1e-12);
}

TEST_CASE("cumulative integral of cos") {
    const double L = 20.0, b = 1.3;
    const GridSpec g(L, 512);
    const double k = pi / L;
    const Field f = Field::sample(g, [&](double x) { return std::cos(k * x); });
    auto exact = [&](double x) { return (std::sin(k * x) - std::sin(k * b)) / k; };
    const double e_trap = max_err(cumulative_from(f, b), exact);
    const double e4 = max_err(cumulative_from(f, b, Quadrature::fourth_order), exact);
    CHECK(e_trap < 5e-3);
    CHECK(e4 < 1e-6);
    CHECK(e4 < e_trap / 100.0);
    CHECK(integral_between(f, -L, L) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(integral_between(f, 0.0, 2.5) == doctest::Approx(std::sin(k * 2.5) / k).epsilon(1e-9));
}

TEST_CASE("fourth-order antiderivative is exact on cubics") {
    const GridSpec g(2.0, 32, Topology::clamped);
    const Field f = Field::sample(g, [](double x) { return x * x * x - 2.0 * x + 1.0; });
    const Antiderivative F(f);
    auto exact = [](double x) { return x * x * x * x / 4.0 - x * x + x; };
    for (double x : {-2.0, -1.234, 0.0, 0.77, 1.8}) CHECK(F(x) - F(-2.0) == doctest::Approx(exact(x) - exact(-2.0)));
}

TEST_CASE("interpolation wraps on periodic grids and holds on clamped ones") {
    const GridSpec g(1.0, 8);
    const Field f = Field::sample(g, [](double x) { return x; });
    CHECK(interpolate(f, -0.5) == doctest::Approx(-0.5));
    CHECK(interpolate(f, 2.0 - 0.5) == doctest::Approx(-0.5));
    const Field c = f.with_topology(Topology::clamped);
    CHECK(interpolate(c, 0.95) == doctest::Approx(f[7]));
    CHECK_THROWS_AS(interpolate(c, 1.5), DomainError);
}

TEST_CASE("monotone inversion of x^3 + x") {
    const GridSpec g(3.0, 4096, Topology::clamped);
    const MonotoneField F(Field::sample(g, [](double x) { return x * x * x + x; }));
    CHECK(invert_monotone(F, 10.0) == doctest::Approx(2.0).epsilon(1e-5));
    CHECK(invert_monotone(F, 0.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    CHECK_THROWS_AS(invert_monotone(F, 100.0), OutOfRange);
}

TEST_CASE("quasi-periodic inversion extends beyond one period") {
    const GridSpec g(1.0, 64);
    const MonotoneField F(Field::sample(g, [](double x) { return x; }));
    CHECK(invert_quasi_periodic(F, 2.0, 0.25) == doctest::Approx(0.25));
    CHECK(invert_quasi_periodic(F, 2.0, 2.25) == doctest::Approx(2.25));
    CHECK(invert_quasi_periodic(F, 2.0, -3.5) == doctest::Approx(-3.5));
}

TEST_CASE("L1 distance with and without a window") {
    const GridSpec g(1.0, 100);
    const Field a = Field::constant(g, 1.0), b = Field::constant(g, 3.0);
    CHECK(l1_distance(a, b) == doctest::Approx(4.0));
    CHECK(l1_distance(a, b, Window{0.0, 1.0}) == doctest::Approx(2.0).epsilon(0.03));
    CHECK_THROWS_AS(l1_distance(a, b, Window{-2.0, 0.0}), DomainError);
}

TEST_CASE("csv round trip") {
    const GridSpec g(1.0, 16);
    const Field f = Field::sample(g, [](double x) { return std::exp(x); });
    std::stringstream ss;
    write_csv(ss, f);
    CHECK(ss.str().rfind("x,value\n", 0) == 0);
    const Field back = read_csv(ss, g);
    for (std::size_t j = 0; j < 16; ++j) CHECK(back[j] == f[j]);
}
