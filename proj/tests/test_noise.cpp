#include <doctest.h>

#include <cmath>
#include <numbers>

#include "shocklab/noise.hpp"

using namespace shocklab;

namespace {
constexpr double sqrt_pi = 1.7724538509055159;

// Autocovariance rate of d_x V for a Gaussian kernel of width s.
double gaussian_cov(double s, double lag) {
    const double g = std::exp(-lag * lag / (4.0 * s * s)) / (2.0 * s * sqrt_pi);
    return g * (1.0 / (2.0 * s * s) - lag * lag / (4.0 * s * s * s * s));
}
} // namespace

TEST_CASE("gaussian kernel norms") {
    const double s = 0.5;
    const Mollifier m(KernelKind::gaussian, s, GridSpec(20.0, 1024));
    CHECK(m.l2_rho_sq() == doctest::Approx(1.0 / (2.0 * s * sqrt_pi)).epsilon(1e-9));
    CHECK(m.l2_rho_prime_sq() == doctest::Approx(1.0 / (4.0 * s * s * s * sqrt_pi)).epsilon(1e-9));
    double mass = 0.0;
    for (double v : m.rho().values()) mass += v;
    CHECK(mass * m.grid().dx() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bump kernel has unit mass and compact support") {
    const Mollifier m(KernelKind::bump, 1.0, GridSpec(20.0, 1024));
    double mass = 0.0;
    for (double v : m.rho().values()) mass += v;
    CHECK(mass * m.grid().dx() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(m.density(1.0) == 0.0);
    CHECK(m.density(1.2) == 0.0);
    CHECK(m.density(0.0) > 0.0);
    CHECK(m.reach() == 1.0);
}

TEST_CASE("kernel width must resolve on the grid") {
    CHECK_THROWS_AS(Mollifier(KernelKind::gaussian, 0.1, GridSpec(20.0, 256)), DomainError);
    CHECK_THROWS_AS(Mollifier(KernelKind::bump, 25.0, GridSpec(20.0, 256)), DomainError);
}

TEST_CASE("covariance rate against the closed form") {
    const double s = 0.5;
    const Mollifier m(KernelKind::gaussian, s, GridSpec(8.0, 256));
    for (double lag : {0.0, s, 2 * s, 4 * s}) CHECK(covariance_rate(m, lag) == doctest::Approx(gaussian_cov(s, lag)).epsilon(1e-8));
    CHECK(covariance_rate(m, 0.0) == doctest::Approx(m.l2_rho_prime_sq()).epsilon(1e-9));
}

TEST_CASE("forcing increments are reproducible and indexable") {
    const GridSpec g(20.0, 256);
    const Mollifier m(KernelKind::gaussian, 0.8, g);
    ForcingSampler a(m, 0.5, 11, 2), b(m, 0.5, 11, 2);
    const auto i0 = a.next(1e-3);
    const auto i1 = a.next(1e-3);
    const auto j1 = b.at_step(1, 1e-3);
    CHECK(a.step() == 2);
    CHECK(b.step() == 0);
    for (std::size_t k = 0; k < g.size(); ++k) {
        CHECK(i1.dV[k] == j1.dV[k]);
        CHECK(i1.dVx[k] == j1.dVx[k]);
    }
    CHECK(i0.dV[5] != i1.dV[5]);
    CHECK(a.kpz_constant() == doctest::Approx(0.25 * m.l2_rho_sq()));
}

TEST_CASE("derivative increments have zero spatial mean") {
    const GridSpec g(20.0, 512);
    const Mollifier m(KernelKind::gaussian, 0.5, g);
    ForcingSampler s(m, 1.0, 3, 0);
    for (int k = 0; k < 5; ++k) {
        const auto inc = s.next(0.01);
        double sum = 0.0, scale = 0.0;
        for (double v : inc.dVx.values()) {
            sum += v;
            scale += std::abs(v);
        }
        CHECK(std::abs(sum) <= 1e-12 * scale);
    }
}

TEST_CASE("zero amplitude gives zero forcing") {
    const GridSpec g(20.0, 256);
    const Mollifier m(KernelKind::gaussian, 0.8, g);
    ForcingSampler s(m, 0.0, 3, 0);
    const auto inc = s.next(0.1);
    CHECK(inc.dV.max() == 0.0);
    CHECK(inc.dVx.min() == 0.0);
}

TEST_CASE("increment variance scales with dt") {
    const GridSpec g(8.0, 256);
    const double s = 0.5, dt = 0.01;
    const Mollifier m(KernelKind::gaussian, s, g);
    ForcingSampler f(m, 1.0, 5, 0);
    double acc = 0.0;
    const int draws = 2000;
    for (int k = 0; k < draws; ++k) {
        const auto inc = f.next(dt);
        double v = 0.0;
        for (double x : inc.dVx.values()) v += x * x;
        acc += v / static_cast<double>(g.size());
    }
    CHECK(acc / draws / dt == doctest::Approx(gaussian_cov(s, 0.0)).epsilon(0.05));
}
