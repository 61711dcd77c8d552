#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "shocklab/measures.hpp"
#include "shocklab/shock.hpp"
#include "shocklab/simulation.hpp"

using namespace shocklab;

namespace {
const GridSpec grid(20.0, 256);

EnsembleMember member(std::uint64_t id, double bump) {
    // u_T carries a local bump so the gap at 0 varies between members.
    Field uB = Field::constant(grid, -1.0);
    Field uT = Field::sample(grid, [&](double x) { return 1.0 + bump * std::exp(-x * x); });
    EnsembleMember m{id, uB, uT, std::nullopt, 0.0, 1.0};
    m.u = shock_profile(uB, uT, 0.0, 0.0);
    return m;
}
} // namespace

TEST_CASE("gap mean and tilt weight") {
    const auto m = member(0, 0.5);
    CHECK(gap_mean(m.uB, m.uT) == doctest::Approx(2.0 + 0.5 * std::sqrt(M_PI) / 40.0).epsilon(1e-6));
    CHECK(tilt_weight(m, TiltSpec{0.0, TiltNormalization::ergodic_constant, 2.0}) == doctest::Approx(1.25));
    CHECK(tilt_weight(m, TiltSpec{0.0, TiltNormalization::per_member_mean, 2.0}) ==
          doctest::Approx(2.5 / gap_mean(m.uB, m.uT)));
}

TEST_CASE("weighted mean with jackknife error") {
    const auto e = weighted_mean({{0, 1.0, 1.0}, {1, 3.0, 1.0}});
    CHECK(e.value == doctest::Approx(2.0));
    CHECK(e.stderr_ == doctest::Approx(1.0));
    const auto w = weighted_mean({{0, 1.0, 3.0}, {1, 5.0, 1.0}});
    CHECK(w.value == doctest::Approx(2.0));
    CHECK_THROWS_AS(weighted_mean({{0, 1.0, 0.0}, {1, 2.0, 0.0}}), DegenerateEnsemble);
    CHECK_THROWS_AS(weighted_mean({{0, 1.0, -1.0}, {1, 2.0, 1.0}}), DegenerateEnsemble);
}

TEST_CASE("estimates do not depend on member order") {
    std::vector<WeightedSample> s;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0.1, 2.0);
    for (std::uint64_t i = 0; i < 100; ++i) s.push_back({i, U(rng), U(rng)});
    const auto a = weighted_mean(s);
    std::shuffle(s.begin(), s.end(), rng);
    const auto b = weighted_mean(s);
    CHECK(a.value == b.value);
    CHECK(a.stderr_ == b.stderr_);
}

TEST_CASE("built-in observables") {
    const auto obs = builtin_observables(0.0, 0.0);
    CHECK(obs.size() == 20);
    const auto m = member(0, 0.5);
    CHECK(find_observable(obs, "gap_at_anchor").fn(m) == doctest::Approx(2.5));
    CHECK(find_observable(obs, "shock_L1_to_explicit").fn(m) == doctest::Approx(0.0).scale(1.0));
    CHECK(find_observable(obs, "u_at(0)").fn(m) == doctest::Approx(m.u->operator[](128)));
    CHECK_THROWS_AS(find_observable(obs, "nope"), ConfigError);
}

TEST_CASE("shifts") {
    CHECK(shift_cells(grid, 1.0, 0.0) == std::llround(1.0 / grid.dx()));
    const auto m = member(1, 0.5);
    const auto s = shift_member(m, 5);
    CHECK(s.b_track == doctest::Approx(-5 * grid.dx()));
    CHECK(s.uT[0] == m.uT[5]);
    CHECK(s.u->operator[](0) == m.u->operator[](5));
    // The size-biased shift of a constant pair only moves it by whole cells.
    EnsembleMember c{2, Field::constant(grid, -1.0), Field::constant(grid, 1.0), std::nullopt, 0.0, 3.0};
    const auto t = shift_sample(c, 0.0, 0.37);
    CHECK(t.weight == 1.0);
    CHECK(t.uT[10] == 1.0);
    CHECK(t.b_track == 0.0);
}

TEST_CASE("size-biased shift favours large gaps") {
    // A localized bump in u_T takes a share of the Z increment larger than
    // its share of the period; uniform draws land on it accordingly.
    const auto m = member(0, 4.0);
    int hits = 0;
    const int N = 400;
    for (int i = 0; i < N; ++i) {
        const auto s = shift_sample(m, 0.0, (i + 0.5) / N);
        if (s.uT[128] - s.uB[128] > 3.0) ++hits;
    }
    const double share_len = 2.0 * 0.83 / 40.0;  // |x| < 0.83 has gap > 3
    CHECK(hits > 2 * share_len * N);
}

TEST_CASE("stationarity report") {
    std::vector<EnsembleMember> a, b;
    for (std::uint64_t i = 0; i < 40; ++i) {
        a.push_back(member(i, 0.1 * static_cast<double>(i % 7)));
        b.push_back(member(i, 0.1 * static_cast<double>(i % 7)));
    }
    const auto obs = builtin_observables(0.0, 0.0);
    const auto rep = stationarity_report(a, b, obs);
    CHECK(rep.pass_fraction == 1.0);
    for (const auto& e : rep.entries) CHECK(e.z == 0.0);
    std::vector<EnsembleMember> shifted;
    for (std::uint64_t i = 0; i < 40; ++i) shifted.push_back(member(i, 1.0 + 0.1 * static_cast<double>(i % 7)));
    const auto bad = stationarity_report(a, shifted, {find_observable(obs, "gap_at_anchor")});
    CHECK_FALSE(bad.entries.front().pass);
    CHECK_THROWS_AS(stationarity_report(std::span(a).first(10), b, obs), DomainError);
}
