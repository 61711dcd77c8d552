#include <doctest.h>

#include <atomic>
#include <cmath>
#include <sstream>

#include "shocklab/lab/commands.hpp"
#include "shocklab/lab/parallel.hpp"

using namespace shocklab;
using namespace shocklab::lab;

TEST_CASE("config defaults, yaml and overrides") {
    Config c;
    CHECK(c.integer("domain.n") == 1024);
    CHECK(c.num("noise.amplitude") == 0.5);
    CHECK(c.str_list("tracker.method") == std::vector<std::string>{"ode", "levelset", "weakform"});
    auto y = Config::from_yaml("domain:\n  n: 512\nverify:\n  gammas: [1, 2.5]\nsimulate:\n  refine: yes\n");
    CHECK(y.integer("domain.n") == 512);
    CHECK(y.num_list("verify.gammas") == std::vector<double>{1.0, 2.5});
    CHECK(y.flag("simulate.refine"));
    CHECK(y.explicitly_set("domain.n"));
    CHECK_FALSE(y.explicitly_set("domain.L"));
    y.set_assignment("shock.gamma = 0.25");
    CHECK(y.num("shock.gamma") == 0.25);
    CHECK_THROWS_AS(y.set("domain.size", "3"), ConfigError);
    CHECK_THROWS_AS(y.set_assignment("domain.n"), ConfigError);
    CHECK_THROWS_AS(Config::from_yaml("domain: [1, 2"), ConfigError);
    y.set("domain.L", "abc");
    CHECK_THROWS_AS(y.num("domain.L"), ConfigError);
}

TEST_CASE("config hash tracks the effective values") {
    Config a, b;
    CHECK(a.hash() == b.hash());
    CHECK(a.hash().size() == 16);
    b.set("domain.n", "1024");  // same as the default
    CHECK(a.hash() == b.hash());
    b.set("domain.n", "512");
    CHECK(a.hash() != b.hash());
}

TEST_CASE("realization config validation") {
    Config c;
    c.set("shock.a_B", "2");
    CHECK_THROWS_AS(realization_config(c), ConfigError);
    Config d;
    d.set("noise.kind", "cauchy");
    CHECK_THROWS_AS(realization_config(d), ConfigError);
    Config e;
    e.set("noise.kind", "bump");
    e.set("noise.radius", "1.5");
    CHECK(realization_config(e).kernel_width == 1.5);
}

TEST_CASE("report sorts by experiment, seed and time") {
    Report r("abc");
    r.add("b", 0, 0.0, Json{{"k", 1}});
    r.add("a", 2, 1.0, Json{{"k", 2}});
    r.add("a", 1, 3.0, Json{{"k", 3}});
    r.add("a", 1, 2.0, Json{{"k", 4}});
    r.add("a", 1, 2.0, Json{{"k", 5}});
    r.add("a", 1, 2.0, Json{{"k", NAN}});
    std::vector<int> order;
    for (const auto& j : r.sorted())
        order.push_back(j["k"].is_string() ? -1 : j["k"].get<int>());
    CHECK(order == std::vector<int>{4, 5, -1, 3, 2, 1});
    std::ostringstream os;
    r.write(os);
    CHECK(os.str().find("\"config_hash\":\"abc\"") != std::string::npos);
    CHECK_FALSE(r.hard_failure());
    r.check("a", "x", 0, 0.0, 2.0, 1.0, false, false);
    CHECK_FALSE(r.hard_failure());
    r.check("a", "y", 0, 0.0, 2.0, 1.0, false, true);
    CHECK(r.hard_failure());
}

TEST_CASE("parallel_for visits each index once and rethrows") {
    std::vector<std::atomic<int>> hits(100);
    parallel_for(100, 4, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
    CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) { if (i == 7) throw DomainError("x"); }), DomainError);
    CHECK(default_workers() >= 1);
}

TEST_CASE("verify on a coarse grid reports instead of failing") {
    Config c;
    c.set("domain.n", "64");
    Report r(c.hash());
    Json summary;
    verify_identities(c, r, summary);
    CHECK_FALSE(r.hard_failure());
    CHECK(summary["identity_checks_hard"] == false);
}

TEST_CASE("verify at default resolution: tail value at gamma = 0") {
    Config c;
    c.set("domain.n", "2048");
    Report r(c.hash());
    Json summary;
    verify_identities(c, r, summary);
    CHECK_FALSE(r.hard_failure());
    bool found = false;
    for (const auto& j : r.records())
        if (j.value("check", "") == "left_tail" && j["gamma"] == 0.0 && j["pair"] == "constant") {
            CHECK(j["left_tail"].get<double>() == doctest::Approx(-0.693147).epsilon(1e-6));
            found = true;
        }
    CHECK(found);
}

TEST_CASE("commands are deterministic in config and seed") {
    Config c;
    c.set("domain.n", "512");
    c.set("time.horizon", "1");
    c.set("ensemble.seeds", "2");
    RunContext ctx;
    ctx.seed = 4;
    ctx.workers = 2;
    std::ostringstream a, b;
    cmd_stability(c, ctx).report.write(a);
    ctx.workers = 1;
    cmd_stability(c, ctx).report.write(b);
    CHECK(a.str() == b.str());
}

TEST_CASE("stability rejects data outside the sandwich") {
    Config c;
    c.set("domain.n", "512");
    c.set("stability.gamma_L", "1");
    c.set("stability.gamma_R", "-1");
    CHECK_THROWS_AS(cmd_stability(c, RunContext{}), ConfigError);
}
