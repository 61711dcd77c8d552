// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Uses the shipped configs/ at full size.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "shocklab/dynamics.hpp"
#include "shocklab/lab/commands.hpp"
#include "shocklab/lab/parallel.hpp"
#include "shocklab/noise.hpp"

using namespace shocklab;
using namespace shocklab::lab;

namespace {

struct Result {
    bool pass;
    std::string detail;
};

Config load(const std::string& name) { return Config::from_file(std::string(SHOCKLAB_CONFIG_DIR) + "/" + name + ".yaml"); }

RunContext context(const Config& c) { return make_context(c, std::nullopt, default_workers()); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// All records carrying the named check.
std::vector<Json> checks(const Report& r, const std::string& name) {
    std::vector<Json> out;
    for (const auto& j : r.records())
        if (j.value("check", "") == name) out.push_back(j);
    return out;
}

bool all_pass(const std::vector<Json>& v) {
    if (v.empty()) return false;
    for (const auto& j : v)
        if (!j.value("pass", false)) return false;
    return true;
}

double max_value(const std::vector<Json>& v) {
    double m = -INFINITY;
    for (const auto& j : v)
        if (j["value"].is_number()) m = std::max(m, j["value"].get<double>());
    return m;
}

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

struct Shared {
    Report verify{""};
    double identity_seconds = 0, order_seconds = 0;
    Json verify_summary;
    std::optional<CommandOutcome> simulate;
    double simulate_seconds = 0;
    std::optional<CommandOutcome> stationarity;
    double stationarity_seconds = 0;
};

Shared shared;

void run_verify() {
    const auto c = load("verify");
    shared.verify = Report(c.hash());
    auto t0 = std::chrono::steady_clock::now();
    verify_identities(c, shared.verify, shared.verify_summary);
    shared.identity_seconds = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    verify_order_study(c, shared.verify, shared.verify_summary);
    shared.order_seconds = seconds_since(t0);
}

Result exact_identities() {
    run_verify();
    std::vector<Json> all;
    for (const char* k : {"l1_equals_gamma_gap", "left_tail", "right_tail"})
        for (auto& j : checks(shared.verify, k)) all.push_back(j);
    double worst = 0;
    for (const auto& j : all) worst = std::max(worst, std::abs(j["value"].get<double>()));
    const bool ok = all_pass(all) && shared.identity_seconds < 1.0;
    return {ok, fmt("%zu checks, max error %.2e (tol 1e-6), %.3f s", all.size(), worst, shared.identity_seconds)};
}

Result deterministic_reduction() {
    const auto tanh = checks(shared.verify, "tanh_reduction");
    const auto order = checks(shared.verify, "convergence_order");
    const double secs = shared.identity_seconds + shared.order_seconds;
    const bool ok = all_pass(tanh) && all_pass(order) && secs < 60.0;
    return {ok, fmt("tanh max error %.2e, order %.3f over n = 256/512/1024, %.2f s", max_value(tanh),
                    order.empty() ? NAN : order.front()["value"].get<double>(), secs)};
}

Result flux_identity() {
    const auto fg = checks(shared.verify, "flux_gap");
    const auto U = checks(shared.verify, "U_exact_profile");
    const auto rt = checks(shared.verify, "coords_round_trip");
    const bool ok = all_pass(fg) && all_pass(U) && all_pass(rt);
    return {ok, fmt("max flux gap %.2e, max |U + tanh| %.2e, round trip %.2e", max_value(fg), max_value(U),
                    max_value(rt))};
}

void run_simulate() {
    const auto c = load("simulate");
    const auto t0 = std::chrono::steady_clock::now();
    shared.simulate = cmd_simulate(c, context(c));
    shared.simulate_seconds = seconds_since(t0);
}

Result semi_explicit_shock() {
    run_simulate();
    const auto& r = shared.simulate->report;
    const auto l1 = checks(r, "final_l1_to_explicit");
    const auto shrink = checks(r, "refinement_shrink");
    const bool ok = l1.size() == 10 && all_pass(l1) && all_pass(shrink) && checks(r, "step_aborted").empty() &&
                    shared.simulate_seconds < 600.0;
    return {ok, fmt("10 seeds, max final L1 %.2e (tol 1e-2), shrink %.2f (need 1.5), %.1f s", max_value(l1),
                    shrink.empty() ? NAN : shrink.front()["value"].get<double>(), shared.simulate_seconds)};
}

Result tracker_equivalence() {
    const auto& r = shared.simulate->report;
    const auto agree = checks(r, "tracker_agreement");
    const double dx = 40.0 / 1024.0;
    return {all_pass(agree) && agree.size() >= 10 * 11,
            fmt("%zu output times, max spread %.3f dx (limit 2 dx)", agree.size(), max_value(agree) / dx)};
}

Result structural_invariants() {
    const GridSpec grid(20.0, 512);
    const Mollifier m(KernelKind::gaussian, 0.5, grid);
    const SchemeConfig cfg;
    double worst_drift = 0.0, worst_growth = -INFINITY;
    bool ordered = true;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        // Random smooth data: u below v everywhere, w unrelated.
        const NormalStream ns(seed, 0xabcdu);
        std::vector<double> a(grid.size()), b(grid.size()), c(grid.size());
        ns.fill(0, a.data(), a.size());
        ns.fill(1, b.data(), b.size());
        ns.fill(2, c.data(), c.size());
        auto smooth = [&](const std::vector<double>& x, double off, double amp) {
            const std::size_t n = x.size();
            std::vector<double> y(n);
            for (std::size_t j = 0; j < n; ++j) y[j] = off + amp * (x[(j + n - 1) % n] + 2 * x[j] + x[(j + 1) % n]) / 4;
            return Field(grid, std::move(y));
        };
        Field u = smooth(a, -0.5, 0.3), w = smooth(c, 0.2, 0.4);
        Field v = u + smooth(b, 0.8, 0.2);
        for (std::size_t j = 0; j < v.size(); ++j) ordered = ordered && u[j] <= v[j];
        ForcingSampler s(m, 0.5, seed, 0);
        for (int k = 0; k < 100; ++k) {
            const double umax = std::max({u.max(), -u.min(), v.max(), -v.min(), w.max(), -w.min()});
            const auto inc = s.next(stable_dt(cfg, grid, umax));
            const double mass0 = grid.dx() * (std::accumulate(v.values().begin(), v.values().end(), 0.0) -
                                               std::accumulate(u.values().begin(), u.values().end(), 0.0));
            const double d0 = l1_distance(u, w);
            Field u1 = step_burgers(u, inc, cfg), v1 = step_burgers(v, inc, cfg), w1 = step_burgers(w, inc, cfg);
            const double mass1 = grid.dx() * (std::accumulate(v1.values().begin(), v1.values().end(), 0.0) -
                                               std::accumulate(u1.values().begin(), u1.values().end(), 0.0));
            worst_drift = std::max(worst_drift, std::abs(mass1 - mass0));
            for (std::size_t j = 0; j < u1.size(); ++j) ordered = ordered && u1[j] <= v1[j];
            worst_growth = std::max(worst_growth, l1_distance(u1, w1) - d0);
            u = std::move(u1);
            v = std::move(v1);
            w = std::move(w1);
        }
    }
    const bool ok = worst_drift <= 1e-10 && ordered && worst_growth <= 1e-12;
    return {ok, fmt("100 seeds x 100 steps: mass drift %.1e, comparison %s, max L1 growth %.1e", worst_drift,
                    ordered ? "holds" : "violated", worst_growth)};
}

void run_stationarity() {
    const auto c = load("stationarity");
    const auto t0 = std::chrono::steady_clock::now();
    shared.stationarity = cmd_stationarity(c, context(c));
    shared.stationarity_seconds = seconds_since(t0);
}

Result stationarity() {
    run_stationarity();
    const auto& r = shared.stationarity->report;
    const auto pf = checks(r, "pass_fraction");
    const auto ctl = checks(r, "untilted_control_rejected");
    const bool ok = all_pass(pf) && all_pass(ctl) && shared.stationarity_seconds < 1800.0;
    return {ok, fmt("M = 200: %s of observables pass, untilted control z = %.2f, %.0f s",
                    pf.empty() ? "?" : fmt("%.0f%%", 100 * pf.front()["value"].get<double>()).c_str(),
                    ctl.empty() ? NAN : ctl.front()["value"].get<double>(), shared.stationarity_seconds)};
}

Result mean_tilt_weight() {
    const auto w = checks(shared.stationarity->report, "mean_tilt_weight");
    if (w.empty()) return {false, "no estimate"};
    return {all_pass(w), fmt("mean %.4f +- %.4f, z = %.2f", w.front()["mean"].get<double>(),
                             w.front()["stderr"].get<double>(), w.front()["value"].get<double>())};
}

Result stability() {
    const auto c = load("stability");
    const auto out = cmd_stability(c, context(c));
    const auto rise = checks(out.report, "l1_non_increasing");
    const auto term = checks(out.report, "terminal_ratio");
    const bool ok = rise.size() == 30 && all_pass(rise) && all_pass(term) && !out.hard_failure();
    return {ok, fmt("10 seeds x 3 data: max rise %.1e per unit time (tol 1e-3), max terminal ratio %.3f (limit 0.2)",
                    max_value(rise), max_value(term))};
}

Result colehopf() {
    const auto c = load("colehopf");
    const auto out = cmd_colehopf(c, context(c));
    const auto sh = checks(out.report, "refinement_shrink");
    const bool ok = all_pass(sh) && !out.hard_failure();
    return {ok, fmt("sup discrepancy %.2e -> %.2e, ratio %.2f (need 1.5)", out.summary.value("sup_coarse", NAN),
                    out.summary.value("sup_fine", NAN), out.summary.value("ratio", NAN))};
}

Result forcing_statistics() {
    const GridSpec grid(8.0, 256);
    const double sigma = 0.5, dt = 0.01;
    const Mollifier m(KernelKind::gaussian, sigma, grid);
    ForcingSampler s(m, 1.0, 2024, 0);
    const std::size_t lags[] = {0, 8, 16, 32};  // sigma / dx = 8
    constexpr std::size_t draws = 100000;
    const std::size_t n = grid.size();
    double sum[4] = {}, sum2[4] = {};
    for (std::size_t d = 0; d < draws; ++d) {
        const auto inc = s.next(dt);
        for (int k = 0; k < 4; ++k) {
            double c = 0.0;
            for (std::size_t j = 0; j < n; ++j) c += inc.dVx[j] * inc.dVx[(j + lags[k]) % n];
            c /= static_cast<double>(n) * dt;
            sum[k] += c;
            sum2[k] += c * c;
        }
    }
    bool ok = true;
    std::string detail;
    for (int k = 0; k < 4; ++k) {
        const double mean = sum[k] / draws;
        const double se = std::sqrt((sum2[k] / draws - mean * mean) / (draws - 1));
        const double oracle = covariance_rate(m, static_cast<double>(lags[k]) * grid.dx());
        const double z = (mean - oracle) / se;
        ok = ok && std::abs(z) <= 5.0;
        detail += fmt("%s%.0f sigma: z = %+.2f", k ? ", " : "", static_cast<double>(lags[k]) / 8.0, z);
    }
    return {ok, detail};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Result()>>> criteria{
        {"exact shock identities", exact_identities},
        {"deterministic reduction and convergence order", deterministic_reduction},
        {"exact-profile flux identity", flux_identity},
        {"semi-explicit shock under noise", semi_explicit_shock},
        {"tracker equivalence", tracker_equivalence},
        {"structural invariants", structural_invariants},
        {"stationarity of the tilted measure", stationarity},
        {"mean tilt weight", mean_tilt_weight},
        {"L1 stability of sandwiched data", stability},
        {"Cole-Hopf consistency", colehopf},
        {"forcing statistics", forcing_statistics},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Result r{false, ""};
        try {
            r = criteria[i].second();
        } catch (const std::exception& e) {
            r = {false, std::string("error: ") + e.what()};
        }
        if (!r.pass) ++failed;
        std::printf("%s %2zu %s: %s\n", r.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), r.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
