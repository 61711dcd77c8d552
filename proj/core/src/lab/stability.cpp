#include <algorithm>
#include <cmath>

#include "common.hpp"
#include "shocklab/errors.hpp"
#include "shocklab/lab/parallel.hpp"
#include "shocklab/shock.hpp"

namespace shocklab::lab {

namespace {

constexpr const char* kExperiment = "stability";

struct InitialCondition {
    std::string name;
    Field u;
};

// Admissible data between S_{0,gamma_L} and S_{0,gamma_R} on the constant
// pair: two clamped steps (the upper bound left of c, the lower one right
// of it) and a smooth mixture of the bounds.
std::vector<InitialCondition> initial_conditions(const Field& lower, const Field& upper,
                                                 const std::vector<double>& centers) {
    const auto& g = lower.grid();
    std::vector<InitialCondition> out;
    for (double c : centers) {
        std::vector<double> v(g.size());
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = g.node(j) < c ? upper[j] : lower[j];
        out.push_back({"clamped_step_" + std::to_string(c).substr(0, 4), Field(g, std::move(v))});
    }
    std::vector<double> v(g.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double th = 0.5 * (1.0 + std::sin(2.0 * g.node(j)));
        v[j] = std::clamp(th * upper[j] + (1.0 - th) * lower[j], lower[j], upper[j]);
    }
    out.push_back({"mixture", Field(g, std::move(v))});
    return out;
}

struct SeedResult {
    std::vector<std::vector<double>> distance;  // [ic][output]
    std::vector<std::vector<double>> position;
    std::vector<double> mutual_l1;              // ic 0 vs 1 at each output
    std::vector<double> mutual_gamma_gap;
    std::string error;
};

} // namespace

CommandOutcome cmd_stability(const Config& c, const RunContext& ctx) {
    CommandOutcome out{Report(c.hash()), Json::object()};
    const auto rc = realization_config(c);
    const double gL = c.num("stability.gamma_L"), gR = c.num("stability.gamma_R");
    if (!(gL < gR)) throw ConfigError("stability.gamma_L < stability.gamma_R is required");
    const double rise_tol = c.num("stability.rise_tolerance");
    const double terminal_ratio = c.num("stability.terminal_ratio");
    const auto seeds = static_cast<std::size_t>(std::max<std::int64_t>(1, c.integer("ensemble.seeds")));
    const auto times = detail::output_times(rc.horizon, rc.output_every);
    const GridSpec grid = detail::periodic_grid(rc);
    const Mollifier moll(rc.kernel, rc.kernel_width, grid);

    const Field aB = Field::constant(grid, rc.aB), aT = Field::constant(grid, rc.aT);
    const Field lower = shock_profile(aB, aT, 0.0, gL), upper = shock_profile(aB, aT, 0.0, gR);
    const auto ics = initial_conditions(lower, upper, c.num_list("stability.step_centers"));
    for (const auto& ic : ics)
        for (std::size_t j = 0; j < grid.size(); ++j)
            if (ic.u[j] < lower[j] || ic.u[j] > upper[j])
                throw DomainError("initial condition " + ic.name + " leaves the sandwich at x = " +
                                  std::to_string(grid.node(j)));

    // Centers with label zero and the matching levels of Z-bar_0.
    const auto z0 = zbar(aB, aT, 0.0);
    std::vector<double> centers, zetas;
    for (const auto& ic : ics) {
        centers.push_back(center_of(aB, aT, ic.u, 0.0));
        zetas.push_back(interpolate(z0.field(), centers.back()));
        out.report.add(kExperiment, 0, 0.0,
                       Json{{"initial_condition", ic.name}, {"center", centers.back()}, {"zeta", zetas.back()}});
    }

    SimulationOptions opts;
    opts.scheme = rc.scheme;
    opts.anchor = 0.0;
    std::vector<SeedResult> results(seeds);
    parallel_for(seeds, ctx.workers, [&](std::size_t s) {
        auto& r = results[s];
        r.distance.assign(ics.size(), {});
        r.position.assign(ics.size(), {});
        try {
            Simulation sim(aB, aT, ForcingSampler(moll, rc.amplitude, ctx.seed, static_cast<std::uint32_t>(s)), opts);
            for (std::size_t i = 0; i < ics.size(); ++i) {
                sim.add_shock(ics[i].u);
                sim.add_tracker(TrackerKind::levelset, zetas[i]);
            }
            auto sample = [&] {
                for (std::size_t i = 0; i < ics.size(); ++i) {
                    const double bt = sim.position(i);
                    const Field u = sim.shock(i).with_topology(Topology::periodic);
                    r.distance[i].push_back(l1_distance(u, shock_profile(sim.uB(), sim.uT(), bt, 0.0)));
                    r.position[i].push_back(bt);
                }
                if (ics.size() >= 2) {
                    const Field u0 = sim.shock(0).with_topology(Topology::periodic);
                    const Field u1 = sim.shock(1).with_topology(Topology::periodic);
                    r.mutual_l1.push_back(l1_distance(u0, u1));
                    const double anchor = r.position[0].back();
                    double gap = NAN;
                    try {
                        gap = std::abs(gamma_of(sim.uB(), sim.uT(), u0, anchor) -
                                       gamma_of(sim.uB(), sim.uT(), u1, anchor));
                    } catch (const NotAShock&) {
                    }
                    r.mutual_gamma_gap.push_back(gap);
                }
            };
            sample();
            for (double t : times) {
                sim.advance_to(t);
                sample();
            }
        } catch (const Error& e) {
            r.error = e.what();
        }
    });

    std::size_t failures = 0;
    double worst_rise = -INFINITY, worst_terminal = 0.0;
    for (std::size_t s = 0; s < seeds; ++s) {
        const auto& r = results[s];
        if (!r.error.empty()) {
            out.report.check(kExperiment, "run_aborted", s, 0.0, 1.0, 0.0, false, true, Json{{"error", r.error}});
            ++failures;
            continue;
        }
        for (std::size_t i = 0; i < ics.size(); ++i) {
            const auto& d = r.distance[i];
            double rise = -INFINITY;
            for (std::size_t k = 0; k < d.size(); ++k) {
                const double t = k == 0 ? 0.0 : times[k - 1];
                Json rec{{"initial_condition", ics[i].name}, {"l1_to_shock", d[k]}, {"b", r.position[i][k]}};
                if (i == 0 && !r.mutual_l1.empty()) {
                    rec["mutual_l1"] = r.mutual_l1[k];
                    rec["mutual_gamma_gap"] = r.mutual_gamma_gap[k];
                }
                out.report.add(kExperiment, s, t, rec);
                if (k > 0) rise = std::max(rise, (d[k] - d[k - 1]) / (t - (k == 1 ? 0.0 : times[k - 2])));
            }
            const bool rise_ok = rise <= rise_tol;
            out.report.check(kExperiment, "l1_non_increasing", s, rc.horizon, rise, rise_tol, rise_ok, true,
                             Json{{"initial_condition", ics[i].name}});
            const double ratio = d.back() / d.front();
            const bool term_ok = ratio <= terminal_ratio;
            out.report.check(kExperiment, "terminal_ratio", s, rc.horizon, ratio, terminal_ratio, term_ok, true,
                             Json{{"initial_condition", ics[i].name}, {"initial", d.front()}, {"terminal", d.back()}});
            if (!rise_ok || !term_ok) ++failures;
            worst_rise = std::max(worst_rise, rise);
            worst_terminal = std::max(worst_terminal, ratio);
        }
    }
    out.summary["seeds"] = seeds;
    out.summary["failures"] = failures;
    out.summary["worst_rise"] = worst_rise;
    out.summary["worst_terminal_ratio"] = worst_terminal;
    return out;
}

} // namespace shocklab::lab
