#include <cmath>

#include "common.hpp"
#include "shocklab/errors.hpp"
#include "shocklab/lab/parallel.hpp"
#include "shocklab/measures.hpp"
#include "shocklab/shock.hpp"

namespace shocklab::lab {

namespace {

constexpr const char* kExperiment = "stationarity";
// Forcing streams for the post-sampling evolution are kept apart from the
// burn-in streams by the top bit of the realization index.
constexpr std::uint32_t kEvolveStream = 0x80000000u;

struct Member {
    std::optional<EnsembleMember> m;
    std::string error;
};

} // namespace

CommandOutcome cmd_stationarity(const Config& c, const RunContext& ctx) {
    CommandOutcome out{Report(c.hash()), Json::object()};
    const auto rc = realization_config(c);
    const auto M_signed = c.integer("ensemble.M");
    if (M_signed < 30) throw ConfigError("ensemble.M must be at least 30");
    const auto M = static_cast<std::size_t>(M_signed);
    const double burn_in = c.num("ensemble.burn_in");
    const double delta_t = c.num("ensemble.delta_t");
    if (burn_in < 0.0 || !(delta_t > 0.0)) throw ConfigError("ensemble.burn_in >= 0 and ensemble.delta_t > 0 required");
    const double b = rc.b0, gamma = rc.gamma;
    const GridSpec grid = detail::periodic_grid(rc);
    const Mollifier moll(rc.kernel, rc.kernel_width, grid);

    SimulationOptions base;
    base.scheme = rc.scheme;
    base.anchor = b;

    // Burn-in of 2M independent pairs from constants: [0, M) feed the
    // initial ensemble, [M, 2M) the evolved one.
    std::vector<Member> burned(2 * M);
    parallel_for(2 * M, ctx.workers, [&](std::size_t i) {
        try {
            Simulation sim(Field::constant(grid, rc.aB), Field::constant(grid, rc.aT),
                           ForcingSampler(moll, rc.amplitude, ctx.seed, static_cast<std::uint32_t>(i)), base);
            if (burn_in > 0.0) sim.advance_to(burn_in);
            burned[i].m = EnsembleMember{i, sim.uB(), sim.uT(), std::nullopt, b, 1.0};
        } catch (const StepAborted& e) {
            burned[i].error = e.what();
        }
    });

    // Evolved ensemble: size-biased shift, attach S_{b,gamma}, run delta_t
    // with a level-set tracker, shift back to b.
    std::vector<Member> evolved(M);
    parallel_for(M, ctx.workers, [&](std::size_t k) {
        const std::size_t i = M + k;
        if (!burned[i].m) return;
        try {
            auto s = shift_sample(*burned[i].m, b, detail::uniform01(ctx.seed, 1, i));
            const Field u0 = shock_profile(s.uB, s.uT, b, gamma);
            Simulation sim(s.uB, s.uT,
                           ForcingSampler(moll, rc.amplitude, ctx.seed, static_cast<std::uint32_t>(i) | kEvolveStream),
                           base);
            sim.add_shock(u0);
            sim.add_tracker(TrackerKind::levelset, 0.0);
            sim.advance_to(delta_t);
            const double bt = sim.position(0);
            EnsembleMember m{i, sim.uB(), sim.uT(), sim.shock(0), bt, 1.0};
            evolved[k].m = shift_member(m, shift_cells(grid, bt, b));
        } catch (const StepAborted& e) {
            evolved[k].error = e.what();
        }
    });

    std::vector<EnsembleMember> t0, t1, control, untilted;
    for (std::size_t i = 0; i < M; ++i) {
        if (!burned[i].m) continue;
        const auto& m = *burned[i].m;
        untilted.push_back(m);
        auto s = shift_sample(m, b, detail::uniform01(ctx.seed, 1, i));
        s.u = shock_profile(s.uB, s.uT, b, gamma);
        t0.push_back(std::move(s));
        EnsembleMember plain = m;
        plain.u = shock_profile(m.uB, m.uT, b, gamma);
        control.push_back(std::move(plain));
    }
    for (const auto& e : evolved)
        if (e.m) t1.push_back(*e.m);

    for (std::size_t i = 0; i < 2 * M; ++i)
        if (!burned[i].error.empty())
            out.report.add(kExperiment, i, burn_in, Json{{"check", "burn_in_aborted"}, {"error", burned[i].error}});
    for (std::size_t k = 0; k < M; ++k)
        if (!evolved[k].error.empty())
            out.report.add(kExperiment, M + k, delta_t, Json{{"check", "evolution_aborted"}, {"error", evolved[k].error}});

    const double survival = static_cast<double>(std::min(t0.size(), t1.size())) / static_cast<double>(M);
    out.report.check(kExperiment, "survival_fraction", 0, 0.0, survival, 0.8, survival >= 0.8, true);
    out.summary["survivors_t0"] = t0.size();
    out.summary["survivors_t1"] = t1.size();
    if (survival < 0.8 || t0.size() < 30 || t1.size() < 30) return out;

    // Tilt weights of the untilted ensemble average to one.
    {
        TiltSpec tilt{b, TiltNormalization::ergodic_constant, rc.aT - rc.aB};
        std::vector<WeightedSample> ws;
        for (const auto& m : untilted) ws.push_back({m.seed_id, tilt_weight(m, tilt), 1.0});
        const auto est = weighted_mean(std::move(ws));
        const double z = est.stderr_ > 0.0 ? (est.value - 1.0) / est.stderr_ : (est.value == 1.0 ? 0.0 : INFINITY);
        out.report.check(kExperiment, "mean_tilt_weight", 0, 0.0, z, 3.0, std::abs(z) <= 3.0, true,
                         Json{{"mean", est.value}, {"stderr", est.stderr_}});
        out.summary["mean_tilt_weight"] = est.value;
        out.summary["mean_tilt_weight_z"] = z;
    }

    StationarityOptions opts;
    opts.z_crit = c.num("stationarity.z_crit");
    opts.floor = c.num("stationarity.floor");
    const auto observables = builtin_observables(b, gamma);
    const auto rep = stationarity_report(t0, t1, observables, opts);
    for (const auto& e : rep.entries)
        out.report.add(kExperiment, 0, delta_t,
                       Json{{"name", e.name}, {"est_t0", e.est_t0}, {"se_t0", e.se_t0}, {"est_t1", e.est_t1},
                            {"se_t1", e.se_t1}, {"z", e.z}, {"pass", e.pass}});
    const double need = c.num("stationarity.pass_fraction");
    out.report.check(kExperiment, "pass_fraction", 0, delta_t, rep.pass_fraction, need, rep.pass_fraction >= need,
                     true, Json{{"passed", rep.passed()}, {"observables", rep.entries.size()}});
    out.summary["pass_fraction"] = rep.pass_fraction;

    if (c.flag("stationarity.control")) {
        // Without the size bias the gap at the anchor is too small on average.
        const auto gap = find_observable(observables, "gap_at_anchor");
        const auto ctl = stationarity_report(control, t1, {gap}, opts);
        const auto& e = ctl.entries.front();
        out.report.check(kExperiment, "untilted_control_rejected", 0, delta_t, e.z, opts.z_crit, !e.pass, true,
                         Json{{"name", e.name}, {"est_t0", e.est_t0}, {"se_t0", e.se_t0}, {"est_t1", e.est_t1},
                              {"se_t1", e.se_t1}});
        out.summary["control_z"] = e.z;
    }
    return out;
}

} // namespace shocklab::lab
