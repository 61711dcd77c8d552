#include <cmath>
#include <mutex>

#include "common.hpp"
#include "shocklab/errors.hpp"
#include "shocklab/lab/parallel.hpp"

namespace shocklab::lab {

namespace {

constexpr const char* kExperiment = "simulate";

double final_l1(const std::vector<DiagnosticRecord>& recs) {
    const auto& m = recs.back().metrics;
    const auto it = m.find("l1_to_explicit");
    return it == m.end() ? INFINITY : it->second;
}

} // namespace

CommandOutcome cmd_simulate(const Config& c, const RunContext& ctx) {
    CommandOutcome out{Report(c.hash()), Json::object()};
    const auto rc = realization_config(c);
    const auto seeds = c.integer("simulate.seeds");
    if (seeds < 1) throw ConfigError("simulate.seeds must be at least 1");
    const double l1_tol = c.num("simulate.l1_tol");
    const bool refine = c.flag("simulate.refine");
    const double shrink = c.num("simulate.shrink");
    const double dx = 2.0 * rc.L / static_cast<double>(rc.n);

    const auto count = static_cast<std::size_t>(seeds);
    std::vector<std::vector<DiagnosticRecord>> coarse(count), fine(count);
    std::vector<std::string> errors(count);
    parallel_for(count, ctx.workers, [&](std::size_t i) {
        RealizationConfig r = rc;
        r.realization = static_cast<std::uint32_t>(i);
        try {
            coarse[i] = run_realization(r, ctx.seed, detail::snapshot_sink(ctx, kExperiment, i));
            if (refine) {
                r.n *= 2;
                r.scheme.dt_max /= 4.0;
                fine[i] = run_realization(r, ctx.seed);
            }
        } catch (const StepAborted& e) {
            errors[i] = e.what();
        }
    });

    double sum_coarse = 0.0, sum_fine = 0.0;
    std::size_t completed = 0;
    for (std::size_t i = 0; i < count; ++i) {
        if (!errors[i].empty()) {
            out.report.check(kExperiment, "step_aborted", i, 0.0, 1.0, 0.0, false, true, Json{{"error", errors[i]}});
            continue;
        }
        ++completed;
        for (const auto& rec : coarse[i]) {
            Json payload(rec.metrics);
            out.report.add(kExperiment, i, rec.t, payload);
            const auto& m = rec.metrics;
            if (auto it = m.find("tracker_spread"); it != m.end() && rc.trackers.size() > 1)
                out.report.check(kExperiment, "tracker_agreement", i, rec.t, it->second, 2.0 * dx,
                                 it->second <= 2.0 * dx, true);
            const double drift = m.at("max_step_mass_drift");
            out.report.check(kExperiment, "mass_conservation", i, rec.t, drift, 1e-10, drift <= 1e-10, true);
        }
        const double e = final_l1(coarse[i]);
        out.report.check(kExperiment, "final_l1_to_explicit", i, rc.horizon, e, l1_tol, e <= l1_tol, true);
        sum_coarse += e;
        if (refine) {
            const double ef = final_l1(fine[i]);
            sum_fine += ef;
            out.report.add(kExperiment, i, rc.horizon,
                           Json{{"check", "refined_l1_to_explicit"}, {"n", 2 * rc.n}, {"l1_to_explicit", ef}});
        }
    }
    out.summary["seeds"] = count;
    out.summary["completed"] = completed;
    if (completed > 0) out.summary["mean_final_l1"] = sum_coarse / static_cast<double>(completed);
    if (refine && completed > 0) {
        // Noise paths differ between grids, so the shrink factor is taken on
        // the seed-averaged error rather than path by path.
        const double ratio = sum_fine > 0.0 ? sum_coarse / sum_fine : INFINITY;
        out.report.check(kExperiment, "refinement_shrink", 0, rc.horizon, ratio, shrink, ratio >= shrink, true,
                         Json{{"mean_coarse", sum_coarse / completed}, {"mean_fine", sum_fine / completed}});
        out.summary["refinement_ratio"] = ratio;
    }
    return out;
}

} // namespace shocklab::lab
