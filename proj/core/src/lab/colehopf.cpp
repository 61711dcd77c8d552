#include <cmath>

#include "common.hpp"
#include "shocklab/errors.hpp"
#include "shocklab/lab/parallel.hpp"

namespace shocklab::lab {

namespace {

constexpr const char* kExperiment = "colehopf";

// Centred difference of a height with h(x + 2L) = h(x) + P.
std::vector<double> d0_height(const Field& h, double P) {
    const std::size_t n = h.size();
    const double inv = 1.0 / (2.0 * h.grid().dx());
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double left = j == 0 ? h[n - 1] - P : h[j - 1];
        const double right = j + 1 == n ? h[0] + P : h[j + 1];
        out[j] = (right - left) * inv;
    }
    return out;
}

// -D0 phi for phi(x + 2L) = phi(x) e^{-P}, before division by phi.
std::vector<double> minus_d0_phi(const Field& phi, double P) {
    const std::size_t n = phi.size();
    const double inv = 1.0 / (2.0 * phi.grid().dx());
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double left = j == 0 ? phi[n - 1] * std::exp(P) : phi[j - 1];
        const double right = j + 1 == n ? phi[0] * std::exp(-P) : phi[j + 1];
        out[j] = -(right - left) * inv;
    }
    return out;
}

struct Discrepancy {
    double sup = 0.0;
    double l1 = 0.0;
    void add(double diff, double dx) {
        sup = std::max(sup, std::abs(diff));
        l1 += std::abs(diff) * dx;
    }
};

struct LevelSample {
    double t;
    Discrepancy burgers_kpz, burgers_she, kpz_she;
    double superposition_exact;   // identity with the SHE velocities
    double superposition_mixture; // against the Burgers pair
};

std::vector<LevelSample> run_level(const RealizationConfig& rc, std::uint64_t seed, const std::vector<double>& times) {
    const GridSpec grid = detail::periodic_grid(rc);
    const Mollifier moll(rc.kernel, rc.kernel_width, grid);
    auto [uB, uT] = initial_pair(rc);
    SimulationOptions opts;
    opts.scheme = rc.scheme;
    opts.kpz = true;
    opts.she = true;
    Simulation sim(std::move(uB), std::move(uT), ForcingSampler(moll, rc.amplitude, seed, rc.realization), opts);
    const double dx = grid.dx();
    std::vector<LevelSample> out;
    auto sample = [&] {
        LevelSample s{sim.time(), {}, {}, {}, 0.0, 0.0};
        const Field* u[2] = {&sim.uB(), &sim.uT()};
        const Field* h[2] = {&sim.hB(), &sim.hT()};
        const Field* phi[2] = {&sim.phiB(), &sim.phiT()};
        const double P[2] = {sim.hB_increment(), sim.hT_increment()};
        std::vector<double> vs[2], dphi[2];
        for (int k = 0; k < 2; ++k) {
            const auto vh = d0_height(*h[k], P[k]);
            dphi[k] = minus_d0_phi(*phi[k], P[k]);
            vs[k].resize(vh.size());
            for (std::size_t j = 0; j < vh.size(); ++j) {
                vs[k][j] = dphi[k][j] / (*phi[k])[j];
                s.burgers_kpz.add((*u[k])[j] - vh[j], dx);
                s.burgers_she.add((*u[k])[j] - vs[k][j], dx);
                s.kpz_she.add(vh[j] - vs[k][j], dx);
            }
        }
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double pB = (*phi[0])[j], pT = (*phi[1])[j];
            const double lhs = (dphi[0][j] + dphi[1][j]) / (pB + pT);
            const double rhs = (pB * vs[0][j] + pT * vs[1][j]) / (pB + pT);
            const double mix = (*u[0])[j] / (1.0 + pT / pB) + (*u[1])[j] / (1.0 + pB / pT);
            s.superposition_exact = std::max(s.superposition_exact, std::abs(lhs - rhs));
            s.superposition_mixture = std::max(s.superposition_mixture, std::abs(lhs - mix));
        }
        out.push_back(s);
    };
    sample();
    for (double t : times) {
        sim.advance_to(t);
        sample();
    }
    return out;
}

double worst(const LevelSample& s) { return std::max({s.burgers_kpz.sup, s.burgers_she.sup, s.kpz_she.sup}); }

} // namespace

CommandOutcome cmd_colehopf(const Config& c, const RunContext& ctx) {
    CommandOutcome out{Report(c.hash()), Json::object()};
    auto rc = realization_config(c);
    const double horizon = c.num("colehopf.horizon");
    const double shrink = c.num("colehopf.shrink");
    const auto times = detail::output_times(horizon, std::min(rc.output_every, horizon));

    RealizationConfig fine = rc;
    fine.n *= 2;
    fine.scheme.dt_max /= 4.0;
    const RealizationConfig levels[2] = {rc, fine};
    std::vector<LevelSample> results[2];
    std::string errors[2];
    parallel_for(2, ctx.workers, [&](std::size_t l) {
        try {
            results[l] = run_level(levels[l], ctx.seed, times);
        } catch (const StepAborted& e) {
            errors[l] = e.what();
        }
    });

    for (int l = 0; l < 2; ++l) {
        if (!errors[l].empty()) {
            out.report.check(kExperiment, "positivity", 0, horizon, 1.0, 0.0, false, true,
                             Json{{"n", levels[l].n}, {"error", errors[l]}});
            continue;
        }
        for (const auto& s : results[l]) {
            out.report.add(kExperiment, 0, s.t,
                           Json{{"n", levels[l].n},
                                {"sup_burgers_kpz", s.burgers_kpz.sup},
                                {"sup_burgers_she", s.burgers_she.sup},
                                {"sup_kpz_she", s.kpz_she.sup},
                                {"l1_burgers_kpz", s.burgers_kpz.l1},
                                {"l1_burgers_she", s.burgers_she.l1},
                                {"l1_kpz_she", s.kpz_she.l1},
                                {"superposition_mixture_sup", s.superposition_mixture}});
            out.report.check(kExperiment, "superposition_identity", 0, s.t, s.superposition_exact, 1e-9,
                             s.superposition_exact <= 1e-9, true, Json{{"n", levels[l].n}});
        }
    }
    if (errors[0].empty() && errors[1].empty()) {
        const double coarse = worst(results[0].back()), refined = worst(results[1].back());
        const double ratio = refined > 0.0 ? coarse / refined : INFINITY;
        out.report.check(kExperiment, "refinement_shrink", 0, horizon, ratio, shrink, ratio >= shrink, true,
                         Json{{"sup_coarse", coarse}, {"sup_fine", refined}});
        out.summary["sup_coarse"] = coarse;
        out.summary["sup_fine"] = refined;
        out.summary["ratio"] = ratio;
    }
    return out;
}

} // namespace shocklab::lab
