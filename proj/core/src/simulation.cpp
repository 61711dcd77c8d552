#include "shocklab/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "shocklab/shock.hpp"

namespace shocklab {

namespace {

double periodic_sum(const Field& f) {
    double s = 0.0;
    for (double v : f.values()) s += v;
    return s;
}

Field exp_neg(const Field& h) {
    std::vector<double> v(h.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::exp(-h[j]);
    return Field(h.grid(), std::move(v));
}

} // namespace

Simulation::Simulation(Field uB, Field uT, ForcingSampler sampler, SimulationOptions opts)
    : uB_(std::move(uB)), uT_(std::move(uT)), sampler_(std::move(sampler)), opts_(opts),
      z_(zbar(uB_, uT_, opts.anchor)), z_increment_(0.0), gap_floor_(0.0), position_limit_(0.0) {
    if (!uB_.grid().periodic() || !(uB_.grid() == uT_.grid()))
        throw GridMismatch("the (u_B, u_T) pair must share one periodic grid");
    if (!(sampler_.mollifier().grid().size() == uB_.size() &&
          sampler_.mollifier().grid().half_length() == uB_.grid().half_length()))
        throw GridMismatch("forcing sampler lives on a different grid");
    const double dx = uB_.grid().dx();
    z_increment_ = 0.5 * dx * (periodic_sum(uT_) - periodic_sum(uB_));
    gap_floor_ = opts_.gap_floor_rel * z_increment_ / grid().half_length();
    if (opts_.kpz || opts_.she) {
        PB_ = dx * periodic_sum(uB_);
        PT_ = dx * periodic_sum(uT_);
        Field hB = cumulative_from(uB_, opts_.anchor, Quadrature::fourth_order).with_topology(Topology::clamped);
        Field hT = cumulative_from(uT_, opts_.anchor, Quadrature::fourth_order).with_topology(Topology::clamped);
        if (opts_.she) {
            phiB_ = exp_neg(hB);
            phiT_ = exp_neg(hT);
        }
        if (opts_.kpz) {
            hB_ = std::move(hB);
            hT_ = std::move(hT);
        }
    }
    position_limit_ = opts_.position_limit > 0.0
                          ? opts_.position_limit
                          : grid().half_length() - 4.0 * sampler_.mollifier().width();
}

std::size_t Simulation::add_shock(const Field& u) {
    if (u.size() != uB_.size() || u.grid().half_length() != grid().half_length())
        throw GridMismatch("shock field lives on a different grid");
    shocks_.push_back(u.with_topology(Topology::clamped));
    if (opts_.position_limit <= 0.0) position_limit_ = 0.5 * grid().half_length();
    return shocks_.size() - 1;
}

std::size_t Simulation::add_tracker(TrackerKind kind, double zeta) {
    const double b0 = invert_quasi_periodic(z_, z_increment_, zeta);
    ShockTrack tr(kind, b0, zeta, opts_.anchor);
    if (kind == TrackerKind::weakform) tr.init_weakform(uB_, uT_, opts_.weak_radius);
    trackers_.push_back(std::move(tr));
    return trackers_.size() - 1;
}

double Simulation::max_abs_u() const {
    double m = std::max({std::abs(uB_.min()), std::abs(uB_.max()), std::abs(uT_.min()), std::abs(uT_.max())});
    for (const auto& u : shocks_) m = std::max({m, std::abs(u.min()), std::abs(u.max())});
    return m;
}

double Simulation::next_dt(double target) const {
    const double remaining = target - t_;
    if (!(remaining > 0.0)) throw DomainError("target time is not ahead of the current time");
    const double ds = stable_dt(opts_.scheme, grid(), max_abs_u());
    const double k = std::max(1.0, std::ceil(remaining / ds - 1e-9));
    return remaining / k;
}

void Simulation::step(double dt, double land_at) {
    const std::size_t n = uB_.size();
    auto inc = sampler_.next(dt);
    const double mass_before = pair_mass();
    try {
        Field uB1 = step_burgers(uB_, inc, opts_.scheme);
        Field uT1 = step_burgers(uT_, inc, opts_.scheme);
        const Ghosts ghosts{uT_[n - 1], uB_[0]};
        std::vector<Field> shocks1;
        shocks1.reserve(shocks_.size());
        for (const auto& u : shocks_) shocks1.push_back(step_burgers(u, inc, opts_.scheme, ghosts));
        const double q = sampler_.kpz_constant();
        if (hB_) {
            hB_ = step_kpz(*hB_, PB_, inc, q);
            hT_ = step_kpz(*hT_, PT_, inc, q);
        }
        if (phiB_) {
            phiB_ = step_she(*phiB_, PB_, inc, q, t_);
            phiT_ = step_she(*phiT_, PT_, inc, q, t_);
        }
        MonotoneField z1 = step_z(z_, z_increment_, uB_, uT_, dt, t_);
        for (auto& tr : trackers_) {
            if (tr.kind() == TrackerKind::ode) tr.advance_ode(uB_, uT_, uB1, uT1, dt);
            else if (tr.kind() == TrackerKind::weakform) tr.update_weakform(uB_, uT_, uB1, uT1, dt);
        }
        uB_ = std::move(uB1);
        uT_ = std::move(uT1);
        shocks_ = std::move(shocks1);
        z_ = std::move(z1);
        for (auto& tr : trackers_)
            if (tr.kind() == TrackerKind::levelset) tr.locate_levelset(z_, z_increment_);
    } catch (const StepAborted&) {
        throw;
    } catch (const CflViolation&) {
        throw;
    } catch (const Error& err) {
        throw StepAborted(err.what(), t_);
    }
    t_ = std::isnan(land_at) ? t_ + dt : land_at;
    ++steps_;
    max_dt_ = std::max(max_dt_, dt);
    max_mass_drift_ = std::max(max_mass_drift_, std::abs(pair_mass() - mass_before));
    if (min_gap() < gap_floor_) throw StepAborted("gap u_T - u_B fell below the floor", t_);
    check_positions();
}

void Simulation::advance_to(double target) {
    const double eps = 1e-12 * std::max(1.0, std::abs(target));
    while (target - t_ > eps) {
        const double dt = next_dt(target);
        const bool last = target - t_ <= dt * (1.0 + 1e-12);
        step(dt, last ? target : NAN);
    }
}

void Simulation::check_positions() const {
    for (const auto& tr : trackers_) {
        if (tr.kind() == TrackerKind::weakform) continue;
        if (std::abs(tr.position()) > position_limit_)
            throw StepAborted("shock position " + std::to_string(tr.position()) + " left the tracked window", t_);
    }
}

double Simulation::position(std::size_t i) {
    auto& tr = trackers_.at(i);
    if (tr.kind() == TrackerKind::weakform) tr.locate_weakform(uB_, uT_);
    return tr.position();
}

double Simulation::pair_mass() const { return grid().dx() * (periodic_sum(uT_) - periodic_sum(uB_)); }

double Simulation::min_gap() const {
    double m = INFINITY;
    for (std::size_t j = 0; j < uB_.size(); ++j) m = std::min(m, uT_[j] - uB_[j]);
    return m;
}

std::pair<Field, Field> initial_pair(const RealizationConfig& cfg) {
    const GridSpec grid(cfg.L, cfg.n, Topology::periodic);
    const double w = cfg.pair_wiggle;
    const double k = std::numbers::pi / cfg.L;
    Field uB = Field::sample(grid, [&](double x) { return cfg.aB + w * std::sin(k * x); });
    Field uT = Field::sample(grid, [&](double x) { return cfg.aT + 0.5 * w * std::cos(2.0 * k * x + 0.7); });
    try {
        require_ordered_pair(uB, uT);
    } catch (const OrderingViolation&) {
        throw ConfigError("initial pair is not ordered; reduce pair_wiggle or widen a_T - a_B");
    }
    return {std::move(uB), std::move(uT)};
}

namespace {

ZetaGrid common_zeta_grid(const MonotoneField& a, const MonotoneField& b) {
    const std::size_t n = a.size();
    const double lo = std::max(a[0], b[0]);
    const double hi = std::min(a[n - 1], b[n - 1]);
    const double step = (hi - lo) / static_cast<double>(n + 3);
    return ZetaGrid{lo + 2.0 * step, step, n};
}

} // namespace

std::vector<DiagnosticRecord> run_realization(const RealizationConfig& cfg, std::uint64_t seed,
                                              const SnapshotSink& sink) {
    if (!(cfg.aB < cfg.aT)) throw ConfigError("a_B < a_T is required");
    if (!(cfg.output_every > 0.0) || !(cfg.horizon > 0.0)) throw ConfigError("horizon and output_every must be positive");
    const GridSpec grid(cfg.L, cfg.n, Topology::periodic);
    const Mollifier moll(cfg.kernel, cfg.kernel_width, grid);
    auto [uB, uT] = initial_pair(cfg);
    SimulationOptions opts;
    opts.scheme = cfg.scheme;
    opts.anchor = cfg.b0;
    opts.weak_radius = cfg.weak_radius;
    Field u0 = shock_profile(uB, uT, cfg.b0, cfg.gamma);
    Simulation sim(std::move(uB), std::move(uT), ForcingSampler(moll, cfg.amplitude, seed, cfg.realization), opts);
    sim.add_shock(u0);
    for (auto k : cfg.trackers) sim.add_tracker(k, cfg.zeta);
    const double mass0 = sim.pair_mass();

    std::vector<DiagnosticRecord> out;
    std::optional<ShockCoords> pre_coords;
    double last_dt = 0.0;

    auto record = [&] {
        DiagnosticRecord r{sim.time(), {}};
        auto& m = r.metrics;
        double bmin = INFINITY, bmax = -INFINITY, b_ref = NAN;
        for (std::size_t i = 0; i < sim.tracker_count(); ++i) {
            const double b = sim.position(i);
            m["b_" + std::string(to_string(sim.tracker(i).kind()))] = b;
            bmin = std::min(bmin, b);
            bmax = std::max(bmax, b);
            if (sim.tracker(i).kind() == TrackerKind::levelset || std::isnan(b_ref)) b_ref = b;
        }
        if (sim.tracker_count() > 0) {
            m["tracker_spread"] = bmax - bmin;
            m["tracker_spread_dx"] = (bmax - bmin) / grid.dx();
        }
        const Field u = sim.shock(0).with_topology(Topology::periodic);
        if (!std::isnan(b_ref) && grid.contains(b_ref)) {
            const Field S = shock_profile(sim.uB(), sim.uT(), b_ref, cfg.gamma);
            m["l1_to_explicit"] = l1_distance(u, S);
            try {
                m["gamma_measured"] = gamma_of(sim.uB(), sim.uT(), u, b_ref);
            } catch (const NotAShock&) {
            }
        }
        double violation = 0.0;
        for (std::size_t j = 0; j < u.size(); ++j)
            violation = std::max({violation, sim.uB()[j] - u[j], u[j] - sim.uT()[j]});
        m["order_violation"] = violation;
        // Far-field values agree with the pair up to rounding.
        m["ordered"] = violation <= 1e-12 ? 1.0 : 0.0;
        m["pair_mass_drift"] = std::abs(sim.pair_mass() - mass0);
        m["max_step_mass_drift"] = sim.max_step_mass_drift();
        m["min_gap"] = sim.min_gap();
        m["steps"] = static_cast<double>(sim.steps());
        // IMEX diffusion leaves the regime where comparison is guaranteed.
        m["monotone_regime"] = cfg.scheme.diffusion == DiffusionKind::explicit_euler ? 1.0 : 0.0;
        if (pre_coords) {
            const auto post = to_coords(sim.uB(), sim.uT(), u, sim.z(), pre_coords->grid);
            const auto res = dtU_residual(*pre_coords, post, last_dt);
            m["dtU_time_residual"] = res.time_residual_norm;
            m["flux_gap_max"] = res.flux_gap_max;
        }
        if (sink) {
            sink(sim.time(), "uB", sim.uB());
            sink(sim.time(), "uT", sim.uT());
            sink(sim.time(), "u", sim.shock(0));
            sink(sim.time(), "Z", sim.z().field());
        }
        out.push_back(std::move(r));
    };

    record();
    const auto outputs = static_cast<std::size_t>(std::floor(cfg.horizon / cfg.output_every + 1e-9));
    for (std::size_t k = 1; k <= outputs + 1; ++k) {
        const double target = k <= outputs ? std::min(cfg.horizon, static_cast<double>(k) * cfg.output_every) : cfg.horizon;
        if (k > outputs && target - sim.time() <= 1e-12 * std::max(1.0, cfg.horizon)) break;
        pre_coords.reset();
        while (target - sim.time() > 1e-12 * std::max(1.0, target)) {
            const double dt = sim.next_dt(target);
            const bool last = target - sim.time() <= dt * (1.0 + 1e-12);
            if (last) {
                const Field uB0 = sim.uB(), uT0 = sim.uT();
                const Field u0 = sim.shock(0).with_topology(Topology::periodic);
                const MonotoneField z0 = sim.z();
                sim.step(dt, target);
                pre_coords = to_coords(uB0, uT0, u0, z0, common_zeta_grid(z0, sim.z()));
            } else {
                sim.step(dt);
            }
            last_dt = dt;
        }
        record();
    }
    return out;
}

} // namespace shocklab
