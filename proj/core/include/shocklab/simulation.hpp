#pragma once

// One realization of the coupled system: a periodic (u_B, u_T) pair driven
// by a shared forcing, optional clamped shock fields sandwiched between
// them, KPZ/SHE companions, the Z field and any number of trackers.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shocklab/dynamics.hpp"
#include "shocklab/noise.hpp"

namespace shocklab {

struct SimulationOptions {
    SchemeConfig scheme{};
    double anchor = 0.0;          // b in Z_{b,t}
    bool kpz = false;             // evolve h_B, h_T
    bool she = false;             // evolve phi_B, phi_T
    double gap_floor_rel = 1e-8;  // abort below this fraction of the initial mean gap
    double weak_radius = 1.0;     // support radius of the weak-form test function
    /// Trackers abort beyond this |b|; 0 picks L/2 with shock fields and
    /// L - 4 kernel widths otherwise.
    double position_limit = 0.0;
};

class Simulation {
public:
    Simulation(Field uB, Field uT, ForcingSampler sampler, SimulationOptions opts);

    /// Clamped field between the pair; ghosts come from the pair each step.
    std::size_t add_shock(const Field& u);
    /// Tracker at level zeta of Z (initial position Z-bar_anchor^{-1}(zeta)).
    std::size_t add_tracker(TrackerKind kind, double zeta = 0.0);

    /// Step size the next step would take on the way to target.
    double next_dt(double target) const;
    /// One step of exactly dt (checked against the CFL bound). When land_at
    /// is given the clock is set to it afterwards, absorbing rounding.
    void step(double dt, double land_at = NAN);
    void advance_to(double target);

    double time() const noexcept { return t_; }
    std::uint64_t steps() const noexcept { return steps_; }
    const GridSpec& grid() const noexcept { return uB_.grid(); }
    const Field& uB() const noexcept { return uB_; }
    const Field& uT() const noexcept { return uT_; }
    std::size_t shock_count() const noexcept { return shocks_.size(); }
    const Field& shock(std::size_t i) const { return shocks_.at(i); }
    const MonotoneField& z() const noexcept { return z_; }
    double z_increment() const noexcept { return z_increment_; }
    const SimulationOptions& options() const noexcept { return opts_; }
    ForcingSampler& sampler() noexcept { return sampler_; }

    std::size_t tracker_count() const noexcept { return trackers_.size(); }
    const ShockTrack& tracker(std::size_t i) const { return trackers_.at(i); }
    /// Current position of tracker i (weak-form positions are resolved here).
    double position(std::size_t i);

    const Field& hB() const { return hB_.value(); }
    const Field& hT() const { return hT_.value(); }
    const Field& phiB() const { return phiB_.value(); }
    const Field& phiT() const { return phiT_.value(); }
    double hB_increment() const noexcept { return PB_; }
    double hT_increment() const noexcept { return PT_; }

    /// dx * sum (u_T - u_B); conserved by the flux form.
    double pair_mass() const;
    double max_step_mass_drift() const noexcept { return max_mass_drift_; }
    double min_gap() const;
    double gap_floor() const noexcept { return gap_floor_; }
    /// Largest dt taken so far.
    double max_dt() const noexcept { return max_dt_; }

private:
    double max_abs_u() const;
    void check_positions() const;

    Field uB_, uT_;
    ForcingSampler sampler_;
    SimulationOptions opts_;
    std::vector<Field> shocks_;
    MonotoneField z_;
    double z_increment_;
    std::optional<Field> hB_, hT_, phiB_, phiT_;
    double PB_ = 0.0, PT_ = 0.0;
    std::vector<ShockTrack> trackers_;
    double t_ = 0.0;
    std::uint64_t steps_ = 0;
    double gap_floor_;
    double max_mass_drift_ = 0.0;
    double max_dt_ = 0.0;
    double position_limit_;
};

/// Parameters of one realization driven by run_realization.
struct RealizationConfig {
    double L = 20.0;
    std::size_t n = 1024;
    KernelKind kernel = KernelKind::gaussian;
    double kernel_width = 0.5;
    double amplitude = 0.5;
    SchemeConfig scheme{};
    double horizon = 10.0;
    double output_every = 1.0;
    double aB = -1.0;
    double aT = 1.0;
    double pair_wiggle = 0.0;  // amplitude of a smooth periodic perturbation of the initial pair
    double gamma = 0.0;
    double b0 = 0.0;
    double zeta = 0.0;
    std::vector<TrackerKind> trackers{TrackerKind::ode, TrackerKind::levelset, TrackerKind::weakform};
    double weak_radius = 1.0;
    std::uint32_t realization = 0;
};

struct DiagnosticRecord {
    double t;
    std::map<std::string, double> metrics;
};

using SnapshotSink = std::function<void(double t, const std::string& name, const Field& f)>;

/// Initial pair for a config: constants plus the optional wiggle.
std::pair<Field, Field> initial_pair(const RealizationConfig& cfg);

/// Triple (u_B, u_T, S_{b0,gamma}) evolved to the horizon, with diagnostics
/// at every output time (t = 0 included). Deterministic in (cfg, seed).
std::vector<DiagnosticRecord> run_realization(const RealizationConfig& cfg, std::uint64_t seed,
                                              const SnapshotSink& sink = {});

} // namespace shocklab
