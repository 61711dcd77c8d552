#pragma once

// Single-step integrators for stochastic Burgers, KPZ, SHE and the
// noise-free Z equation, plus the three shock-position trackers.

#include <optional>
#include <string_view>

#include "shocklab/fields.hpp"
#include "shocklab/noise.hpp"

namespace shocklab {

enum class FluxKind { engquist_osher, lax_friedrichs, central };
enum class DiffusionKind { explicit_euler, imex };

FluxKind parse_flux(std::string_view s);
DiffusionKind parse_diffusion(std::string_view s);
std::string_view to_string(FluxKind f);
std::string_view to_string(DiffusionKind d);

struct SchemeConfig {
    FluxKind flux = FluxKind::central;
    DiffusionKind diffusion = DiffusionKind::explicit_euler;
    double cfl = 0.5;
    double dt_max = 1e-2;

    /// True when the discrete update is a monotone map under the CFL bound.
    bool certified_monotone() const noexcept { return diffusion == DiffusionKind::explicit_euler; }
};

/// Largest admissible step for fields bounded by max_abs_u.
double stable_dt(const SchemeConfig& cfg, const GridSpec& grid, double max_abs_u);

/// Throws CflViolation if dt or the grid Peclet number leaves the
/// monotone regime of the configured scheme.
void check_cfl(const SchemeConfig& cfg, const GridSpec& grid, double max_abs_u, double dt);

/// Values just outside the grid, at x_{-1} and x_n.
struct Ghosts {
    double left;
    double right;
};

/// Conservative update of one Burgers field followed by the shared noise
/// increment. Periodic fields wrap; clamped fields need ghosts.
Field step_burgers(const Field& u, const ForcingIncrement& inc, const SchemeConfig& cfg,
                   std::optional<Ghosts> ghosts = std::nullopt);

/// Explicit KPZ step for a height with h(x + 2L) = h(x) + increment.
/// kpz_constant is the Ito term amplitude^2 ||rho||^2 (zero disables it).
Field step_kpz(const Field& h, double increment, const ForcingIncrement& inc, double kpz_constant);

/// Split SHE step: explicit heat half, then exp(-dV - kpz_constant dt / 2).
/// phi(x + 2L) = phi(x) exp(-increment). Throws StepAborted on positivity loss.
Field step_she(const Field& phi, double increment, const ForcingIncrement& inc, double kpz_constant,
               double t = 0.0);

/// Noise-free step of dZ = (Z_xx / 2 - (u_B + u_T) Z_x / 2) dt with
/// Z(x + 2L) = Z(x) + increment. Advection is centred where the local
/// Peclet number allows and upwinded elsewhere. Throws StepAborted if Z
/// stops being strictly increasing.
MonotoneField step_z(const MonotoneField& Z, double increment, const Field& uB, const Field& uT, double dt,
                     double t = 0.0);

/// Right-hand side of the shock-position ODE at x:
/// (-(log(u_T - u_B))_x + u_B + u_T) / 2, from local centred differences.
double shock_velocity(const Field& uB, const Field& uT, double x);

enum class TrackerKind { ode, levelset, weakform };
TrackerKind parse_tracker(std::string_view s);
std::string_view to_string(TrackerKind k);

/// Smooth compactly supported test function with unit integral.
class TestFunction {
public:
    explicit TestFunction(double radius);
    double radius() const noexcept { return radius_; }
    double operator()(double y) const noexcept;
    double derivative(double y) const noexcept;

private:
    double radius_;
    double norm_;
};

/// Shock position under one tracking method.
class ShockTrack {
public:
    ShockTrack(TrackerKind kind, double b0, double zeta, double anchor);

    TrackerKind kind() const noexcept { return kind_; }
    double position() const noexcept { return b_; }
    double zeta() const noexcept { return zeta_; }
    double anchor() const noexcept { return anchor_; }

    /// Heun step of the ODE using the pair before and after the step.
    void advance_ode(const Field& uB0, const Field& uT0, const Field& uB1, const Field& uT1, double dt);

    /// Level-set position on the evolved Z field.
    void locate_levelset(const MonotoneField& Z, double increment);

    /// Weak-form bookkeeping; init once with the initial pair, then call
    /// update with the pair before and after every step.
    void init_weakform(const Field& uB, const Field& uT, double test_radius);
    void update_weakform(const Field& uB0, const Field& uT0, const Field& uB1, const Field& uT1, double dt);
    /// Z_{b,t}(b) from the accumulated flux and the current pair.
    double weakform_value(const Field& uB, const Field& uT) const;
    /// Position implied by the anchor height: inverse of Z-bar_b at zeta - value.
    void locate_weakform(const Field& uB, const Field& uT);

private:
    double weak_integrand(const Field& uB, const Field& uT) const;
    double zbar_moment(const Field& uB, const Field& uT) const;

    TrackerKind kind_;
    double b_;
    double zeta_;
    double anchor_;
    std::optional<TestFunction> test_;
    double q_acc_ = 0.0;
};

} // namespace shocklab
