#include "shocklab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "shocklab/shock.hpp"

namespace shocklab {

FluxKind parse_flux(std::string_view s) {
    if (s == "engquist_osher" || s == "eo") return FluxKind::engquist_osher;
    if (s == "lax_friedrichs" || s == "llf") return FluxKind::lax_friedrichs;
    if (s == "central") return FluxKind::central;
    throw ConfigError("unknown flux '" + std::string(s) + "' (engquist_osher | lax_friedrichs | central)");
}

DiffusionKind parse_diffusion(std::string_view s) {
    if (s == "explicit") return DiffusionKind::explicit_euler;
    if (s == "imex") return DiffusionKind::imex;
    throw ConfigError("unknown diffusion '" + std::string(s) + "' (explicit | imex)");
}

std::string_view to_string(FluxKind f) {
    switch (f) {
    case FluxKind::engquist_osher: return "engquist_osher";
    case FluxKind::lax_friedrichs: return "lax_friedrichs";
    case FluxKind::central: return "central";
    }
    return "?";
}

std::string_view to_string(DiffusionKind d) { return d == DiffusionKind::imex ? "imex" : "explicit"; }

double stable_dt(const SchemeConfig& cfg, const GridSpec& grid, double max_abs_u) {
    const double dx = grid.dx();
    double dt = cfg.dt_max;
    if (max_abs_u > 0.0) dt = std::min(dt, cfg.cfl * dx / max_abs_u);
    if (cfg.diffusion == DiffusionKind::explicit_euler) dt = std::min(dt, cfg.cfl * dx * dx);
    return dt;
}

void check_cfl(const SchemeConfig& cfg, const GridSpec& grid, double max_abs_u, double dt) {
    const double dx = grid.dx();
    double limit = max_abs_u > 0.0 ? dx / max_abs_u : INFINITY;
    if (cfg.diffusion == DiffusionKind::explicit_euler) limit = std::min(limit, dx * dx);
    if (!(dt > 0.0) || dt > cfg.cfl * limit * (1.0 + 1e-9)) {
        std::ostringstream os;
        os << "dt = " << dt << " exceeds the stability bound " << cfg.cfl * limit;
        throw CflViolation(os.str());
    }
    if (cfg.flux == FluxKind::central && max_abs_u * dx > 1.0) {
        std::ostringstream os;
        os << "cell Peclet number max|u|*dx = " << max_abs_u * dx
           << " exceeds 1; refine the grid or select a monotone upwind flux";
        throw CflViolation(os.str());
    }
}

namespace {

double flux(FluxKind k, double a, double b) {
    switch (k) {
    case FluxKind::engquist_osher: {
        const double p = std::max(a, 0.0), m = std::min(b, 0.0);
        return 0.5 * (p * p + m * m);
    }
    case FluxKind::lax_friedrichs:
        return 0.25 * (a * a + b * b) - 0.5 * std::max(std::abs(a), std::abs(b)) * (b - a);
    case FluxKind::central:
        return 0.25 * (a * a + b * b);
    }
    return 0.0;
}

// Copy of f with one ghost on each side: e[0] = f_{-1}, e[n+1] = f_n.
std::vector<double> extend(const Field& f, double left, double right) {
    std::vector<double> e(f.size() + 2);
    std::copy(f.values().begin(), f.values().end(), e.begin() + 1);
    e.front() = left;
    e.back() = right;
    return e;
}

std::vector<double> extend_periodic(const Field& f) { return extend(f, f[f.size() - 1], f[0]); }

// Solve (1 + 2r) x_j - r (x_{j-1} + x_{j+1}) = d_j, cyclic when periodic,
// otherwise with the boundary couplings already folded into d.
std::vector<double> solve_diffusion(std::vector<double> d, double r, bool periodic) {
    const std::size_t n = d.size();
    const double a = -r, b = 1.0 + 2.0 * r;
    auto thomas = [&](std::vector<double> rhs, double b0, double bn) {
        std::vector<double> c(n), x(n);
        double beta = b0;
        x[0] = rhs[0] / beta;
        for (std::size_t j = 1; j < n; ++j) {
            c[j] = a / beta;
            beta = (j + 1 == n ? bn : b) - a * c[j];
            x[j] = (rhs[j] - a * x[j - 1]) / beta;
        }
        for (std::size_t j = n - 1; j-- > 0;) x[j] -= c[j + 1] * x[j + 1];
        return x;
    };
    if (!periodic) return thomas(std::move(d), b, b);
    // Sherman-Morrison for the corner entries a.
    const double gamma = -b;
    std::vector<double> y = thomas(d, b - gamma, b - a * a / gamma);
    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = a;
    std::vector<double> z = thomas(u, b - gamma, b - a * a / gamma);
    const double fact = (y[0] + a * y[n - 1] / gamma) / (1.0 + z[0] + a * z[n - 1] / gamma);
    for (std::size_t j = 0; j < n; ++j) y[j] -= fact * z[j];
    return y;
}

double max_abs(const Field& f) { return std::max(std::abs(f.min()), std::abs(f.max())); }

} // namespace

Field step_burgers(const Field& u, const ForcingIncrement& inc, const SchemeConfig& cfg, std::optional<Ghosts> ghosts) {
    const auto& g = u.grid();
    if (!(inc.dV.grid().size() == g.size() && inc.dV.grid().half_length() == g.half_length()))
        throw GridMismatch("forcing increment and field live on different grids");
    const double dt = inc.dt;
    double umax = max_abs(u);
    if (ghosts) umax = std::max({umax, std::abs(ghosts->left), std::abs(ghosts->right)});
    check_cfl(cfg, g, umax, dt);

    std::vector<double> e;
    if (g.periodic()) e = extend_periodic(u);
    else if (ghosts) e = extend(u, ghosts->left, ghosts->right);
    else throw DomainError("clamped Burgers field needs ghost values");

    const std::size_t n = u.size();
    const double dx = g.dx();
    const double lam = dt / dx;
    const double r = 0.5 * dt / (dx * dx);
    std::vector<double> F(n + 1);  // F[j] at x_{j-1/2}
    for (std::size_t j = 0; j <= n; ++j) F[j] = flux(cfg.flux, e[j], e[j + 1]);

    std::vector<double> out(n);
    if (cfg.diffusion == DiffusionKind::explicit_euler) {
        for (std::size_t j = 0; j < n; ++j)
            out[j] = e[j + 1] - lam * (F[j + 1] - F[j]) + r * (e[j + 2] - 2.0 * e[j + 1] + e[j]);
    } else {
        for (std::size_t j = 0; j < n; ++j) out[j] = e[j + 1] - lam * (F[j + 1] - F[j]);
        if (!g.periodic()) {
            out.front() += r * e.front();
            out.back() += r * e.back();
        }
        out = solve_diffusion(std::move(out), r, g.periodic());
    }
    for (std::size_t j = 0; j < n; ++j) out[j] += inc.dVx[j];
    return Field(g, std::move(out));
}

Field step_kpz(const Field& h, double increment, const ForcingIncrement& inc, double kpz_constant) {
    const auto& g = h.grid();
    const std::size_t n = h.size();
    const auto e = extend(h, h[n - 1] - increment, h[0] + increment);
    const double dt = inc.dt, dx = g.dx();
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double lap = (e[j + 2] - 2.0 * e[j + 1] + e[j]) / (dx * dx);
        const double grad = (e[j + 2] - e[j]) / (2.0 * dx);
        out[j] = e[j + 1] + 0.5 * dt * (lap - grad * grad + kpz_constant) + inc.dV[j];
    }
    return Field(g, std::move(out));
}

Field step_she(const Field& phi, double increment, const ForcingIncrement& inc, double kpz_constant, double t) {
    const auto& g = phi.grid();
    const std::size_t n = phi.size();
    const double m = std::exp(increment);
    const auto e = extend(phi, phi[n - 1] * m, phi[0] / m);
    const double r = 0.5 * inc.dt / (g.dx() * g.dx());
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double heat = e[j + 1] + r * (e[j + 2] - 2.0 * e[j + 1] + e[j]);
        if (!(heat > 0.0)) throw StepAborted("SHE positivity lost at node " + std::to_string(j), t);
        out[j] = heat * std::exp(-inc.dV[j] - 0.5 * kpz_constant * inc.dt);
    }
    return Field(g, std::move(out));
}

MonotoneField step_z(const MonotoneField& Z, double increment, const Field& uB, const Field& uT, double dt, double t) {
    const auto& g = Z.grid();
    const std::size_t n = Z.size();
    const auto e = extend(Z.field(), Z[n - 1] - increment, Z[0] + increment);
    const double dx = g.dx();
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double c = 0.5 * (uB[j] + uT[j]);
        const double lap = (e[j + 2] - 2.0 * e[j + 1] + e[j]) / (dx * dx);
        double grad;
        if (std::abs(c) * dx <= 1.0) grad = (e[j + 2] - e[j]) / (2.0 * dx);
        else if (c > 0.0) grad = (e[j + 1] - e[j]) / dx;
        else grad = (e[j + 2] - e[j + 1]) / dx;
        out[j] = e[j + 1] + dt * (0.5 * lap - c * grad);
    }
    try {
        MonotoneField next(Field(g, std::move(out)));
        if (!(next[0] + increment > next[n - 1]))
            throw OrderingViolation("Z lost monotonicity across the period");
        return next;
    } catch (const OrderingViolation& err) {
        throw StepAborted(std::string("Z update: ") + err.what(), t);
    }
}

double shock_velocity(const Field& uB, const Field& uT, double x) {
    const auto& g = uB.grid();
    const std::size_t n = uB.size();
    const double L = g.half_length();
    double xw = std::fmod(x + L, g.length());
    if (xw < 0.0) xw += g.length();
    const double s = xw / g.dx();
    auto j = static_cast<std::ptrdiff_t>(std::floor(s));
    const double frac = s - static_cast<double>(j);
    const auto N = static_cast<std::ptrdiff_t>(n);
    auto idx = [N](std::ptrdiff_t i) { return static_cast<std::size_t>(((i % N) + N) % N); };
    auto log_gap = [&](std::ptrdiff_t i) {
        const double gap = uT[idx(i)] - uB[idx(i)];
        if (!(gap > 0.0)) throw DomainError("nonpositive gap near the shock");
        return std::log(gap);
    };
    auto v = [&](std::ptrdiff_t i) {
        const double dlog = (log_gap(i + 1) - log_gap(i - 1)) / (2.0 * g.dx());
        return 0.5 * (-dlog + uB[idx(i)] + uT[idx(i)]);
    };
    return (1.0 - frac) * v(j) + frac * v(j + 1);
}

TrackerKind parse_tracker(std::string_view s) {
    if (s == "ode") return TrackerKind::ode;
    if (s == "levelset") return TrackerKind::levelset;
    if (s == "weakform") return TrackerKind::weakform;
    throw ConfigError("unknown tracker '" + std::string(s) + "' (ode | levelset | weakform)");
}

std::string_view to_string(TrackerKind k) {
    switch (k) {
    case TrackerKind::ode: return "ode";
    case TrackerKind::levelset: return "levelset";
    case TrackerKind::weakform: return "weakform";
    }
    return "?";
}

namespace {
double bump(double t) { return std::abs(t) < 1.0 ? std::exp(-1.0 / (1.0 - t * t)) : 0.0; }
} // namespace

TestFunction::TestFunction(double radius) : radius_(radius), norm_(1.0) {
    if (!(radius > 0.0)) throw DomainError("test function radius must be positive");
    constexpr int m = 20000;
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += bump(-1.0 + (i + 0.5) * 2.0 / m);
    norm_ = 1.0 / (radius * s * 2.0 / m);
}

double TestFunction::operator()(double y) const noexcept { return norm_ * bump(y / radius_); }

double TestFunction::derivative(double y) const noexcept {
    const double t = y / radius_;
    if (std::abs(t) >= 1.0) return 0.0;
    const double q = 1.0 - t * t;
    return norm_ * bump(t) * (-2.0 * t / (q * q)) / radius_;
}

ShockTrack::ShockTrack(TrackerKind kind, double b0, double zeta, double anchor)
    : kind_(kind), b_(b0), zeta_(zeta), anchor_(anchor) {}

void ShockTrack::advance_ode(const Field& uB0, const Field& uT0, const Field& uB1, const Field& uT1, double dt) {
    const double k1 = shock_velocity(uB0, uT0, b_);
    const double k2 = shock_velocity(uB1, uT1, b_ + dt * k1);
    b_ += 0.5 * dt * (k1 + k2);
}

void ShockTrack::locate_levelset(const MonotoneField& Z, double increment) {
    b_ = invert_quasi_periodic(Z, increment, zeta_);
}

double ShockTrack::weak_integrand(const Field& uB, const Field& uT) const {
    const auto& g = uB.grid();
    const auto& phi = *test_;
    double s = 0.0;
    for (std::size_t j = 0; j < uB.size(); ++j) {
        const double y = g.node(j) - anchor_;
        if (std::abs(y) >= phi.radius()) continue;
        const double gap = uT[j] - uB[j];
        s += gap * (-phi.derivative(y) - (uB[j] + uT[j]) * phi(y));
    }
    return 0.25 * g.dx() * s;
}

double ShockTrack::zbar_moment(const Field& uB, const Field& uT) const {
    const auto Z = zbar(uB, uT, anchor_);
    const auto& g = uB.grid();
    double s = 0.0;
    for (std::size_t j = 0; j < uB.size(); ++j) {
        const double y = g.node(j) - anchor_;
        if (std::abs(y) < test_->radius()) s += Z[j] * (*test_)(y);
    }
    return g.dx() * s;
}

void ShockTrack::init_weakform(const Field& uB, const Field& uT, double test_radius) {
    const auto& g = uB.grid();
    if (std::abs(anchor_) + test_radius >= g.half_length())
        throw DomainError("weak-form test function reaches the domain edge");
    test_.emplace(test_radius);
    q_acc_ = zbar_moment(uB, uT);
}

void ShockTrack::update_weakform(const Field& uB0, const Field& uT0, const Field& uB1, const Field& uT1, double dt) {
    q_acc_ += 0.5 * dt * (weak_integrand(uB0, uT0) + weak_integrand(uB1, uT1));
}

double ShockTrack::weakform_value(const Field& uB, const Field& uT) const {
    if (!test_) throw DomainError("weak-form tracker not initialised");
    return q_acc_ - zbar_moment(uB, uT);
}

void ShockTrack::locate_weakform(const Field& uB, const Field& uT) {
    const double value = weakform_value(uB, uT);
    const auto Z = zbar(uB, uT, anchor_);
    double increment = 0.0;
    for (std::size_t j = 0; j < uB.size(); ++j) increment += uT[j] - uB[j];
    increment *= 0.5 * uB.grid().dx();
    b_ = invert_quasi_periodic(Z, increment, zeta_ - value);
}

} // namespace shocklab
