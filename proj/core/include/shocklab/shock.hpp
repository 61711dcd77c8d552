#pragma once

// Closed-form viscous shock layer: the half-gap antiderivative Z-bar, the
// logistic shock operator S_{b,gamma}, the center/label functionals and the
// shock-frame change of variables (zeta, U).

#include <optional>
#include <vector>

#include "shocklab/fields.hpp"

namespace shocklab {

/// Nodewise v_B < v_T; the fields may differ in topology but not in nodes.
void require_ordered_pair(const Field& vB, const Field& vT);

/// Z-bar_b(x) = 1/2 int_b^x (v_T - v_B), fourth-order quadrature.
MonotoneField zbar(const Field& vB, const Field& vT, double b);

/// Logistic mixture v_B / (1 + e^{gamma - 2Z}) + v_T / (1 + e^{2Z - gamma})
/// for a given anchor Z; exponents are clamped to +-700.
Field shock_profile_from(const Field& vB, const Field& vT, const Field& Z, double gamma);

/// S_{b,gamma}[v_B, v_T].
Field shock_profile(const Field& vB, const Field& vT, double b, double gamma);

/// Left and right tail integrals about c:
///   left  = int_{-L}^{c} (v - v_T),   right = int_{c}^{L} (v - v_B).
struct TailIntegrals {
    double left;
    double right;
    double sum() const noexcept { return left + right; }
};

TailIntegrals tail_integrals(const Field& vB, const Field& vT, const Field& v, double c);

/// Relative edge tolerance for the truncated-tail check.
inline constexpr double kTailTolerance = 1e-6;

/// Largest edge mismatch |v - v_T|(x_0), |v - v_B|(x_{n-1}) relative to the gap there.
double tail_mismatch(const Field& vB, const Field& vT, const Field& v);

/// gamma = I(b). Throws NotAShock when the tails do not settle at the edges.
double gamma_of(const Field& vB, const Field& vT, const Field& v, double b);

/// The unique b with I(b) = gamma, by bisection on the decreasing I.
double center_of(const Field& vB, const Field& vT, const Field& v, double gamma);

/// Uniform zeta grid: zeta_k = lo + k*step, k < count.
struct ZetaGrid {
    double lo;
    double step;
    std::size_t count;
    double at(std::size_t k) const noexcept { return lo + static_cast<double>(k) * step; }
    friend bool operator==(const ZetaGrid&, const ZetaGrid&) = default;
};

/// Default grid over the anchor's range with a two-step margin at each end.
ZetaGrid default_zeta_grid(const MonotoneField& anchor, std::size_t count = 0);

/// Values of the shock-frame variables on a uniform zeta grid.
struct ShockCoords {
    ZetaGrid grid;
    std::vector<double> x;  // anchor^{-1}(zeta)
    std::vector<double> U;  // (2v - v_T - v_B) / (v_T - v_B)
    std::vector<double> J;  // (v_T - v_B)^2
};

/// Change of variables through the anchor; U and J are interpolated in zeta
/// with six-point Lagrange stencils on the nodal pairs (anchor_j, U_j).
ShockCoords to_coords(const Field& vB, const Field& vT, const Field& v, const MonotoneField& anchor,
                      std::optional<ZetaGrid> grid = std::nullopt);

/// Inverse map u = ((v_T - v_B) U + v_T + v_B) / 2 back to the x grid.
Field from_coords(const ShockCoords& coords, const Field& vB, const Field& vT, const MonotoneField& anchor);

struct DtUResidual {
    std::size_t first;               // first zeta index covered by flux_gap
    std::vector<double> flux_gap;    // d_zeta U - U^2 + 1 on coords_post
    double flux_gap_max;
    double time_residual_norm;       // L1 over interior zeta
};

DtUResidual dtU_residual(const ShockCoords& pre, const ShockCoords& post, double dt);

struct MembershipReport {
    double min_gap;
    double left_tail;
    double right_tail;
    double gamma;
    double tail_mismatch;
    bool ordered;   // v_B < v_T everywhere
    bool is_shock;  // ordered, tails settle within tolerance
};

MembershipReport check_membership(const Field& vB, const Field& vT, const Field& v, double b);

} // namespace shocklab
