#include "shocklab/shock.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace shocklab {

namespace {

void require_same_nodes(const Field& a, const Field& b) {
    const auto& ga = a.grid();
    const auto& gb = b.grid();
    if (ga.size() != gb.size() || ga.half_length() != gb.half_length())
        throw GridMismatch("fields live on different nodes");
}

Field relabel(const Field& f, Topology t) { return f.grid().topology() == t ? f : f.with_topology(t); }

// Lagrange interpolation through points (xs[i], ys[i]), i < m.
double lagrange(const double* xs, const double* ys, int m, double x) {
    double sum = 0.0;
    for (int a = 0; a < m; ++a) {
        double w = ys[a];
        for (int b = 0; b < m; ++b)
            if (b != a) w *= (x - xs[b]) / (xs[a] - xs[b]);
        sum += w;
    }
    return sum;
}

constexpr int kStencil = 6;

// Six-point interpolation of nodal values ys over nondecreasing abscissae xs
// around bracket index j.
double interp_nodes(const std::vector<double>& xs, const std::vector<double>& ys, std::size_t j, double x) {
    const auto n = static_cast<std::ptrdiff_t>(xs.size());
    const std::ptrdiff_t i0 = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(j) - 2, 0, n - kStencil);
    return lagrange(xs.data() + i0, ys.data() + i0, kStencil, x);
}

// Sixth-order central first derivative on a uniform grid, for k in [3, m-4].
double d6(const std::vector<double>& f, std::size_t k, double h) {
    return (-f[k - 3] + 9.0 * f[k - 2] - 45.0 * f[k - 1] + 45.0 * f[k + 1] - 9.0 * f[k + 2] + f[k + 3]) /
           (60.0 * h);
}

struct TailAntiderivatives {
    Antiderivative top;     // of v - v_T
    Antiderivative bottom;  // of v - v_B
    double L;

    TailAntiderivatives(const Field& vB, const Field& vT, const Field& v)
        : top(relabel(v, Topology::clamped) - relabel(vT, Topology::clamped)),
          bottom(relabel(v, Topology::clamped) - relabel(vB, Topology::clamped)),
          L(vB.grid().half_length()) {}

    TailIntegrals at(double c) const { return {top(c), bottom(L) - bottom(c)}; }
};

} // namespace

void require_ordered_pair(const Field& vB, const Field& vT) {
    require_same_nodes(vB, vT);
    for (std::size_t j = 0; j < vB.size(); ++j)
        if (!(vB[j] < vT[j])) {
            std::ostringstream os;
            os << "v_B < v_T fails at node " << j << " (x = " << vB.grid().node(j) << ")";
            throw OrderingViolation(os.str());
        }
}

MonotoneField zbar(const Field& vB, const Field& vT, double b) {
    require_ordered_pair(vB, vT);
    const Field half_gap = 0.5 * (relabel(vT, vB.grid().topology()) - vB);
    return MonotoneField(cumulative_from(half_gap, b, Quadrature::fourth_order));
}

Field shock_profile_from(const Field& vB, const Field& vT, const Field& Z, double gamma) {
    require_ordered_pair(vB, vT);
    require_same_nodes(vB, Z);
    std::vector<double> out(vB.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        const double e = std::clamp(gamma - 2.0 * Z[j], -700.0, 700.0);
        out[j] = vB[j] / (1.0 + std::exp(e)) + vT[j] / (1.0 + std::exp(-e));
        // keep the convex combination inside the bracket despite rounding
        out[j] = std::clamp(out[j], vB[j], vT[j]);
    }
    return Field(vB.grid(), std::move(out));
}

Field shock_profile(const Field& vB, const Field& vT, double b, double gamma) {
    return shock_profile_from(vB, vT, zbar(vB, vT, b).field(), gamma);
}

TailIntegrals tail_integrals(const Field& vB, const Field& vT, const Field& v, double c) {
    require_same_nodes(vB, vT);
    require_same_nodes(vB, v);
    return TailAntiderivatives(vB, vT, v).at(c);
}

double tail_mismatch(const Field& vB, const Field& vT, const Field& v) {
    const std::size_t n = v.size();
    const double left = std::abs(v[0] - vT[0]) / std::abs(vT[0] - vB[0]);
    const double right = std::abs(v[n - 1] - vB[n - 1]) / std::abs(vT[n - 1] - vB[n - 1]);
    return std::max(left, right);
}

double gamma_of(const Field& vB, const Field& vT, const Field& v, double b) {
    require_ordered_pair(vB, vT);
    require_same_nodes(vB, v);
    const double mis = tail_mismatch(vB, vT, v);
    if (mis > kTailTolerance) {
        std::ostringstream os;
        os << "tails do not settle at the domain edges (relative mismatch " << mis << ")";
        throw NotAShock(os.str());
    }
    return tail_integrals(vB, vT, v, b).sum();
}

double center_of(const Field& vB, const Field& vT, const Field& v, double gamma) {
    require_ordered_pair(vB, vT);
    require_same_nodes(vB, v);
    if (tail_mismatch(vB, vT, v) > kTailTolerance) throw NotAShock("tails do not settle at the domain edges");
    const TailAntiderivatives I(vB, vT, v);
    double lo = -I.L, hi = I.L;
    const double I_lo = I.at(lo).sum(), I_hi = I.at(hi).sum();
    if (!(gamma <= I_lo && gamma >= I_hi)) {
        std::ostringstream os;
        os << "gamma = " << gamma << " outside the attainable range [" << I_hi << ", " << I_lo << "]";
        throw DomainError(os.str());
    }
    for (int it = 0; it < 200 && hi - lo > 1e-14 * I.L; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (I.at(mid).sum() > gamma) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

ZetaGrid default_zeta_grid(const MonotoneField& anchor, std::size_t count) {
    if (count == 0) count = anchor.size();
    if (count < 16) throw DomainError("zeta grid needs at least 16 points");
    const double z0 = anchor[0], z1 = anchor[anchor.size() - 1];
    const double step = (z1 - z0) / static_cast<double>(count + 3);
    return ZetaGrid{z0 + 2.0 * step, step, count};
}

ShockCoords to_coords(const Field& vB, const Field& vT, const Field& v, const MonotoneField& anchor,
                      std::optional<ZetaGrid> grid) {
    require_ordered_pair(vB, vT);
    require_same_nodes(vB, v);
    require_same_nodes(vB, anchor.field());
    const ZetaGrid zg = grid ? *grid : default_zeta_grid(anchor);
    const std::size_t n = vB.size();
    const auto& g = vB.grid();

    std::vector<double> zn(anchor.values().begin(), anchor.values().end());
    std::vector<double> Un(n), Jn(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double gap = vT[j] - vB[j];
        Un[j] = (2.0 * v[j] - vT[j] - vB[j]) / gap;
        Jn[j] = gap * gap;
    }
    const bool bracketed = std::all_of(Un.begin(), Un.end(), [](double u) { return std::abs(u) <= 1.0; });

    ShockCoords c{zg, std::vector<double>(zg.count), std::vector<double>(zg.count), std::vector<double>(zg.count)};
    for (std::size_t k = 0; k < zg.count; ++k) {
        const double z = zg.at(k);
        if (z < zn.front() || z > zn.back()) throw OutOfRange("zeta grid exceeds the anchor's range");
        auto it = std::upper_bound(zn.begin(), zn.end(), z);
        std::size_t j = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - zn.begin() - 1, 0));
        if (j >= n - 1) j = n - 2;
        c.x[k] = g.node(j) + g.dx() * (z - zn[j]) / (zn[j + 1] - zn[j]);
        double U = interp_nodes(zn, Un, j, z);
        if (bracketed) U = std::clamp(U, -1.0, 1.0);
        c.U[k] = U;
        c.J[k] = interp_nodes(zn, Jn, j, z);
    }
    return c;
}

Field from_coords(const ShockCoords& coords, const Field& vB, const Field& vT, const MonotoneField& anchor) {
    require_ordered_pair(vB, vT);
    const auto& zg = coords.grid;
    std::vector<double> zs(zg.count);
    for (std::size_t k = 0; k < zg.count; ++k) zs[k] = zg.at(k);
    std::vector<double> out(vB.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        const double z = std::clamp(anchor[j], zs.front(), zs.back());
        const auto k = static_cast<std::size_t>(
            std::clamp<double>(std::floor((z - zg.lo) / zg.step), 0.0, static_cast<double>(zg.count - 2)));
        const double U = interp_nodes(zs, coords.U, k, z);
        out[j] = 0.5 * ((vT[j] - vB[j]) * U + vT[j] + vB[j]);
    }
    return Field(vB.grid(), std::move(out));
}

DtUResidual dtU_residual(const ShockCoords& pre, const ShockCoords& post, double dt) {
    if (!(pre.grid == post.grid)) throw GridMismatch("zeta grids differ between the two coordinate sets");
    if (!(dt > 0.0)) throw DomainError("dt must be positive");
    const std::size_t m = post.grid.count;
    const double h = post.grid.step;

    auto flux_gap = [&](const std::vector<double>& U, std::size_t k) { return d6(U, k, h) - U[k] * U[k] + 1.0; };

    DtUResidual r{3, {}, 0.0, 0.0};
    for (std::size_t k = 3; k + 3 < m; ++k) {
        const double fg = flux_gap(post.U, k);
        r.flux_gap.push_back(fg);
        r.flux_gap_max = std::max(r.flux_gap_max, std::abs(fg));
    }

    std::vector<double> Umid(m), G(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) Umid[k] = 0.5 * (pre.U[k] + post.U[k]);
    for (std::size_t k = 3; k + 3 < m; ++k) G[k] = 0.5 * (pre.J[k] + post.J[k]) * flux_gap(Umid, k);
    double sum = 0.0;
    for (std::size_t k = 6; k + 6 < m; ++k) {
        const double lhs = (post.U[k] - pre.U[k]) / dt;
        sum += std::abs(lhs - 0.125 * d6(G, k, h));
    }
    r.time_residual_norm = h * sum;
    return r;
}

MembershipReport check_membership(const Field& vB, const Field& vT, const Field& v, double b) {
    MembershipReport r{};
    r.min_gap = (relabel(vT, vB.grid().topology()) - vB).min();
    r.ordered = r.min_gap > 0.0;
    const auto tails = tail_integrals(vB, vT, v, b);
    r.left_tail = tails.left;
    r.right_tail = tails.right;
    r.gamma = tails.sum();
    r.tail_mismatch = r.ordered ? tail_mismatch(vB, vT, v) : INFINITY;
    r.is_shock = r.ordered && r.tail_mismatch <= kTailTolerance;
    return r;
}

} // namespace shocklab
