#include "shocklab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "shocklab/shock.hpp"

namespace shocklab {

double gap_mean(const Field& vB, const Field& vT) {
    if (vB.size() != vT.size()) throw GridMismatch("pair fields differ in size");
    double s = 0.0;
    for (std::size_t j = 0; j < vB.size(); ++j) s += vT[j] - vB[j];
    return s / static_cast<double>(vB.size());
}

double tilt_weight(const EnsembleMember& m, const TiltSpec& tilt) {
    const double gap = interpolate(m.uT, tilt.anchor) - interpolate(m.uB, tilt.anchor);
    if (!(gap > 0.0)) throw DomainError("nonpositive gap at the tilt anchor");
    double norm;
    if (tilt.normalization == TiltNormalization::ergodic_constant) {
        if (!(tilt.ergodic_gap > 0.0)) throw DomainError("ergodic normalization needs a_T > a_B");
        norm = tilt.ergodic_gap;
    } else {
        norm = gap_mean(m.uB, m.uT);
    }
    return gap / norm;
}

namespace {

double clip(double v, double bound) { return std::clamp(v, -bound, bound); }

std::string offset_label(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

Field shock_as_periodic(const EnsembleMember& m) {
    if (!m.u) throw DomainError("observable needs an attached shock field");
    return m.u->with_topology(Topology::periodic);
}

} // namespace

std::vector<Observable> builtin_observables(double anchor, double gamma, double bound) {
    std::vector<Observable> obs;
    obs.push_back({"gap_at_anchor", [=](const EnsembleMember& m) {
                       return clip(interpolate(m.uT, anchor) - interpolate(m.uB, anchor), bound);
                   }});
    obs.push_back({"shock_L1_to_explicit", [=](const EnsembleMember& m) {
                       const Field u = shock_as_periodic(m);
                       const double L = m.uB.grid().half_length();
                       const Field S = shock_profile(m.uB, m.uT, m.b_track, gamma);
                       const double w = 0.25 * L;
                       return clip(l1_distance(u, S, Window{std::max(-L, anchor - w), std::min(L, anchor + w)}),
                                   bound);
                   }});
    for (int k = -4; k <= 4; ++k) {
        const double x = 0.5 * k;
        obs.push_back({"mean_profile_at(" + offset_label(x) + ")", [=](const EnsembleMember& m) {
                           return clip(0.5 * (interpolate(m.uB, anchor + x) + interpolate(m.uT, anchor + x)), bound);
                       }});
    }
    for (int k = -4; k <= 4; ++k) {
        const double x = 0.5 * k;
        obs.push_back({"u_at(" + offset_label(x) + ")", [=](const EnsembleMember& m) {
                           return clip(interpolate(shock_as_periodic(m), anchor + x), bound);
                       }});
    }
    return obs;
}

Observable find_observable(const std::vector<Observable>& all, const std::string& name) {
    for (const auto& o : all)
        if (o.name == name) return o;
    throw ConfigError("unknown observable '" + name + "'");
}

Estimate weighted_mean(std::vector<WeightedSample> s) {
    if (s.empty()) throw DegenerateEnsemble("empty ensemble");
    std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    double sw = 0.0, swf = 0.0;
    for (const auto& e : s) {
        if (!std::isfinite(e.weight) || e.weight < 0.0) throw DegenerateEnsemble("weights must be finite and >= 0");
        sw += e.weight;
        swf += e.weight * e.value;
    }
    if (!(sw > 0.0)) throw DegenerateEnsemble("all weights are zero");
    const double est = swf / sw;
    const std::size_t M = s.size();
    if (M < 2) return {est, 0.0};
    std::vector<double> loo;
    loo.reserve(M);
    for (const auto& e : s) {
        const double rest = sw - e.weight;
        if (rest > 0.0) loo.push_back((swf - e.weight * e.value) / rest);
    }
    if (loo.size() < 2) return {est, 0.0};
    double mean = 0.0;
    for (double v : loo) mean += v;
    mean /= static_cast<double>(loo.size());
    double ss = 0.0;
    for (double v : loo) ss += (v - mean) * (v - mean);
    const auto m = static_cast<double>(loo.size());
    return {est, std::sqrt((m - 1.0) / m * ss)};
}

Estimate weighted_stats(std::span<const EnsembleMember> ensemble, const Observable& F,
                        const std::optional<TiltSpec>& tilt) {
    std::vector<WeightedSample> s;
    s.reserve(ensemble.size());
    for (const auto& m : ensemble) s.push_back({m.seed_id, F.fn(m), tilt ? tilt_weight(m, *tilt) : m.weight});
    return weighted_mean(std::move(s));
}

std::ptrdiff_t shift_cells(const GridSpec& g, double x, double b) {
    return static_cast<std::ptrdiff_t>(std::llround((x - b) / g.dx()));
}

EnsembleMember shift_member(const EnsembleMember& m, std::ptrdiff_t k) {
    EnsembleMember out{m.seed_id, m.uB.shifted_cyclic(k), m.uT.shifted_cyclic(k), std::nullopt,
                       m.b_track - static_cast<double>(k) * m.uB.grid().dx(), m.weight};
    if (m.u) out.u = m.u->shifted_cyclic(k);
    return out;
}

EnsembleMember shift_sample(const EnsembleMember& m, double b, double u01) {
    const auto Z = zbar(m.uB, m.uT, b);
    const double P = 0.5 * m.uB.grid().length() * gap_mean(m.uB, m.uT);
    const double x = invert_quasi_periodic(Z, P, std::clamp(u01, 0.0, 1.0) * P);
    EnsembleMember out = shift_member(m, shift_cells(m.uB.grid(), x, b));
    out.b_track = b;
    out.weight = 1.0;
    return out;
}

std::size_t StationarityReport::passed() const {
    return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const auto& e) { return e.pass; }));
}

StationarityReport stationarity_report(std::span<const EnsembleMember> t0, std::span<const EnsembleMember> t1,
                                       const std::vector<Observable>& observables, const StationarityOptions& opts) {
    if (t0.size() < 30 || t1.size() < 30)
        throw DomainError("stationarity test needs at least 30 members per ensemble");
    StationarityReport rep{{}, 0.0};
    for (const auto& F : observables) {
        const auto e0 = weighted_stats(t0, F, opts.tilt_t0);
        const auto e1 = weighted_stats(t1, F, opts.tilt_t1);
        const double denom = std::sqrt(e0.stderr_ * e0.stderr_ + e1.stderr_ * e1.stderr_ + opts.floor * opts.floor);
        const double diff = e1.value - e0.value;
        const double z = denom > 0.0 ? diff / denom : (diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff));
        rep.entries.push_back({F.name, e0.value, e0.stderr_, e1.value, e1.stderr_, z, std::abs(z) <= opts.z_crit});
    }
    rep.pass_fraction = observables.empty() ? 1.0
                                            : static_cast<double>(rep.passed()) / static_cast<double>(observables.size());
    return rep;
}

} // namespace shocklab
