#pragma once

// Monte Carlo layer for the size-biased (tilted) pair law: tilt weights,
// self-normalized estimates, the shift sampler and two-ensemble
// stationarity tests in the shock frame.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shocklab/fields.hpp"

namespace shocklab {

/// Spatial mean of v_T - v_B over one period.
double gap_mean(const Field& vB, const Field& vT);

enum class TiltNormalization { ergodic_constant, per_member_mean };

struct TiltSpec {
    double anchor = 0.0;
    TiltNormalization normalization = TiltNormalization::ergodic_constant;
    double ergodic_gap = 2.0;  // a_T - a_B, used by ergodic_constant
};

/// One realization in the shock frame.
struct EnsembleMember {
    std::uint64_t seed_id = 0;
    Field uB;
    Field uT;
    std::optional<Field> u;   // shock field, when attached
    double b_track = 0.0;     // sub-node shock position left after a nearest-node shift
    double weight = 1.0;
};

/// (v_T - v_B)(b) / normalization. Throws DomainError on a nonpositive gap.
double tilt_weight(const EnsembleMember& m, const TiltSpec& tilt);

struct Observable {
    std::string name;
    std::function<double(const EnsembleMember&)> fn;
};

/// The built-in observables at anchor b: gap_at_anchor, shock_L1_to_explicit
/// (needs an attached shock), mean_profile_at(x) and u_at(x) at offsets x
/// in {-2, -1.5, ..., 2}. Values are clipped to [-bound, bound].
std::vector<Observable> builtin_observables(double anchor, double gamma, double bound = 100.0);

/// Observable by name (e.g. "u_at(-0.5)"); throws ConfigError when unknown.
Observable find_observable(const std::vector<Observable>& all, const std::string& name);

struct Estimate {
    double value;
    double stderr_;
};

/// Self-normalized mean sum w F / sum w with a jackknife standard error.
/// Entries are reduced in seed order, so the result does not depend on
/// the order members arrive in.
struct WeightedSample {
    std::uint64_t id;
    double value;
    double weight;
};
Estimate weighted_mean(std::vector<WeightedSample> samples);

/// Weighted estimate of F over the ensemble; weights from the tilt when
/// given, else each member's stored weight.
Estimate weighted_stats(std::span<const EnsembleMember> ensemble, const Observable& F,
                        const std::optional<TiltSpec>& tilt = std::nullopt);

/// Nearest-node cyclic shift placing x at b: f'_j = f_{(j + k) mod n}, k = round((x - b)/dx).
std::ptrdiff_t shift_cells(const GridSpec& g, double x, double b);
EnsembleMember shift_member(const EnsembleMember& m, std::ptrdiff_t k);

/// Size-biased shift: zeta = u01 * P with P the period increment of
/// Z-bar_b, x = Z-bar_b^{-1}(zeta), and the member shifted to put x at b.
/// The result has weight 1.
EnsembleMember shift_sample(const EnsembleMember& m, double b, double u01);

struct StationarityEntry {
    std::string name;
    double est_t0;
    double se_t0;
    double est_t1;
    double se_t1;
    double z;
    bool pass;
};

struct StationarityReport {
    std::vector<StationarityEntry> entries;
    double pass_fraction;
    std::size_t passed() const;
};

struct StationarityOptions {
    double z_crit = 3.0;
    /// Resolution floor added in quadrature to the standard error: the
    /// discretization noise a finite grid imposes on any comparison.
    double floor = 0.0;
    std::optional<TiltSpec> tilt_t0;
    std::optional<TiltSpec> tilt_t1;
};

/// Two-sample z-test per observable. Both ensembles need at least 30 members.
StationarityReport stationarity_report(std::span<const EnsembleMember> t0, std::span<const EnsembleMember> t1,
                                       const std::vector<Observable>& observables,
                                       const StationarityOptions& opts = {});

} // namespace shocklab
