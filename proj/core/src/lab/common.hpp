#pragma once

// Helpers shared by the command implementations.

#include <string>
#include <vector>

#include "shocklab/lab/commands.hpp"
#include "shocklab/simulation.hpp"

namespace shocklab::lab::detail {

/// Output times k * every for k = 1.. up to and including the horizon.
std::vector<double> output_times(double horizon, double every);

/// Advances sim to target in admissible steps.
void advance(Simulation& sim, double target);

/// Writes <dir>/<experiment>_s<seed>_<name>_t<t>.csv when dir is set.
SnapshotSink snapshot_sink(const RunContext& ctx, const std::string& experiment, std::uint64_t seed);

/// Uniform on [0, 1) from (seed, stream, index), 53 random bits.
double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

GridSpec periodic_grid(const RealizationConfig& rc);

} // namespace shocklab::lab::detail
