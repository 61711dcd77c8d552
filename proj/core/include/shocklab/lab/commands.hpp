#pragma once

// The five experiment runners behind the `lab` executable. Each returns its
// records and a short summary; nothing here touches the process exit code.

#include <cstdint>
#include <filesystem>
#include <optional>

#include "shocklab/lab/config.hpp"
#include "shocklab/lab/report.hpp"

namespace shocklab::lab {

struct RunContext {
    std::uint64_t seed = 0;           // master seed
    unsigned workers = 1;
    std::optional<std::filesystem::path> snapshot_dir;  // CSV snapshots when set
};

struct CommandOutcome {
    Report report;
    Json summary = Json::object();
    bool hard_failure() const noexcept { return report.hard_failure(); }
};

/// Master seed: noise.seed unless overridden on the command line.
RunContext make_context(const Config& c, std::optional<std::uint64_t> seed_override = std::nullopt,
                        std::optional<unsigned> workers_override = std::nullopt);

/// Exact shock identities on constant and wiggly pairs: L1 = |gamma - gamma'|,
/// tail integrals, label/center round trip, tanh reduction, shock-frame
/// round trip and the flux gap of the exact profile. Checks are hard only
/// when n >= 512; coarser grids report them as informational.
void verify_identities(const Config& c, Report& report, Json& summary);

/// Zero-noise travelling wave at each verify.order_levels grid; the L1 error
/// against the moving tanh profile gives the observed order.
void verify_order_study(const Config& c, Report& report, Json& summary);

CommandOutcome cmd_verify(const Config& c, const RunContext& ctx);
CommandOutcome cmd_simulate(const Config& c, const RunContext& ctx);
CommandOutcome cmd_stationarity(const Config& c, const RunContext& ctx);
CommandOutcome cmd_stability(const Config& c, const RunContext& ctx);
CommandOutcome cmd_colehopf(const Config& c, const RunContext& ctx);

} // namespace shocklab::lab
