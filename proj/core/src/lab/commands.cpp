#include <cmath>
#include <cstdio>
#include <fstream>

#include "common.hpp"
#include "shocklab/errors.hpp"
#include "shocklab/lab/parallel.hpp"
#include "shocklab/philox.hpp"

namespace shocklab::lab {

RunContext make_context(const Config& c, std::optional<std::uint64_t> seed_override,
                        std::optional<unsigned> workers_override) {
    RunContext ctx;
    const auto seed = c.integer("noise.seed");
    if (seed < 0) throw ConfigError("noise.seed must be nonnegative");
    ctx.seed = seed_override.value_or(static_cast<std::uint64_t>(seed));
    const auto w = c.integer("run.workers");
    ctx.workers = workers_override.value_or(w > 0 ? static_cast<unsigned>(w) : default_workers());
    if (ctx.workers == 0) ctx.workers = default_workers();
    return ctx;
}

namespace detail {

std::vector<double> output_times(double horizon, double every) {
    if (!(horizon > 0.0) || !(every > 0.0)) throw ConfigError("time.horizon and time.output_every must be positive");
    std::vector<double> out;
    const auto k = static_cast<std::size_t>(std::floor(horizon / every + 1e-9));
    for (std::size_t i = 1; i <= k; ++i) out.push_back(std::min(horizon, static_cast<double>(i) * every));
    if (out.empty() || horizon - out.back() > 1e-12 * horizon) out.push_back(horizon);
    return out;
}

void advance(Simulation& sim, double target) { sim.advance_to(target); }

SnapshotSink snapshot_sink(const RunContext& ctx, const std::string& experiment, std::uint64_t seed) {
    if (!ctx.snapshot_dir) return {};
    const auto dir = *ctx.snapshot_dir;
    std::filesystem::create_directories(dir);
    return [dir, experiment, seed](double t, const std::string& name, const Field& f) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "_t%.4f.csv", t);
        const auto path = dir / (experiment + "_s" + std::to_string(seed) + "_" + name + buf);
        std::ofstream out(path);
        if (!out) throw ConfigError("cannot write snapshot " + path.string());
        write_csv(out, f);
    };
}

double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    // The top counter word is 0x5eed0000-tagged so these never coincide
    // with forcing counters, whose last word is a realization index.
    const auto r = Philox4x32::bijection(
        {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
         static_cast<std::uint32_t>(stream), 0x5eed0000u ^ static_cast<std::uint32_t>(stream >> 32)},
        {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
    const std::uint64_t bits = (static_cast<std::uint64_t>(r[0]) << 21) ^ (r[1] >> 11);
    return static_cast<double>(bits & ((1ull << 53) - 1)) * 0x1.0p-53;
}

GridSpec periodic_grid(const RealizationConfig& rc) { return GridSpec(rc.L, rc.n, Topology::periodic); }

} // namespace detail
} // namespace shocklab::lab
