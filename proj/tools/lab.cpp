// lab: configuration-driven experiment runner.
//
//   lab verify|simulate|stationarity|stability|colehopf --config FILE
//       [--seed N] [--out DIR] [--workers K] [--set key=value]...
//
// Writes DIR/report.ndjson (and DIR/snapshots/*.csv when
// output.snapshots is true). Exit status 1 iff a hard check failed,
// 2 on configuration or runtime errors.

#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <iostream>
#include <map>

#include "shocklab/errors.hpp"
#include "shocklab/lab/commands.hpp"

namespace lab = shocklab::lab;

int main(int argc, char** argv) {
    CLI::App app{"Viscous shock laboratory for the stochastic Burgers equation"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::string out_dir = "out";
    std::vector<std::string> overrides;

    using Runner = std::function<lab::CommandOutcome(const lab::Config&, const lab::RunContext&)>;
    const std::map<std::string, std::pair<std::string, Runner>> commands{
        {"verify", {"Exact shock identities and the zero-noise convergence order", lab::cmd_verify}},
        {"simulate", {"Direct simulation of the triple against the explicit shock", lab::cmd_simulate}},
        {"stationarity", {"Two-ensemble test of the tilted measure in the shock frame", lab::cmd_stationarity}},
        {"stability", {"L1 convergence of sandwiched data onto the shock", lab::cmd_stability}},
        {"colehopf", {"Burgers, KPZ and SHE representations of the same velocity", lab::cmd_colehopf}},
    };
    for (const auto& [name, entry] : commands) {
        auto* sub = app.add_subcommand(name, entry.first);
        sub->add_option("--config", config_path, "YAML config file")->check(CLI::ExistingFile);
        sub->add_option("--seed", seed, "master seed (overrides noise.seed)");
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        sub->add_option("--workers", workers, "worker threads (default: run.workers, then LAB_WORKERS)");
        sub->add_option("--set", overrides, "override a config key, key=value")->take_all();
    }

    CLI11_PARSE(app, argc, argv);

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        lab::Config config = config_path.empty() ? lab::Config() : lab::Config::from_file(config_path);
        for (const auto& kv : overrides) config.set_assignment(kv);
        auto ctx = lab::make_context(config, seed, workers);
        const std::filesystem::path out(out_dir);
        if (config.flag("output.snapshots")) ctx.snapshot_dir = out / "snapshots";

        const auto outcome = commands.at(name).second(config, ctx);
        outcome.report.write(out / "report.ndjson");
        std::cout << name << ": " << outcome.report.size() << " records -> " << (out / "report.ndjson").string()
                  << '\n'
                  << outcome.summary.dump(2) << '\n';
        if (outcome.hard_failure()) {
            for (const auto& r : outcome.report.sorted())
                if (r.value("hard", false) && !r.value("pass", true)) std::cerr << "FAILED " << r.dump() << '\n';
            return 1;
        }
        return 0;
    } catch (const shocklab::Error& e) {
        std::cerr << "lab " << name << ": " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "lab " << name << ": unexpected error: " << e.what() << '\n';
        return 2;
    }
}
