#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "ferryline/errors.hpp"
#include "ferryline/experiment.hpp"
#include "ferryline/log.hpp"

namespace {

constexpr int kExitConfigError = 1;
constexpr int kExitDataError = 2;
constexpr int kExitInternalError = 3;

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<std::string> out_dir;
};

ferryline::ExperimentSpec load_spec(const CommonOpts& opts) {
    auto spec = ferryline::load_experiment(opts.config_path);
    if (opts.seed) spec.seed = *opts.seed;  // flag wins over config
    if (opts.threads) spec.threads = *opts.threads;
    if (opts.out_dir) spec.out_dir = *opts.out_dir;
    return spec;
}

int cmd_run(const CommonOpts& opts) {
    const auto spec = load_spec(opts);
    ferryline::run_all(spec);
    std::printf("wrote %zu selector x %zu day-span reports to %s\n",
                spec.selectors.size(), spec.days.size(), spec.out_dir.c_str());
    return 0;
}

int cmd_validate(const CommonOpts& opts) {
    load_spec(opts);
    std::printf("config ok: %s\n", opts.config_path.c_str());
    return 0;
}

int cmd_synth(const CommonOpts& opts, const std::string& trace_out) {
    const auto spec = load_spec(opts);
    if (!spec.synthetic)
        throw ferryline::ConfigError(
            "synth: config has no 'synthetic' input section");
    ferryline::SynthStats stats;
    const auto trace = ferryline::synthesize(*spec.synthetic, spec.seed, &stats);

    namespace fs = std::filesystem;
    fs::create_directories(spec.out_dir);
    const std::string path =
        trace_out.empty() ? (fs::path(spec.out_dir) / "trace.csv").string()
                          : trace_out;
    ferryline::save_csv(trace, path);

    std::printf("wrote %s: %zu records, %zu blocks, %zu arrivals, "
                "%zu candidates (%.1f%%), %zu anchors\n",
                path.c_str(), trace.records.size(),
                spec.synthetic->blocks.size(), stats.arrivals,
                stats.candidates,
                stats.arrivals == 0
                    ? 0.0
                    : 100.0 * static_cast<double>(stats.candidates) /
                          static_cast<double>(stats.arrivals),
                stats.anchors);
    std::printf("segment boundaries (s):");
    for (auto b : stats.segment_boundaries)
        std::printf(" %lld", static_cast<long long>(b));
    std::printf("\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ferryline: opportunistic data-ferry selection simulator"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string trace_out;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", opts.config_path, "experiment config JSON")
            ->required();
        cmd->add_option("--seed", opts.seed, "override config seed");
        cmd->add_option("--threads", opts.threads,
                        "worker threads (1 = single-threaded reference path)");
        cmd->add_option("--out", opts.out_dir, "override output directory");
    };

    auto* run = app.add_subcommand("run", "execute the experiment grid");
    add_common(run);
    auto* validate =
        app.add_subcommand("validate", "check the config, run nothing");
    add_common(validate);
    auto* synth =
        app.add_subcommand("synth", "write a synthetic trace CSV");
    add_common(synth);
    synth->add_option("--trace-out", trace_out,
                      "trace file path (default <out>/trace.csv)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(opts);
        if (validate->parsed()) return cmd_validate(opts);
        return cmd_synth(opts, trace_out);
    } catch (const ferryline::ConfigError& e) {
        ferryline::log::error("%s", e.what());
        return kExitConfigError;
    } catch (const ferryline::DataError& e) {
        ferryline::log::error("%s", e.what());
        return kExitDataError;
    } catch (const std::exception& e) {
        ferryline::log::error("internal error: %s", e.what());
        return kExitInternalError;
    }
}
