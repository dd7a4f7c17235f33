#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ferryline/errors.hpp"
#include "ferryline/log.hpp"
#include "ferryline/report_io.hpp"
#include "ferryline/sim.hpp"
#include "ferryline/synth.hpp"
#include "ferryline/trace.hpp"
#include "ferryline/world.hpp"

namespace ferryline {

/// One experiment configuration: a trace source plus the grid of
/// (selector, day-span) runs to execute over it.
struct ExperimentSpec {
    std::optional<std::string> csv_path;
    std::optional<SyntheticSpec> synthetic;
    int precision{7};
    std::vector<int> days{5, 10, 15, 20, 25};
    std::vector<Selector> selectors{Selector::low, Selector::high,
                                    Selector::mean, Selector::median,
                                    Selector::ensemble};
    std::string out_dir{"."};
    std::int64_t period_s{1800};
    WaitingMode waiting_mode{WaitingMode::per_algorithm};
    double p_low{2.0};
    double p_high{95.0};
    std::uint64_t seed{0};
    unsigned threads{0};  // 0 = all cores

    void validate() const {
        if (!csv_path && !synthetic)
            throw ConfigError("config: input needs either 'csv' or 'synthetic'");
        if (csv_path && synthetic)
            throw ConfigError("config: 'csv' and 'synthetic' are exclusive");
        check_precision(precision);
        if (days.empty()) throw ConfigError("config: days list is empty");
        for (int d : days)
            if (d < 1) throw ConfigError("config: days entries must be >= 1");
        if (selectors.empty())
            throw ConfigError("config: selectors list is empty");
        if (!(p_low > 0.0 && p_low <= 100.0) ||
            !(p_high > 0.0 && p_high <= 100.0))
            throw ConfigError("config: percentiles must be in (0, 100]");
        if (period_s <= 0) throw ConfigError("config: S_seconds must be > 0");
        if (synthetic) synthetic->validate();
    }
};

namespace detail {

inline Selector parse_selector(const std::string& s) {
    if (s == "low") return Selector::low;
    if (s == "high") return Selector::high;
    if (s == "mean") return Selector::mean;
    if (s == "median") return Selector::median;
    if (s == "ensemble") return Selector::ensemble;
    throw ConfigError("unknown selector: " + s);
}

inline WaitingMode parse_waiting_mode(const std::string& s) {
    if (s == "per_algorithm") return WaitingMode::per_algorithm;
    if (s == "shared") return WaitingMode::shared;
    throw ConfigError("unknown waiting_mode: " + s);
}

inline GeoPoint parse_point(const nlohmann::json& j) {
    return {j.at("latitude").get<double>(), j.at("longitude").get<double>()};
}

inline DelayDistribution parse_delay(const nlohmann::json& j) {
    DelayDistribution d;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "lognormal") {
        d.kind = DelayDistribution::Kind::lognormal;
        d.a = j.at("log_mean").get<double>();
        d.b = j.at("log_sigma").get<double>();
    } else if (kind == "pareto") {
        d.kind = DelayDistribution::Kind::pareto;
        d.a = j.at("scale").get<double>();
        d.b = j.at("shape").get<double>();
    } else {
        throw ConfigError("unknown delay distribution kind: " + kind);
    }
    return d;
}

inline SyntheticSpec parse_synthetic(const nlohmann::json& j) {
    SyntheticSpec spec;
    spec.scmc = parse_point(j.at("scmc"));
    if (j.contains("start_time"))
        spec.start_time = j.at("start_time").get<std::int64_t>();
    if (j.contains("anchor_interval_s"))
        spec.anchor_interval_s = j.at("anchor_interval_s").get<std::int64_t>();
    if (j.contains("precision"))
        spec.precision = j.at("precision").get<int>();
    for (const auto& jb : j.at("blocks")) {
        SyntheticBlock b;
        b.center = parse_point(jb.at("center"));
        for (const auto& js : jb.at("segments")) {
            SegmentSpec s;
            s.duration_s = js.at("duration_s").get<std::int64_t>();
            s.rate_per_min = js.at("rate_per_min").get<double>();
            if (js.contains("scmc_pass_probability"))
                s.scmc_pass_probability =
                    js.at("scmc_pass_probability").get<double>();
            s.delay = parse_delay(js.at("delay"));
            b.segments.push_back(std::move(s));
        }
        spec.blocks.push_back(std::move(b));
    }
    return spec;
}

}  // namespace detail

inline ExperimentSpec parse_experiment(const nlohmann::json& j) {
    ExperimentSpec spec;
    try {
        const auto& input = j.at("input");
        if (input.contains("csv"))
            spec.csv_path = input.at("csv").get<std::string>();
        if (input.contains("synthetic"))
            spec.synthetic = detail::parse_synthetic(input.at("synthetic"));
        if (j.contains("precision"))
            spec.precision = j.at("precision").get<int>();
        if (j.contains("days"))
            spec.days = j.at("days").get<std::vector<int>>();
        if (j.contains("selectors")) {
            spec.selectors.clear();
            for (const auto& s : j.at("selectors"))
                spec.selectors.push_back(
                    detail::parse_selector(s.get<std::string>()));
        }
        if (j.contains("out")) spec.out_dir = j.at("out").get<std::string>();
        if (j.contains("S_seconds"))
            spec.period_s = j.at("S_seconds").get<std::int64_t>();
        if (j.contains("waiting_mode"))
            spec.waiting_mode = detail::parse_waiting_mode(
                j.at("waiting_mode").get<std::string>());
        if (j.contains("p_low")) spec.p_low = j.at("p_low").get<double>();
        if (j.contains("p_high")) spec.p_high = j.at("p_high").get<double>();
        if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("threads"))
            spec.threads = j.at("threads").get<unsigned>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    spec.validate();
    return spec;
}

inline ExperimentSpec load_experiment(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file not found: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return parse_experiment(j);
}

/// Combined comparison table across all runs of one experiment.
/// Columns: selector,days,traffic_class,blocks,accepted,
///          avg_waiting_min,avg_delivery_min,avg_overall_min
inline std::string comparison_header() {
    return "selector,days,traffic_class,blocks,accepted,"
           "avg_waiting_min,avg_delivery_min,avg_overall_min\n";
}

inline void append_comparison_rows(std::string& table, const Report& rep) {
    for (const auto& [cls, agg] : rep.classes) {
        table += to_string(rep.config.selector);
        table += ',';
        table += std::to_string(rep.config.days);
        table += ',';
        table += to_string(cls);
        table += ',';
        table += std::to_string(agg.block_count);
        table += ',';
        table += std::to_string(agg.accepted_total);
        table += ',';
        table += minutes_str(agg.avg_waiting_s);
        table += ',';
        table += minutes_str(agg.avg_delivery_s);
        table += ',';
        table += minutes_str(agg.avg_overall_s);
        table += '\n';
    }
}

inline TraceSet load_input_trace(const ExperimentSpec& spec,
                                 SynthStats* stats = nullptr) {
    if (spec.csv_path) {
        LoadStats ls;
        TraceSet t = load_csv(*spec.csv_path, &ls);
        if (ls.malformed_rows > 0)
            log::warn("%s: %zu malformed rows skipped", spec.csv_path->c_str(),
                      ls.malformed_rows);
        if (ls.duplicate_rows > 0)
            log::info("%s: %zu duplicate rows collapsed",
                      spec.csv_path->c_str(), ls.duplicate_rows);
        return t;
    }
    return synthesize(*spec.synthetic, spec.seed, stats);
}

/// Execute every (selector, days) combination and write all report files.
inline void run_all(const ExperimentSpec& spec) {
    namespace fs = std::filesystem;
    spec.validate();
    fs::create_directories(spec.out_dir);

    const TraceSet base = load_input_trace(spec);
    std::string comparison = comparison_header();

    for (int days : spec.days) {
        const TraceSet t = days == 1 ? base : replicate_days(base, days);
        WorldConfig wc{spec.precision, spec.p_low, spec.p_high};
        const World world = build_world(t, wc);
        if (world.degenerate_classes)
            log::warn("traffic classification degenerate: stddev %.2f < mean "
                      "%.2f, medium band is empty",
                      world.count_stddev, world.count_mean);
        log::info("days=%d: %zu profiled blocks, scmc=%s", days,
                  world.profiles.size(), world.scmc.code().c_str());

        for (Selector sel : spec.selectors) {
            RunConfig cfg;
            cfg.selector = sel;
            cfg.period_s = spec.period_s;
            cfg.waiting_mode = spec.waiting_mode;
            cfg.p_low = spec.p_low;
            cfg.p_high = spec.p_high;
            cfg.days = days;
            cfg.seed = spec.seed;
            const Report rep = run_experiment(world, cfg, spec.threads);

            const std::string stem = std::string("report_") + to_string(sel) +
                                     "_" + std::to_string(days) + "d";
            write_text_file((fs::path(spec.out_dir) / (stem + ".json")).string(),
                            report_to_json(rep).dump(2) + "\n");
            write_text_file((fs::path(spec.out_dir) / (stem + ".csv")).string(),
                            report_csv(rep));
            if (sel == Selector::ensemble) {
                for (const auto& b : rep.blocks) {
                    const std::string name =
                        "switching_" + b.block.code() + "_" +
                        std::to_string(days) + "d.csv";
                    write_text_file((fs::path(spec.out_dir) / name).string(),
                                    hourly_series_csv(b));
                }
                write_text_file(
                    (fs::path(spec.out_dir) /
                     ("switch_events_" + std::to_string(days) + "d.csv"))
                        .string(),
                    switch_events_csv(rep));
            }
            append_comparison_rows(comparison, rep);
        }
    }
    write_text_file((fs::path(spec.out_dir) / "comparison.csv").string(),
                    comparison);
}

}  // namespace ferryline
