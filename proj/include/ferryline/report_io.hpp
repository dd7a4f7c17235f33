#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "json.hpp"

#include "ferryline/errors.hpp"
#include "ferryline/sim.hpp"

namespace ferryline {

/// Delays are reported in minutes with two decimals; internals stay in
/// seconds.
inline double seconds_to_report_minutes(double seconds) {
    return std::round(seconds / 60.0 * 100.0) / 100.0;
}

inline std::string minutes_str(const std::optional<double>& seconds) {
    if (!seconds) return "";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", *seconds / 60.0);
    return buf;
}

inline nlohmann::json report_to_json(const Report& rep) {
    using nlohmann::json;
    auto opt_min = [](const std::optional<double>& s) {
        return s ? json(seconds_to_report_minutes(*s)) : json(nullptr);
    };

    json cfg;
    cfg["selector"] = to_string(rep.config.selector);
    cfg["S_seconds"] = rep.config.period_s;
    cfg["waiting_mode"] = to_string(rep.config.waiting_mode);
    cfg["p_low"] = rep.config.p_low;
    cfg["p_high"] = rep.config.p_high;
    cfg["days"] = rep.config.days;
    cfg["seed"] = rep.config.seed;

    json blocks = json::array();
    for (const auto& b : rep.blocks) {
        json jb;
        jb["block"] = b.block.code();
        jb["traffic_class"] = to_string(b.traffic_class);
        jb["offer_count"] = b.offer_count;
        jb["accepted_count"] = b.accepted_count;
        jb["avg_waiting_min"] = opt_min(b.avg_waiting_s);
        jb["avg_delivery_min"] = opt_min(b.avg_delivery_s);
        jb["avg_overall_min"] = opt_min(b.avg_overall_s);
        jb["switch_count"] = b.switches.size();
        blocks.push_back(std::move(jb));
    }

    json classes;
    for (const auto& [cls, agg] : rep.classes) {
        json jc;
        jc["block_count"] = agg.block_count;
        jc["counted_blocks"] = agg.counted_blocks;
        jc["accepted_total"] = agg.accepted_total;
        jc["avg_waiting_min"] = opt_min(agg.avg_waiting_s);
        jc["avg_delivery_min"] = opt_min(agg.avg_delivery_s);
        jc["avg_overall_min"] = opt_min(agg.avg_overall_s);
        classes[to_string(cls)] = std::move(jc);
    }

    json out;
    out["config"] = std::move(cfg);
    out["scmc"] = rep.scmc.code();
    out["trace_digest"] = rep.trace_digest;
    out["stream_start"] = rep.stream_start;
    out["stream_end"] = rep.stream_end;
    out["degenerate_classes"] = rep.degenerate_classes;
    out["blocks"] = std::move(blocks);
    out["classes"] = std::move(classes);
    return out;
}

/// Per-block metrics table.
/// Columns: block,traffic_class,offer_count,accepted_count,
///          avg_waiting_min,avg_delivery_min,avg_overall_min
inline std::string report_csv(const Report& rep) {
    std::string out =
        "block,traffic_class,offer_count,accepted_count,"
        "avg_waiting_min,avg_delivery_min,avg_overall_min\n";
    for (const auto& b : rep.blocks) {
        out += b.block.code();
        out += ',';
        out += to_string(b.traffic_class);
        out += ',';
        out += std::to_string(b.offer_count);
        out += ',';
        out += std::to_string(b.accepted_count);
        out += ',';
        out += minutes_str(b.avg_waiting_s);
        out += ',';
        out += minutes_str(b.avg_delivery_s);
        out += ',';
        out += minutes_str(b.avg_overall_s);
        out += '\n';
    }
    return out;
}

/// Hourly switching series for one block.
/// Columns: hour,active,accepted,avg_overall_min
inline std::string hourly_series_csv(const BlockMetrics& b) {
    std::string out = "hour,active,accepted,avg_overall_min\n";
    for (const auto& h : b.hourly) {
        out += std::to_string(h.hour);
        out += ',';
        out += to_string(h.active);
        out += ',';
        out += std::to_string(h.accepted);
        out += ',';
        out += minutes_str(h.avg_overall_s);
        out += '\n';
    }
    return out;
}

/// Switch-event log across all blocks of one report.
/// Columns: block,time,from,to,avg_low_min,avg_high_min,avg_mean_min,
///          avg_median_min
inline std::string switch_events_csv(const Report& rep) {
    std::string out =
        "block,time,from,to,avg_low_min,avg_high_min,avg_mean_min,"
        "avg_median_min\n";
    for (const auto& b : rep.blocks) {
        for (const auto& s : b.switches) {
            out += b.block.code();
            out += ',';
            out += std::to_string(s.time);
            out += ',';
            out += to_string(s.from);
            out += ',';
            out += to_string(s.to);
            for (const auto& avg : s.window_averages) {
                out += ',';
                out += minutes_str(avg);
            }
            out += '\n';
        }
    }
    return out;
}

/// Inspection dump of a built world: SCMC plus per-block profile.
inline nlohmann::json world_to_json(const World& w) {
    using nlohmann::json;
    json blocks;
    for (const auto& [cell, p] : w.profiles) {
        json jb;
        jb["offer_count"] = p.offer_count;
        jb["tau_low"] = p.tau_low;
        jb["tau_high"] = p.tau_high;
        jb["traffic_class"] = to_string(p.traffic_class);
        blocks[cell.code()] = std::move(jb);
    }
    json out;
    out["scmc"] = w.scmc.code();
    out["count_mean"] = w.count_mean;
    out["count_stddev"] = w.count_stddev;
    out["degenerate_classes"] = w.degenerate_classes;
    out["blocks"] = std::move(blocks);
    return out;
}

inline void write_text_file(const std::string& path,
                            const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("write failed: " + path);
}

}  // namespace ferryline
