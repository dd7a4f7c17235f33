#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ferryline/errors.hpp"
#include "ferryline/geo.hpp"
#include "ferryline/trace.hpp"

namespace ferryline {

/// One candidate ferry appearance: a vehicle entering `block` at `time` that
/// will reach the SCMC `delivery_delay` seconds later.
struct FerryOffer {
    CellId block;
    std::string vehicle_id;
    std::int64_t time{0};
    std::int64_t delivery_delay{0};

    bool operator==(const FerryOffer&) const = default;
};

enum class TrafficClass { light, medium, high };

inline const char* to_string(TrafficClass c) {
    switch (c) {
        case TrafficClass::light: return "light";
        case TrafficClass::medium: return "medium";
        default: return "high";
    }
}

struct BlockProfile {
    CellId block;
    std::size_t offer_count{0};
    std::int64_t tau_low{0};
    std::int64_t tau_high{0};
    TrafficClass traffic_class{TrafficClass::light};
};

struct WorldConfig {
    int precision{7};
    double p_low{2.0};
    double p_high{95.0};
};

struct World {
    CellId scmc;
    std::map<CellId, std::vector<FerryOffer>> offers;
    std::map<CellId, BlockProfile> profiles;
    double count_mean{0.0};    // population mean of per-block offer counts
    double count_stddev{0.0};  // population standard deviation
    bool degenerate_classes{false};
    std::int64_t stream_start{0};
    std::int64_t stream_end{0};
    std::uint64_t digest{0};
};

namespace detail {

/// Per-vehicle view over a (timestamp, vehicle_id)-sorted trace.
struct VehicleTrack {
    std::vector<std::int64_t> times;
    std::vector<CellId> cells;
};

inline std::map<std::string, VehicleTrack> group_by_vehicle(const TraceSet& t,
                                                            int precision) {
    std::map<std::string, VehicleTrack> tracks;
    for (const auto& r : t.records) {
        auto& trk = tracks[r.vehicle_id];
        trk.times.push_back(r.timestamp);
        trk.cells.push_back(encode(r.position, precision));
    }
    return tracks;
}

}  // namespace detail

/// Cell with the most vehicle entry events. An entry is a vehicle's first
/// record or a record whose cell differs from its previous one. Ties go to
/// the lexicographically smallest cell.
inline CellId select_scmc(const TraceSet& t, int precision) {
    if (t.records.empty()) throw DataError("select_scmc: empty trace");
    std::map<CellId, std::size_t> entries;
    for (const auto& [vid, trk] : detail::group_by_vehicle(t, precision)) {
        for (std::size_t i = 0; i < trk.cells.size(); ++i) {
            if (i == 0 || trk.cells[i] != trk.cells[i - 1])
                ++entries[trk.cells[i]];
        }
    }
    const CellId* best = nullptr;
    std::size_t best_count = 0;
    for (const auto& [cell, n] : entries) {  // map order breaks ties low
        if (n > best_count) {
            best = &cell;
            best_count = n;
        }
    }
    return *best;
}

/// Per-block candidate streams. For every entry of a vehicle into block
/// b != scmc at time t, if the vehicle's own future records visit the SCMC
/// at earliest time t' > t, emit an offer with d = t' - t. Offers sharing
/// (block, time) collapse to the minimum-d one (tie: smallest vehicle id).
inline std::map<CellId, std::vector<FerryOffer>> extract_offers(
    const TraceSet& t, const CellId& scmc, int precision) {
    std::map<CellId, std::vector<FerryOffer>> streams;
    for (const auto& [vid, trk] : detail::group_by_vehicle(t, precision)) {
        std::vector<std::int64_t> scmc_times;
        for (std::size_t i = 0; i < trk.cells.size(); ++i)
            if (trk.cells[i] == scmc) scmc_times.push_back(trk.times[i]);
        if (scmc_times.empty()) continue;  // never a candidate
        for (std::size_t i = 0; i < trk.cells.size(); ++i) {
            if (trk.cells[i] == scmc) continue;
            const bool entry = i == 0 || trk.cells[i] != trk.cells[i - 1];
            if (!entry) continue;
            auto it = std::upper_bound(scmc_times.begin(), scmc_times.end(),
                                       trk.times[i]);
            if (it == scmc_times.end()) continue;
            streams[trk.cells[i]].push_back(
                {trk.cells[i], vid, trk.times[i], *it - trk.times[i]});
        }
    }
    for (auto& [cell, offers] : streams) {
        std::sort(offers.begin(), offers.end(),
                  [](const FerryOffer& a, const FerryOffer& b) {
                      if (a.time != b.time) return a.time < b.time;
                      if (a.delivery_delay != b.delivery_delay)
                          return a.delivery_delay < b.delivery_delay;
                      return a.vehicle_id < b.vehicle_id;
                  });
        auto last = std::unique(offers.begin(), offers.end(),
                                [](const FerryOffer& a, const FerryOffer& b) {
                                    return a.time == b.time;
                                });
        offers.erase(last, offers.end());
    }
    return streams;
}

/// Nearest-rank percentile: element at rank ceil(p/100 * n) of the sorted
/// values.
inline std::int64_t percentile_nearest_rank(std::vector<std::int64_t> values,
                                            double p) {
    if (values.empty())
        throw DataError("percentile_nearest_rank: empty input");
    if (!(p > 0.0 && p <= 100.0))
        throw ConfigError("percentile must be in (0, 100]");
    std::sort(values.begin(), values.end());
    const auto n = static_cast<double>(values.size());
    auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
    rank = std::clamp<std::size_t>(rank, 1, values.size());
    return values[rank - 1];
}

struct ClassificationResult {
    std::map<CellId, TrafficClass> classes;
    double mean{0.0};
    double stddev{0.0};  // population
    /// True when stddev < mean; the medium band [mean, stddev] is then empty
    /// or ill-formed and callers should surface a warning.
    bool degenerate{false};
};

/// light: N < mean; medium: mean <= N <= stddev; high: otherwise. The rules
/// are applied in that order so every block lands in exactly one class even
/// when stddev < mean.
inline ClassificationResult classify_blocks(
    const std::map<CellId, std::size_t>& counts) {
    if (counts.empty()) throw DataError("classify_blocks: no blocks");
    ClassificationResult res;
    double sum = 0.0, sumsq = 0.0;
    for (const auto& [cell, n] : counts) {
        sum += static_cast<double>(n);
        sumsq += static_cast<double>(n) * static_cast<double>(n);
    }
    const auto b = static_cast<double>(counts.size());
    res.mean = sum / b;
    res.stddev = std::sqrt(std::max(0.0, sumsq / b - res.mean * res.mean));
    res.degenerate = res.stddev < res.mean;
    for (const auto& [cell, count] : counts) {
        const auto n = static_cast<double>(count);
        TrafficClass c;
        if (n < res.mean)
            c = TrafficClass::light;
        else if (n >= res.mean && n <= res.stddev)
            c = TrafficClass::medium;
        else
            c = TrafficClass::high;
        res.classes.emplace(cell, c);
    }
    return res;
}

/// Full world construction: SCMC selection, offer extraction, inactive-block
/// filtering, percentile thresholds, and traffic classification.
inline World build_world(const TraceSet& t, const WorldConfig& cfg = {}) {
    if (t.records.empty()) throw DataError("build_world: empty trace");
    if (!(cfg.p_low > 0.0 && cfg.p_low <= 100.0) ||
        !(cfg.p_high > 0.0 && cfg.p_high <= 100.0))
        throw ConfigError("percentiles must be in (0, 100]");

    World w;
    w.scmc = select_scmc(t, cfg.precision);
    w.offers = extract_offers(t, w.scmc, cfg.precision);
    if (w.offers.empty())
        throw DataError("build_world: no SCMC-reaching candidates");

    std::map<CellId, std::size_t> counts;
    for (const auto& [cell, offers] : w.offers)
        counts.emplace(cell, offers.size());
    const auto cls = classify_blocks(counts);
    w.count_mean = cls.mean;
    w.count_stddev = cls.stddev;
    w.degenerate_classes = cls.degenerate;

    for (const auto& [cell, offers] : w.offers) {
        std::vector<std::int64_t> delays;
        delays.reserve(offers.size());
        for (const auto& o : offers) delays.push_back(o.delivery_delay);
        BlockProfile p;
        p.block = cell;
        p.offer_count = offers.size();
        p.tau_low = percentile_nearest_rank(delays, cfg.p_low);
        p.tau_high = percentile_nearest_rank(std::move(delays), cfg.p_high);
        p.traffic_class = cls.classes.at(cell);
        w.profiles.emplace(cell, std::move(p));
    }
    w.stream_start = t.start_time();
    w.stream_end = t.end_time();
    w.digest = trace_digest(t);
    return w;
}

}  // namespace ferryline
