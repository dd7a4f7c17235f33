// Independent straight-line references used to cross-check the library.
// These deliberately recompute everything from scratch instead of sharing
// the incremental state kept by the implementation.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "ferryline/geo.hpp"
#include "ferryline/trace.hpp"
#include "ferryline/world.hpp"

namespace oracle {

// --- hiring policy references -------------------------------------------

inline std::vector<bool> ref_fixed_threshold(
    const std::vector<std::int64_t>& ds, std::int64_t tau) {
    std::vector<bool> out;
    for (auto d : ds) out.push_back(d <= tau);
    return out;
}

inline std::vector<bool> ref_above_mean(const std::vector<std::int64_t>& ds) {
    std::vector<bool> out;
    std::vector<std::int64_t> accepted;
    for (auto d : ds) {
        bool take;
        if (accepted.empty()) {
            take = true;
        } else {
            const double mean =
                static_cast<double>(std::accumulate(accepted.begin(),
                                                    accepted.end(),
                                                    std::int64_t{0})) /
                static_cast<double>(accepted.size());
            take = static_cast<double>(d) < mean;
        }
        if (take) accepted.push_back(d);
        out.push_back(take);
    }
    return out;
}

inline std::vector<bool> ref_above_median(const std::vector<std::int64_t>& ds) {
    std::vector<bool> out;
    std::vector<std::int64_t> accepted;
    std::int64_t median = 0;
    for (auto d : ds) {
        bool take;
        if (accepted.empty())
            take = true;
        else
            take = d < median;
        if (take) {
            accepted.push_back(d);
            if (accepted.size() % 2 == 1) {
                auto sorted = accepted;
                std::sort(sorted.begin(), sorted.end());
                median = sorted[sorted.size() / 2];
            }
        }
        out.push_back(take);
    }
    return out;
}

// --- offer extraction reference -----------------------------------------

struct OfferKey {
    std::string block;
    std::int64_t time;
    std::int64_t delay;
    std::string vehicle;

    auto operator<=>(const OfferKey&) const = default;
};

/// Quadratic scan over the raw records: for every entry event, search the
/// whole trace for the same vehicle's earliest later visit to the SCMC.
inline std::vector<OfferKey> ref_extract_offers(const ferryline::TraceSet& t,
                                                const ferryline::CellId& scmc,
                                                int precision) {
    using ferryline::encode;
    const auto& rs = t.records;
    std::vector<OfferKey> raw;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        const auto cell = encode(rs[i].position, precision);
        if (cell == scmc) continue;
        // entry = no earlier record of this vehicle, or the latest earlier
        // record sits in a different cell
        bool entry = true;
        std::int64_t best_prev = -1;
        std::size_t prev_idx = 0;
        for (std::size_t j = 0; j < rs.size(); ++j) {
            if (j == i || rs[j].vehicle_id != rs[i].vehicle_id) continue;
            if (rs[j].timestamp < rs[i].timestamp &&
                rs[j].timestamp > best_prev) {
                best_prev = rs[j].timestamp;
                prev_idx = j;
            }
        }
        if (best_prev >= 0)
            entry = encode(rs[prev_idx].position, precision) != cell;
        if (!entry) continue;
        std::int64_t earliest = -1;
        for (std::size_t j = 0; j < rs.size(); ++j) {
            if (rs[j].vehicle_id != rs[i].vehicle_id) continue;
            if (rs[j].timestamp <= rs[i].timestamp) continue;
            if (encode(rs[j].position, precision) != scmc) continue;
            if (earliest < 0 || rs[j].timestamp < earliest)
                earliest = rs[j].timestamp;
        }
        if (earliest < 0) continue;
        raw.push_back({cell.code(), rs[i].timestamp,
                       earliest - rs[i].timestamp, rs[i].vehicle_id});
    }
    // collapse identical (block, time) to min delay, then min vehicle id
    std::sort(raw.begin(), raw.end());
    std::vector<OfferKey> out;
    for (const auto& o : raw) {
        if (!out.empty() && out.back().block == o.block &&
            out.back().time == o.time)
            continue;
        out.push_back(o);
    }
    return out;
}

// --- committed replay reference -----------------------------------------

struct ReplayResult {
    std::size_t accepted{0};
    double avg_waiting{0};
    double avg_delivery{0};
    double avg_overall{0};
};

/// Straight-line committed replay of one block for a fixed accept mask.
inline ReplayResult ref_replay(const std::vector<ferryline::FerryOffer>& offers,
                               const std::vector<bool>& accept,
                               std::int64_t stream_start) {
    ReplayResult r;
    std::int64_t last = stream_start;
    double sw = 0, sd = 0;
    for (std::size_t i = 0; i < offers.size(); ++i) {
        if (!accept[i]) continue;
        sw += static_cast<double>(offers[i].time - last);
        sd += static_cast<double>(offers[i].delivery_delay);
        last = offers[i].time;
        ++r.accepted;
    }
    if (r.accepted > 0) {
        r.avg_waiting = sw / static_cast<double>(r.accepted);
        r.avg_delivery = sd / static_cast<double>(r.accepted);
        r.avg_overall = r.avg_waiting + r.avg_delivery;
    }
    return r;
}

}  // namespace oracle
