#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ferryline/errors.hpp"
#include "ferryline/geo.hpp"
#include "ferryline/rng.hpp"
#include "ferryline/trace.hpp"

namespace ferryline {

struct DelayDistribution {
    enum class Kind { lognormal, pareto };
    Kind kind{Kind::lognormal};
    // lognormal: a = mean of log-seconds, b = sigma of log-seconds
    // pareto:    a = scale (seconds),     b = shape
    double a{0.0};
    double b{0.0};

    void validate() const {
        if (kind == Kind::pareto) {
            if (!(a > 0.0)) throw ConfigError("pareto scale must be > 0");
            if (!(b > 0.0)) throw ConfigError("pareto shape must be > 0");
        } else {
            if (!std::isfinite(a)) throw ConfigError("lognormal log-mean not finite");
            if (!(b >= 0.0)) throw ConfigError("lognormal sigma must be >= 0");
        }
    }

    std::int64_t sample_seconds(SplitMix64& rng) const {
        const double v = kind == Kind::pareto ? rng.pareto(a, b)
                                              : rng.lognormal(a, b);
        return std::max<std::int64_t>(1, std::llround(v));
    }
};

struct SegmentSpec {
    std::int64_t duration_s{0};
    double rate_per_min{0.0};        // Poisson arrival rate, vehicles/minute
    double scmc_pass_probability{1.0};
    DelayDistribution delay;
};

struct SyntheticBlock {
    GeoPoint center;
    std::vector<SegmentSpec> segments;
};

struct SyntheticSpec {
    GeoPoint scmc;
    std::vector<SyntheticBlock> blocks;
    std::int64_t start_time{0};
    std::int64_t anchor_interval_s{60};
    int precision{7};

    std::int64_t horizon_s() const {
        std::int64_t h = 0;
        for (const auto& b : blocks) {
            std::int64_t span = 0;
            for (const auto& s : b.segments) span += s.duration_s;
            h = std::max(h, span);
        }
        return h;
    }

    void validate() const {
        check_point(scmc);
        check_precision(precision);
        if (anchor_interval_s <= 0)
            throw ConfigError("anchor_interval_s must be > 0");
        if (horizon_s() <= 0)
            throw ConfigError("synthetic horizon must be > 0");
        const CellId scmc_cell = encode(scmc, precision);
        for (const auto& b : blocks) {
            check_point(b.center);
            if (encode(b.center, precision) == scmc_cell)
                throw ConfigError(
                    "synthetic block center falls in the SCMC cell " +
                    scmc_cell.code());
            if (b.segments.empty())
                throw ConfigError("synthetic block has no segments");
            for (const auto& s : b.segments) {
                if (s.duration_s <= 0)
                    throw ConfigError("segment duration must be > 0");
                if (!(s.rate_per_min >= 0.0))
                    throw ConfigError("segment rate must be >= 0");
                if (!(s.scmc_pass_probability >= 0.0 &&
                      s.scmc_pass_probability <= 1.0))
                    throw ConfigError("scmc_pass_probability must be in [0, 1]");
                s.delay.validate();
            }
        }
    }
};

struct SynthStats {
    std::size_t arrivals{0};
    std::size_t candidates{0};  // arrivals that pass through the SCMC
    std::size_t anchors{0};
    std::vector<std::int64_t> segment_boundaries;  // absolute times, per spec
};

/// Generate a trace realizing the spec. Each candidate arrival becomes two
/// records: one in its block and one in the SCMC cell d seconds later, so
/// offer extraction recovers (block, time, d) exactly. Anchor vehicles keep
/// the SCMC the most-entered cell.
inline TraceSet synthesize(const SyntheticSpec& spec, std::uint64_t seed,
                           SynthStats* stats = nullptr) {
    spec.validate();
    SynthStats local;
    TraceSet out;
    out.day_span = 1;

    std::vector<std::size_t> entries_per_block(spec.blocks.size(), 0);
    for (std::size_t bi = 0; bi < spec.blocks.size(); ++bi) {
        const auto& block = spec.blocks[bi];
        SplitMix64 rng(derive_seed(seed, bi));
        std::int64_t seg_start = spec.start_time;
        std::size_t vehicle_no = 0;
        for (std::size_t si = 0; si < block.segments.size(); ++si) {
            const auto& seg = block.segments[si];
            const std::int64_t seg_end = seg_start + seg.duration_s;
            if (bi == 0) local.segment_boundaries.push_back(seg_end);
            if (seg.rate_per_min > 0.0) {
                const double mean_gap_s = 60.0 / seg.rate_per_min;
                double t = static_cast<double>(seg_start);
                for (;;) {
                    t += rng.exponential(mean_gap_s);
                    const auto ti = static_cast<std::int64_t>(std::llround(t));
                    if (ti >= seg_end) break;
                    ++local.arrivals;
                    ++entries_per_block[bi];
                    std::string vid = "b" + std::to_string(bi) + "v" +
                                      std::to_string(vehicle_no++);
                    const bool candidate =
                        rng.uniform() < seg.scmc_pass_probability;
                    out.records.push_back(
                        {vid, ti, block.center, 0.0, 0.0});
                    if (candidate) {
                        ++local.candidates;
                        const std::int64_t d = seg.delay.sample_seconds(rng);
                        out.records.push_back(
                            {std::move(vid), ti + d, spec.scmc, 0.0, 0.0});
                    }
                }
            }
            seg_start = seg_end;
        }
    }

    // Enough single-record anchor vehicles that the SCMC cell strictly wins
    // the entry count, plus at least one so an all-zero-rate spec still
    // yields a non-empty trace.
    std::size_t max_block_entries = 0;
    for (std::size_t n : entries_per_block)
        max_block_entries = std::max(max_block_entries, n);
    const std::size_t needed =
        max_block_entries > local.candidates
            ? max_block_entries - local.candidates + 1
            : 1;
    const std::int64_t horizon = spec.horizon_s();
    for (std::size_t k = 0; k < needed; ++k) {
        const std::int64_t t =
            spec.start_time +
            std::min<std::int64_t>(
                horizon - 1, static_cast<std::int64_t>(k) *
                                 spec.anchor_interval_s % horizon);
        out.records.push_back(
            {"anchor" + std::to_string(k), t, spec.scmc, 0.0, 0.0});
    }
    local.anchors = needed;

    detail::normalize(out.records);
    if (stats) *stats = std::move(local);
    return out;
}

}  // namespace ferryline
