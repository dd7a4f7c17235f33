#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ferryline/ensemble.hpp"
#include "ferryline/errors.hpp"
#include "ferryline/policy.hpp"
#include "ferryline/rng.hpp"
#include "ferryline/world.hpp"

namespace ferryline {

enum class Selector { low, high, mean, median, ensemble };

inline const char* to_string(Selector s) {
    switch (s) {
        case Selector::low: return "low";
        case Selector::high: return "high";
        case Selector::mean: return "mean";
        case Selector::median: return "median";
        default: return "ensemble";
    }
}

struct RunConfig {
    Selector selector{Selector::ensemble};
    std::int64_t period_s{1800};  // ensemble evaluation period S
    WaitingMode waiting_mode{WaitingMode::per_algorithm};
    double p_low{2.0};
    double p_high{95.0};
    int days{1};
    std::uint64_t seed{0};

    void validate() const {
        if (!(p_low > 0.0 && p_low <= 100.0) ||
            !(p_high > 0.0 && p_high <= 100.0))
            throw ConfigError("percentiles must be in (0, 100]");
        if (days < 1) throw ConfigError("days must be >= 1");
        if (period_s <= 0) throw ConfigError("S must be > 0");
    }
};

struct HourPoint {
    std::int64_t hour{0};  // hours since stream start
    PolicyKind active{PolicyKind::low};
    std::size_t accepted{0};
    std::optional<double> avg_overall_s;
};

struct BlockMetrics {
    CellId block;
    TrafficClass traffic_class{TrafficClass::light};
    std::size_t offer_count{0};
    std::size_t accepted_count{0};
    std::optional<double> avg_waiting_s;
    std::optional<double> avg_delivery_s;
    std::optional<double> avg_overall_s;
    std::vector<HourPoint> hourly;
    std::vector<SwitchEvent> switches;
};

struct ClassAggregate {
    std::size_t block_count{0};      // blocks of this class
    std::size_t counted_blocks{0};   // blocks contributing to the averages
    std::size_t accepted_total{0};
    std::optional<double> avg_waiting_s;
    std::optional<double> avg_delivery_s;
    std::optional<double> avg_overall_s;
};

struct Report {
    RunConfig config;
    CellId scmc;
    std::uint64_t trace_digest{0};
    std::int64_t stream_start{0};
    std::int64_t stream_end{0};
    bool degenerate_classes{false};
    std::vector<BlockMetrics> blocks;
    std::map<TrafficClass, ClassAggregate> classes;
};

namespace detail {

inline std::uint64_t fnv64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace detail

/// Replay one block's offer stream through the configured selector.
/// Waiting delay of a committed acceptance is measured from the previous
/// committed acceptance, anchored at stream start for the first one.
inline BlockMetrics run_block(const std::vector<FerryOffer>& offers,
                              const BlockProfile& profile,
                              const RunConfig& cfg, std::int64_t stream_start,
                              std::int64_t stream_end) {
    cfg.validate();
    BlockMetrics m;
    m.block = profile.block;
    m.traffic_class = profile.traffic_class;
    m.offer_count = offers.size();

    std::optional<Ensemble> ens;
    std::optional<Policy> baseline;
    PolicyKind initial_active = PolicyKind::low;
    if (cfg.selector == Selector::ensemble) {
        Ensemble::Params p;
        p.tau_low = profile.tau_low;
        p.tau_high = profile.tau_high;
        p.period_s = cfg.period_s;
        p.waiting_mode = cfg.waiting_mode;
        p.stream_start = stream_start;
        ens.emplace(derive_seed(cfg.seed, detail::fnv64(profile.block.code())),
                    p);
        initial_active = ens->active();
    } else {
        const auto kind = static_cast<PolicyKind>(cfg.selector);
        baseline.emplace(kind, profile.tau_low, profile.tau_high);
        initial_active = kind;
    }

    const std::int64_t hours =
        stream_end >= stream_start ? (stream_end - stream_start) / 3600 + 1 : 1;
    std::vector<std::int64_t> hour_sum(static_cast<std::size_t>(hours), 0);
    std::vector<std::size_t> hour_count(static_cast<std::size_t>(hours), 0);

    std::int64_t last_committed = stream_start;
    std::int64_t waiting_sum = 0, delivery_sum = 0;
    std::int64_t prev_time = stream_start;
    for (const auto& o : offers) {
        if (o.time < prev_time)
            throw DataError("run_block: offer stream not sorted");
        prev_time = o.time;
        Verdict v;
        if (ens) {
            ens->advance_to(o.time);
            v = ens->on_offer(o.time, o.delivery_delay);
        } else {
            v = baseline->decide(o.delivery_delay);
        }
        if (v != Verdict::accept) continue;
        const std::int64_t w = o.time - last_committed;
        last_committed = o.time;
        waiting_sum += w;
        delivery_sum += o.delivery_delay;
        ++m.accepted_count;
        const std::int64_t h = (o.time - stream_start) / 3600;
        if (h >= 0 && h < hours) {
            hour_sum[static_cast<std::size_t>(h)] += w + o.delivery_delay;
            ++hour_count[static_cast<std::size_t>(h)];
        }
    }

    if (m.accepted_count > 0) {
        const auto n = static_cast<double>(m.accepted_count);
        m.avg_waiting_s = static_cast<double>(waiting_sum) / n;
        m.avg_delivery_s = static_cast<double>(delivery_sum) / n;
        m.avg_overall_s = *m.avg_waiting_s + *m.avg_delivery_s;
    }

    if (ens) m.switches = ens->switches();
    m.hourly.reserve(static_cast<std::size_t>(hours));
    PolicyKind hour_active = initial_active;
    std::size_t next_switch = 0;
    for (std::int64_t h = 0; h < hours; ++h) {
        const std::int64_t hour_end = stream_start + (h + 1) * 3600;
        while (next_switch < m.switches.size() &&
               m.switches[next_switch].time < hour_end) {
            hour_active = m.switches[next_switch].to;
            ++next_switch;
        }
        HourPoint pt;
        pt.hour = h;
        pt.active = hour_active;
        pt.accepted = hour_count[static_cast<std::size_t>(h)];
        if (pt.accepted > 0)
            pt.avg_overall_s =
                static_cast<double>(hour_sum[static_cast<std::size_t>(h)]) /
                static_cast<double>(pt.accepted);
        m.hourly.push_back(std::move(pt));
    }
    return m;
}

/// Run every profiled block; blocks are independent, so results do not
/// depend on the number of worker threads.
inline Report run_experiment(const World& world, const RunConfig& cfg,
                             unsigned threads = 1) {
    cfg.validate();
    if (threads == 0) threads = std::thread::hardware_concurrency();
    if (threads == 0) threads = 1;

    std::vector<const BlockProfile*> profiles;
    profiles.reserve(world.profiles.size());
    for (const auto& [cell, p] : world.profiles) profiles.push_back(&p);

    std::vector<BlockMetrics> results(profiles.size());
    auto worker_loop = [&](std::atomic<std::size_t>& next) {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= profiles.size()) break;
            results[i] =
                run_block(world.offers.at(profiles[i]->block), *profiles[i],
                          cfg, world.stream_start, world.stream_end);
        }
    };
    if (threads <= 1 || profiles.size() <= 1) {
        std::atomic<std::size_t> next{0};
        worker_loop(next);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const unsigned n = std::min<unsigned>(
            threads, static_cast<unsigned>(profiles.size()));
        pool.reserve(n);
        for (unsigned i = 0; i < n; ++i)
            pool.emplace_back([&] { worker_loop(next); });
        for (auto& th : pool) th.join();
    }

    Report rep;
    rep.config = cfg;
    rep.scmc = world.scmc;
    rep.trace_digest = world.digest;
    rep.stream_start = world.stream_start;
    rep.stream_end = world.stream_end;
    rep.degenerate_classes = world.degenerate_classes;
    rep.blocks = std::move(results);

    // Class aggregates: unweighted mean of per-block averages; blocks with
    // no committed acceptance are excluded from the averages.
    struct Acc {
        double w = 0, d = 0;
        std::size_t n = 0;
    };
    std::map<TrafficClass, Acc> acc;
    for (const auto& b : rep.blocks) {
        auto& agg = rep.classes[b.traffic_class];
        ++agg.block_count;
        agg.accepted_total += b.accepted_count;
        if (b.accepted_count == 0) continue;
        ++agg.counted_blocks;
        auto& a = acc[b.traffic_class];
        a.w += *b.avg_waiting_s;
        a.d += *b.avg_delivery_s;
        ++a.n;
    }
    for (auto& [cls, agg] : rep.classes) {
        const auto it = acc.find(cls);
        if (it == acc.end() || it->second.n == 0) continue;
        const auto n = static_cast<double>(it->second.n);
        agg.avg_waiting_s = it->second.w / n;
        agg.avg_delivery_s = it->second.d / n;
        agg.avg_overall_s = *agg.avg_waiting_s + *agg.avg_delivery_s;
    }
    return rep;
}

}  // namespace ferryline
