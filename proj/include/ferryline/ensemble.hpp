#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ferryline/policy.hpp"
#include "ferryline/rng.hpp"

namespace ferryline {

enum class WaitingMode { per_algorithm, shared };

inline const char* to_string(WaitingMode m) {
    return m == WaitingMode::per_algorithm ? "per_algorithm" : "shared";
}

struct SwitchEvent {
    std::int64_t time{0};
    PolicyKind from{PolicyKind::low};
    PolicyKind to{PolicyKind::low};
    std::array<std::optional<double>, 4> window_averages;
};

/// Greedy follow-the-recent-leader choice: argmin of the window averages,
/// skipping members with no data. The incumbent wins ties; otherwise the
/// lower index does. Returns the incumbent when no member has data.
inline std::size_t select_best_policy(
    const std::array<std::optional<double>, 4>& averages, std::size_t current,
    std::size_t member_count = 4) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < member_count; ++i) {
        if (!averages[i]) continue;
        if (!best || *averages[i] < *averages[*best]) best = i;
    }
    if (!best) return current;
    if (averages[current] && *averages[current] == *averages[*best])
        return current;
    return *best;
}

/// Algorithm state for one block: all member policies run passively on every
/// offer; the active one alone commits decisions; every S seconds the member
/// with the lowest average overall delay in the elapsed window becomes
/// active.
class Ensemble {
  public:
    struct Params {
        std::int64_t tau_low{0};
        std::int64_t tau_high{0};
        std::int64_t period_s{1800};
        WaitingMode waiting_mode{WaitingMode::per_algorithm};
        std::int64_t stream_start{0};
        /// Members are the first `member_count` of {low, high, mean, median};
        /// 4 is the full ensemble, 1 degenerates to a single policy.
        std::size_t member_count{4};
    };

    Ensemble(std::uint64_t seed, const Params& p)
        : params_(p),
          policies_{Policy(PolicyKind::low, p.tau_low, p.tau_high),
                    Policy(PolicyKind::high, p.tau_low, p.tau_high),
                    Policy(PolicyKind::mean, p.tau_low, p.tau_high),
                    Policy(PolicyKind::median, p.tau_low, p.tau_high)} {
        if (p.period_s <= 0) throw std::invalid_argument("period must be > 0");
        if (p.member_count < 1 || p.member_count > 4)
            throw std::invalid_argument("member_count must be in [1, 4]");
        SplitMix64 rng(seed);
        active_ = static_cast<std::size_t>(rng.next() % p.member_count);
        last_accept_.fill(p.stream_start);
        committed_last_accept_ = p.stream_start;
        last_eval_ = p.stream_start;
        last_offer_time_ = p.stream_start;
    }

    PolicyKind active() const { return static_cast<PolicyKind>(active_); }

    /// Fire any evaluation boundary (stream_start + k*S) crossed by `now`.
    /// Boundaries missed while no offers arrived collapse into one
    /// evaluation at the most recent grid point.
    void advance_to(std::int64_t now) {
        if (now < last_eval_ + params_.period_s) return;
        const std::int64_t k =
            (now - params_.stream_start) / params_.period_s;
        evaluate(params_.stream_start + k * params_.period_s);
    }

    Verdict on_offer(std::int64_t time, std::int64_t d) {
        if (time < last_offer_time_)
            throw std::invalid_argument("offer stream went backwards in time");
        last_offer_time_ = time;

        const std::int64_t shared_w = time - committed_last_accept_;
        Verdict committed = Verdict::reject;
        for (std::size_t i = 0; i < params_.member_count; ++i) {
            const Verdict v = policies_[i].decide(d);
            if (v == Verdict::accept) {
                const std::int64_t w =
                    params_.waiting_mode == WaitingMode::shared
                        ? shared_w
                        : time - last_accept_[i];
                window_[i].push_back(static_cast<double>(d + w));
                last_accept_[i] = time;
            }
            if (i == active_) committed = v;
        }
        if (committed == Verdict::accept) committed_last_accept_ = time;
        return committed;
    }

    /// Average overall delay per member over the records gathered since the
    /// last evaluation; empty for members with no acceptance in the window.
    std::array<std::optional<double>, 4> window_averages() const {
        std::array<std::optional<double>, 4> averages;
        for (std::size_t i = 0; i < params_.member_count; ++i) {
            if (window_[i].empty()) continue;
            double sum = 0.0;
            for (double v : window_[i]) sum += v;
            averages[i] = sum / static_cast<double>(window_[i].size());
        }
        return averages;
    }

    void evaluate(std::int64_t now) {
        if (now < last_eval_ + params_.period_s)
            throw std::invalid_argument("evaluate before the period elapsed");
        const auto averages = window_averages();
        const std::size_t best =
            select_best_policy(averages, active_, params_.member_count);
        if (best != active_) {
            switches_.push_back({now, static_cast<PolicyKind>(active_),
                                 static_cast<PolicyKind>(best), averages});
            active_ = best;
        }
        for (auto& wdw : window_) wdw.clear();
        last_eval_ = now;
    }

    const std::vector<SwitchEvent>& switches() const { return switches_; }

  private:
    Params params_;
    std::array<Policy, 4> policies_;
    std::size_t active_{0};
    std::array<std::vector<double>, 4> window_;
    std::array<std::int64_t, 4> last_accept_{};
    std::int64_t committed_last_accept_{0};
    std::int64_t last_eval_{0};
    std::int64_t last_offer_time_{0};
    std::vector<SwitchEvent> switches_;
};

}  // namespace ferryline
