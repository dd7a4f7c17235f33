#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace ferryline {

enum class Verdict { accept, reject };

/// The four baseline hiring rules, in fixed tie-break order.
enum class PolicyKind { low = 0, high = 1, mean = 2, median = 3 };

inline constexpr std::array<PolicyKind, 4> kAllPolicies = {
    PolicyKind::low, PolicyKind::high, PolicyKind::mean, PolicyKind::median};

inline const char* to_string(PolicyKind k) {
    switch (k) {
        case PolicyKind::low: return "low";
        case PolicyKind::high: return "high";
        case PolicyKind::mean: return "mean";
        default: return "median";
    }
}

/// Accept iff d <= tau. Stateless apart from the threshold.
struct FixedThresholdPolicy {
    std::int64_t tau{0};

    Verdict decide(std::int64_t d) {
        return d <= tau ? Verdict::accept : Verdict::reject;
    }
};

/// Accept the first offer, then accept iff d is strictly below the mean of
/// all accepted delays. The mean is kept as an exact integer ratio so the
/// comparison never suffers float drift.
struct AboveMeanPolicy {
    std::int64_t sum{0};
    std::int64_t count{0};

    Verdict decide(std::int64_t d) {
        if (count != 0 && d * count >= sum) return Verdict::reject;
        sum += d;
        ++count;
        return Verdict::accept;
    }

    double mean() const {
        return count == 0 ? 0.0
                          : static_cast<double>(sum) / static_cast<double>(count);
    }
};

/// Accept the first offer, then accept iff d is strictly below the median of
/// accepted delays. The median is re-read from the sorted multiset only when
/// the accepted count is odd.
struct AboveMedianPolicy {
    std::vector<std::int64_t> accepted;  // kept sorted
    std::int64_t median{0};

    Verdict decide(std::int64_t d) {
        if (!accepted.empty() && d >= median) return Verdict::reject;
        accepted.insert(
            std::upper_bound(accepted.begin(), accepted.end(), d), d);
        if (accepted.size() % 2 == 1)
            median = accepted[(accepted.size() - 1) / 2];
        return Verdict::accept;
    }
};

/// One stateful decider of any of the four kinds.
class Policy {
  public:
    Policy(PolicyKind kind, std::int64_t tau_low, std::int64_t tau_high)
        : kind_(kind) {
        low_.tau = tau_low;
        high_.tau = tau_high;
    }

    PolicyKind kind() const { return kind_; }

    Verdict decide(std::int64_t d) {
        if (d <= 0)
            throw std::invalid_argument("delivery delay must be > 0");
        switch (kind_) {
            case PolicyKind::low: return low_.decide(d);
            case PolicyKind::high: return high_.decide(d);
            case PolicyKind::mean: return mean_.decide(d);
            default: return median_.decide(d);
        }
    }

    const AboveMeanPolicy& mean_state() const { return mean_; }
    const AboveMedianPolicy& median_state() const { return median_; }

  private:
    PolicyKind kind_;
    FixedThresholdPolicy low_{};
    FixedThresholdPolicy high_{};
    AboveMeanPolicy mean_{};
    AboveMedianPolicy median_{};
};

}  // namespace ferryline
