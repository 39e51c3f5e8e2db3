#pragma once

#include "rarl/phy.hpp"
#include "rarl/random.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace rarl {

struct MinstrelParams {
    double ewma_weight = 0.25;       // weight of the newest window
    double update_interval_s = 0.1;  // statistics window length
    int probe_period = 10;           // every Nth window is a probe window

    void validate() const;

    friend bool operator==(const MinstrelParams&, const MinstrelParams&) = default;
};

struct RateOutcome {
    std::int64_t attempts = 0;
    std::int64_t successes = 0;
};

/// Per-link Minstrel-style statistics.
struct MinstrelState {
    MinstrelParams params;
    std::vector<double> ewma_success;
    std::vector<RateOutcome> window;  // counters of the window in progress
    int current_rate = 0;
    std::uint64_t probe_counter = 0;  // completed windows

    /// ewma 1.0 for the lowest rate and 0.0 elsewhere, starting at rate 0.
    static MinstrelState initial(std::size_t rate_count, MinstrelParams params = {});

    /// True when the window about to start is a probe window.
    bool probe_due() const;
};

struct RaDecision {
    int rate = 0;
    bool is_probe = false;
};

double ewma_update(double prev, double window_success, double weight);

/// argmax over rates of phy_rate * ewma, lowest index on ties.
int best_throughput_rate(std::span<const double> ewma, const McsTable& table);

/// Current best rate, or on probe windows a uniformly chosen other rate.
RaDecision select_rate(const MinstrelState& state, const McsTable& table, Rng& rng);

/// Folds `outcomes` (indexed by rate, may be empty) plus the state's own
/// window counters into the EWMAs, recomputes current_rate, clears the
/// counters and advances the probe counter. Rates without attempts keep their
/// EWMA. Throws ContractViolation if successes exceed attempts.
MinstrelState on_window_end(MinstrelState state, std::span<const RateOutcome> outcomes,
                            const McsTable& table);

/// Highest index whose min_snr <= snr, or 0.
int ideal_rate(double snr_db, const McsTable& table);

enum class RaKind { Minstrel, Ideal };

std::string_view to_string(RaKind kind);

/// Per-link rate selection used by the link simulator.
class RateController {
public:
    RateController(RaKind kind, const McsTable& table, MinstrelParams params);

    RaDecision decide(double snr_db, Rng& rng) const;
    void finish_window(int rate, std::int64_t attempts, std::int64_t successes);

    /// The rate a non-probe window would use right now.
    int current_rate(double snr_db) const;

    RaKind kind() const { return kind_; }
    const MinstrelState& minstrel() const { return minstrel_; }

private:
    RaKind kind_;
    McsTable table_;
    MinstrelState minstrel_;
};

}  // namespace rarl
