#pragma once

#include "rarl/random.hpp"
#include "rarl/ra.hpp"
#include "rarl/scenario.hpp"
#include "rarl/venue.hpp"

#include <cstdint>
#include <vector>

namespace rarl {

// Friis is a far-field law; co-located nodes are evaluated at this separation.
inline constexpr double kMinLinkDistance = 1.0;  // meters

double link_distance(Position a, Position b);

/// What the receiver of one directed link observed over a decision interval.
struct LinkMetrics {
    double snr_db = 0.0;
    double throughput_bps = 0.0;
    int chosen_rate = 0;  // rate index in use at interval end
    std::int64_t delivered_packets = 0;
    std::int64_t offered_packets = 0;

    friend bool operator==(const LinkMetrics&, const LinkMetrics&) = default;
};

struct NodePositions {
    Position backhaul;
    Position fgw;
    std::vector<Position> faps;

    friend bool operator==(const NodePositions&, const NodePositions&) = default;
};

struct NetworkSnapshot {
    double time_s = 0.0;  // interval end
    NodePositions nodes;
    LinkMetrics backhaul_link;           // Backhaul -> FGW
    std::vector<LinkMetrics> fap_links;  // FGW -> FAP i

    friend bool operator==(const NetworkSnapshot&, const NetworkSnapshot&) = default;
};

/// Downlink relay Backhaul -> FGW -> FAP(s) simulated in rate-adaptation
/// windows. The backhaul offers one UDP flow per FAP. The FGW forwards, one
/// window later, exactly the packets it received in the previous window;
/// whatever the FGW -> FAP link cannot carry is dropped. With two FAPs the
/// backhaul link serves the flows round-robin per packet.
class RelaySimulator {
public:
    /// Throws ConfigError if the scenario is invalid.
    RelaySimulator(const ScenarioConfig& scenario, std::uint64_t seed);

    /// Simulates one decision interval ending at `time_end` with the nodes
    /// held at `nodes`. Throws ConfigError when the FAP count does not match.
    NetworkSnapshot simulate_interval(const NodePositions& nodes, double time_end);

    int windows_per_interval() const { return windows_per_interval_; }
    const RateController& backhaul_controller() const { return backhaul_.ra; }
    const RateController& fap_controller(std::size_t i) const { return fap_links_.at(i).ra; }

private:
    struct LinkState {
        RateController ra;
        double credit = 0.0;  // fractional transmit opportunities carried over
    };

    struct WindowResult {
        int rate = 0;
        std::int64_t sent = 0;
        std::int64_t delivered = 0;
    };

    // Transmits up to `offered` packets over one window; returns sent/delivered.
    WindowResult transmit(LinkState& link, double snr_db, std::int64_t offered);
    double window_capacity(int rate) const;

    ScenarioConfig scenario_;
    double window_s_;
    int windows_per_interval_;
    LinkState backhaul_;
    std::vector<LinkState> fap_links_;
    std::vector<double> source_credit_;
    std::vector<std::int64_t> pending_;  // per flow, received at the FGW last window
    std::size_t round_robin_next_ = 0;
    Rng rng_;
};

struct SweepSample {
    Position fgw;
    NetworkSnapshot snapshot;
};

/// Moves the FGW along the venue diagonal from (step, step) to
/// (width - step, height - step), one grid step per axis per decision interval,
/// recording one snapshot per position. Throws ConfigError for moving scenarios.
std::vector<SweepSample> sweep_diagonal(const ScenarioConfig& scenario, std::uint64_t seed);

/// Deterministic fluid model with the ideal rate selector: expected delivered
/// throughput on each link with the FGW at `fgw` and static FAPs at `faps`.
struct ExpectedThroughput {
    double fgw_bps = 0.0;
    std::vector<double> fap_bps;
};

ExpectedThroughput expected_throughput(const ScenarioConfig& scenario, Position fgw,
                                       const std::vector<Position>& faps);

}  // namespace rarl
