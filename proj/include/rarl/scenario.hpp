#pragma once

#include "rarl/phy.hpp"
#include "rarl/ra.hpp"
#include "rarl/train_schedule.hpp"
#include "rarl/venue.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace rarl {

enum class ScenarioKind { Asymmetric, MovingFap, TwoFaps, Custom };

std::string_view to_string(ScenarioKind kind);
std::optional<ScenarioKind> parse_scenario_kind(std::string_view name);

enum class RewardMode { SnrBalance, ThroughputBalance };

std::string_view to_string(RewardMode mode);
std::optional<RewardMode> parse_reward_mode(std::string_view name);

struct RewardSpec {
    RewardMode mode = RewardMode::SnrBalance;
    double imbalance_weight = 2.0;

    friend bool operator==(const RewardSpec&, const RewardSpec&) = default;
};

struct TrafficConfig {
    double udp_rate_bps = 70e6;
    int packet_size_bytes = 1400;

    int packet_bits() const { return packet_size_bytes * 8; }

    friend bool operator==(const TrafficConfig&, const TrafficConfig&) = default;
};

struct LinkConfig {
    double mac_efficiency = 0.75;
    double per_steepness = kDefaultPerSteepness;
    RaKind ra = RaKind::Minstrel;
    MinstrelParams minstrel;
    McsTable mcs = ht20_mcs_table();

    friend bool operator==(const LinkConfig&, const LinkConfig&) = default;
};

/// Everything needed to build a relay network episode: topology, radios,
/// traffic, rate adaptation, reward and agent schedule.
struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::Asymmetric;
    std::uint64_t seed = 1;
    Venue venue;
    Position backhaul{0.0, 0.0};
    std::vector<Position> faps{{1000.0, 1000.0}};
    WaypointSchedule fap_schedule;  // non-empty: the single FAP follows it
    Position fgw_start{500.0, 500.0};
    RadioConfig backhaul_radio;     // transmitter of Backhaul -> FGW
    RadioConfig fgw_radio;          // transmitter of FGW -> FAP(s)
    TrafficConfig traffic;
    LinkConfig link;
    RewardSpec reward;
    int horizon = 120;
    TrainSchedule agent;

    /// Defaults for one of the named scenarios (Custom gets the asymmetric
    /// topology with symmetric 20 dBm radios).
    static ScenarioConfig defaults(ScenarioKind kind);

    /// Throws ConfigError naming the offending field.
    void validate() const;

    std::size_t fap_count() const { return faps.size(); }
    bool is_moving() const { return !fap_schedule.empty(); }
    Position fap_position(std::size_t i, double t) const;

    /// Offered downlink load per FAP flow, packets per second.
    double offered_packets_per_second() const;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Waypoints used by the moving-FAP scenario: dwell at (600,600), move to
/// (1000,1000), dwell, move to (700,300). `segment_s` is the duration of each
/// dwell and each move.
WaypointSchedule default_moving_schedule(double segment_s = 20.0);

/// Settle time appended to a moving schedule to form the episode horizon.
inline constexpr int kMovingSettleSteps = 30;

}  // namespace rarl
