#include "rarl/scenario.hpp"

#include "rarl/errors.hpp"

#include <cmath>
#include <string>

namespace rarl {

std::string_view to_string(ScenarioKind kind)
{
    switch (kind) {
    case ScenarioKind::Asymmetric: return "asymmetric";
    case ScenarioKind::MovingFap: return "moving-fap";
    case ScenarioKind::TwoFaps: return "two-faps";
    case ScenarioKind::Custom: return "custom";
    }
    return "?";
}

std::optional<ScenarioKind> parse_scenario_kind(std::string_view name)
{
    for (auto k : {ScenarioKind::Asymmetric, ScenarioKind::MovingFap, ScenarioKind::TwoFaps,
                   ScenarioKind::Custom}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

std::string_view to_string(RewardMode mode)
{
    return mode == RewardMode::SnrBalance ? "snr" : "throughput";
}

std::optional<RewardMode> parse_reward_mode(std::string_view name)
{
    if (name == "snr") {
        return RewardMode::SnrBalance;
    }
    if (name == "throughput") {
        return RewardMode::ThroughputBalance;
    }
    return std::nullopt;
}

WaypointSchedule default_moving_schedule(double segment_s)
{
    const double s = segment_s;
    return WaypointSchedule({{0.0, {600.0, 600.0}},
                             {s, {600.0, 600.0}},
                             {2 * s, {1000.0, 1000.0}},
                             {3 * s, {1000.0, 1000.0}},
                             {4 * s, {700.0, 300.0}}});
}

ScenarioConfig ScenarioConfig::defaults(ScenarioKind kind)
{
    ScenarioConfig c;
    c.kind = kind;
    switch (kind) {
    case ScenarioKind::Asymmetric:
        c.backhaul = {0.0, 0.0};
        c.faps = {{1000.0, 1000.0}};
        c.fgw_start = {500.0, 500.0};
        c.backhaul_radio.tx_power_dbm = 15.0;
        c.fgw_radio.tx_power_dbm = 20.0;
        c.reward.mode = RewardMode::SnrBalance;
        c.horizon = 120;
        c.agent.learning_rate = 1e-2;
        c.agent.reward_scale = 0.05;
        break;
    case ScenarioKind::MovingFap:
        c.backhaul = {0.0, 0.0};
        c.fap_schedule = default_moving_schedule();
        c.faps = {c.fap_schedule.position_at(0.0)};
        c.fgw_start = {400.0, 400.0};
        c.reward.mode = RewardMode::SnrBalance;
        c.horizon = static_cast<int>(std::lround(c.fap_schedule.end_time())) + kMovingSettleSteps;
        c.agent.learning_rate = 1e-2;
        c.agent.reward_scale = 0.1;
        c.agent.total_steps = 300'000;
        break;
    case ScenarioKind::TwoFaps:
        c.backhaul = {0.0, 500.0};
        c.faps = {{1000.0, 1000.0}, {1000.0, 0.0}};
        c.fgw_start = {25.0, 25.0};
        c.reward.mode = RewardMode::ThroughputBalance;
        c.horizon = 120;
        c.agent.learning_rate = 1e-2;
        c.agent.reward_scale = 3.0;
        break;
    case ScenarioKind::Custom:
        c.backhaul = {0.0, 0.0};
        c.faps = {{1000.0, 1000.0}};
        c.fgw_start = {500.0, 500.0};
        c.horizon = 120;
        c.agent.learning_rate = 1e-2;
        c.agent.reward_scale = 0.05;
        break;
    }
    return c;
}

Position ScenarioConfig::fap_position(std::size_t i, double t) const
{
    if (is_moving() && i == 0) {
        return fap_schedule.position_at(t);
    }
    return faps.at(i);
}

double ScenarioConfig::offered_packets_per_second() const
{
    return traffic.udp_rate_bps / static_cast<double>(traffic.packet_bits());
}

void ScenarioConfig::validate() const
{
    venue.validate();
    auto check_inside = [&](Position p, const std::string& field) {
        if (!venue.contains(p)) {
            throw ConfigError(field + ": position (" + std::to_string(p.x) + ", " +
                              std::to_string(p.y) + ") lies outside the venue");
        }
    };
    check_inside(backhaul, "backhaul");
    check_inside(fgw_start, "fgw_start");
    if (!venue.is_grid_aligned(fgw_start)) {
        throw ConfigError("fgw_start: must be aligned to the venue step grid");
    }
    if (faps.empty() || faps.size() > 2) {
        throw ConfigError("faps: one or two FAPs are supported");
    }
    for (std::size_t i = 0; i < faps.size(); ++i) {
        check_inside(faps[i], "faps[" + std::to_string(i) + "]");
    }
    if (is_moving()) {
        if (faps.size() != 1) {
            throw ConfigError("waypoints: only single-FAP scenarios may move");
        }
        const auto& w = fap_schedule.waypoints();
        for (std::size_t i = 0; i < w.size(); ++i) {
            check_inside(w[i].target, "waypoints[" + std::to_string(i) + "].pos");
        }
    }
    backhaul_radio.validate();
    fgw_radio.validate();
    if (!(traffic.udp_rate_bps > 0.0)) {
        throw ConfigError("traffic.udp_rate_bps: must be positive");
    }
    if (traffic.packet_size_bytes <= 0) {
        throw ConfigError("traffic.packet_size_bytes: must be positive");
    }
    if (!(link.mac_efficiency > 0.0 && link.mac_efficiency <= 1.0)) {
        throw ConfigError("link.mac_efficiency: must be in (0, 1]");
    }
    if (!(link.per_steepness > 0.0)) {
        throw ConfigError("link.per_steepness: must be positive");
    }
    link.minstrel.validate();
    validate_mcs_table(link.mcs);
    const double windows = venue.decision_interval / link.minstrel.update_interval_s;
    if (std::abs(windows - std::round(windows)) > 1e-9 || std::round(windows) < 1.0) {
        throw ConfigError(
            "link.minstrel.update_interval_s: must divide venue.decision_interval evenly");
    }
    if (!(reward.imbalance_weight > 0.0)) {
        throw ConfigError("reward.imbalance_weight: must be positive");
    }
    if (horizon < 1) {
        throw ConfigError("horizon: must be at least 1");
    }
    agent.validate();
}

}  // namespace rarl
