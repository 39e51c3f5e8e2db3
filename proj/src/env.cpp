#include "rarl/env.hpp"

#include "rarl/errors.hpp"

#include <algorithm>
#include <cmath>

namespace rarl {

double reward_snr(double snr_fgw, double snr_fap, double weight)
{
    return snr_fgw + snr_fap - weight * std::abs(snr_fgw - snr_fap);
}

double reward_throughput(double t1, double t2, double weight)
{
    return t1 + t2 - weight * std::abs(t1 - t2);
}

std::size_t observation_size_for(const ScenarioConfig& scenario)
{
    return scenario.fap_count() == 1 ? 6 : 2 + 1 + scenario.fap_count();
}

Observation make_observation(const ScenarioConfig& scenario, const NodePositions& nodes,
                             double fgw_throughput_bps, std::span<const double> fap_throughput_bps)
{
    const Venue& v = scenario.venue;
    const double diag = v.diagonal();
    const double load = scenario.traffic.udp_rate_bps;
    auto unit = [](double x) { return std::clamp(x, 0.0, 1.0); };

    Observation obs;
    obs.reserve(observation_size_for(scenario));
    obs.push_back(unit(nodes.fgw.x / v.width));
    obs.push_back(unit(nodes.fgw.y / v.height));
    obs.push_back(unit(distance(nodes.fgw, nodes.backhaul) / diag));
    for (const Position& fap : nodes.faps) {
        obs.push_back(unit(distance(nodes.fgw, fap) / diag));
    }
    if (nodes.faps.size() == 1) {
        obs.push_back(unit(fgw_throughput_bps / load));
        obs.push_back(unit(fap_throughput_bps.empty() ? 0.0 : fap_throughput_bps[0] / load));
    }
    return obs;
}

Observation observation_from(const ScenarioConfig& scenario, const NetworkSnapshot& snapshot)
{
    std::vector<double> fap_tp;
    for (const LinkMetrics& m : snapshot.fap_links) {
        fap_tp.push_back(m.throughput_bps);
    }
    return make_observation(scenario, snapshot.nodes, snapshot.backhaul_link.throughput_bps, fap_tp);
}

namespace {

double reward_of(const ScenarioConfig& scenario, double snr_backhaul,
                 std::span<const double> snr_fap, double tp_backhaul,
                 std::span<const double> tp_fap)
{
    const double w = scenario.reward.imbalance_weight;
    const bool two = snr_fap.size() == 2;
    if (scenario.reward.mode == RewardMode::SnrBalance) {
        return two ? reward_snr(snr_fap[0], snr_fap[1], w) : reward_snr(snr_backhaul, snr_fap[0], w);
    }
    const double load = scenario.traffic.udp_rate_bps;
    return two ? reward_throughput(tp_fap[0] / load, tp_fap[1] / load, w)
               : reward_throughput(tp_backhaul / load, tp_fap[0] / load, w);
}

}  // namespace

double reward_from(const ScenarioConfig& scenario, const NetworkSnapshot& snapshot)
{
    std::vector<double> snr_fap;
    std::vector<double> tp_fap;
    for (const LinkMetrics& m : snapshot.fap_links) {
        snr_fap.push_back(m.snr_db);
        tp_fap.push_back(m.throughput_bps);
    }
    return reward_of(scenario, snapshot.backhaul_link.snr_db, snr_fap,
                     snapshot.backhaul_link.throughput_bps, tp_fap);
}

double expected_reward(const ScenarioConfig& scenario, Position fgw,
                       const std::vector<Position>& faps)
{
    const double snr_backhaul =
        snr(scenario.backhaul_radio, link_distance(scenario.backhaul, fgw));
    std::vector<double> snr_fap;
    for (const Position& fap : faps) {
        snr_fap.push_back(snr(scenario.fgw_radio, link_distance(fgw, fap)));
    }
    if (scenario.reward.mode == RewardMode::SnrBalance) {
        return reward_of(scenario, snr_backhaul, snr_fap, 0.0, {});
    }
    const ExpectedThroughput tp = expected_throughput(scenario, fgw, faps);
    return reward_of(scenario, snr_backhaul, snr_fap, tp.fgw_bps, tp.fap_bps);
}

RelayEnv::RelayEnv(ScenarioConfig scenario) : scenario_(std::move(scenario))
{
    scenario_.validate();
    fgw_ = scenario_.fgw_start;
}

std::size_t RelayEnv::observation_size() const
{
    return observation_size_for(scenario_);
}

NodePositions RelayEnv::nodes_at(double t) const
{
    NodePositions nodes{scenario_.backhaul, fgw_, {}};
    for (std::size_t i = 0; i < scenario_.fap_count(); ++i) {
        nodes.faps.push_back(scenario_.fap_position(i, t));
    }
    return nodes;
}

Observation RelayEnv::reset(std::uint64_t seed)
{
    sim_.emplace(scenario_, derive_seed(seed, streams::kEnvironment));
    fgw_ = scenario_.fgw_start;
    steps_ = 0;
    done_ = false;
    // Warm-up interval at t = 0 so the first observation carries measurements.
    last_ = sim_->simulate_interval(nodes_at(0.0), 0.0);
    return observation_from(scenario_, last_);
}

StepResult RelayEnv::step(Action action)
{
    if (!sim_) {
        throw ContractViolation("step: environment has not been reset");
    }
    if (done_) {
        throw ContractViolation("step: episode already finished; call reset");
    }
    fgw_ = clamp_move(fgw_, action, scenario_.venue);
    ++steps_;
    const double t = steps_ * scenario_.venue.decision_interval;
    last_ = sim_->simulate_interval(nodes_at(t), t);
    done_ = steps_ >= scenario_.horizon;
    return {observation_from(scenario_, last_), reward_from(scenario_, last_), done_, last_};
}

const NetworkSnapshot& RelayEnv::last_snapshot() const
{
    if (!sim_) {
        throw ContractViolation("last_snapshot: environment has not been reset");
    }
    return last_;
}

}  // namespace rarl
