#pragma once

#include "rarl/action.hpp"
#include "rarl/linksim.hpp"
#include "rarl/scenario.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace rarl {

/// Normalized observation vector, every component in [0, 1].
using Observation = std::vector<double>;

struct StepResult {
    Observation observation;
    double reward = 0.0;
    bool done = false;
    NetworkSnapshot info;
};

/// Contract every agent (and any external harness) programs against.
class Environment {
public:
    virtual ~Environment() = default;

    virtual Observation reset(std::uint64_t seed) = 0;
    /// Throws ContractViolation when called before reset or after done.
    virtual StepResult step(Action action) = 0;
    virtual std::size_t observation_size() const = 0;
    std::size_t action_count() const { return kActionCount; }
};

/// snr_fgw + snr_fap - w |snr_fgw - snr_fap|
double reward_snr(double snr_fgw, double snr_fap, double weight);

/// t1 + t2 - w |t1 - t2|, on throughputs normalized by the offered load.
double reward_throughput(double t1, double t2, double weight);

/// Observation length: 6 for one FAP (position, two distances, two
/// throughputs), 5 for two FAPs (position, three distances).
std::size_t observation_size_for(const ScenarioConfig& scenario);

/// Builds the observation from raw quantities. Throughputs are ignored for
/// two-FAP scenarios.
Observation make_observation(const ScenarioConfig& scenario, const NodePositions& nodes,
                             double fgw_throughput_bps, std::span<const double> fap_throughput_bps);

Observation observation_from(const ScenarioConfig& scenario, const NetworkSnapshot& snapshot);

/// Step reward of the scenario's reward mode for a simulated interval.
double reward_from(const ScenarioConfig& scenario, const NetworkSnapshot& snapshot);

/// Reward with the FGW at `fgw`, SNR from the link budget and throughputs
/// from the ideal-rate fluid model. No randomness.
double expected_reward(const ScenarioConfig& scenario, Position fgw,
                       const std::vector<Position>& faps);

/// Episodic relay positioning environment over RelaySimulator.
class RelayEnv final : public Environment {
public:
    /// Throws ConfigError for an invalid scenario.
    explicit RelayEnv(ScenarioConfig scenario);

    Observation reset(std::uint64_t seed) override;
    StepResult step(Action action) override;
    std::size_t observation_size() const override;

    const ScenarioConfig& scenario() const { return scenario_; }
    const NetworkSnapshot& last_snapshot() const;
    Position fgw() const { return fgw_; }
    int steps_taken() const { return steps_; }
    bool done() const { return done_; }

private:
    NodePositions nodes_at(double t) const;

    ScenarioConfig scenario_;
    std::optional<RelaySimulator> sim_;
    Position fgw_;
    int steps_ = 0;
    bool done_ = false;
    NetworkSnapshot last_;
};

}  // namespace rarl
