#pragma once

#include "rarl/action.hpp"
#include "rarl/env.hpp"
#include "rarl/scenario.hpp"
#include "rarl/venue.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace rarl {

/// Deterministic finite MDP: next[s][a], reward[s][a].
struct TabularMdp {
    std::vector<std::array<std::size_t, kActionCount>> next;
    std::vector<std::array<double, kActionCount>> reward;

    std::size_t state_count() const { return next.size(); }
};

/// Grid MDP over the venue cells; moving with clamp_move and earning
/// `reward_at(position after the move)`.
TabularMdp build_grid_mdp(const Venue& venue, const std::function<double(Position)>& reward_at);

/// Grid MDP of a static scenario with expected_reward as the reward.
TabularMdp build_grid_mdp(const ScenarioConfig& scenario);

struct ValueIterationResult {
    std::vector<double> values;
    std::vector<Action> policy;  // greedy, lowest action index on ties
    int iterations = 0;
    double residual = 0.0;  // sup-norm change of the final sweep
    bool converged = false;
};

ValueIterationResult value_iteration(const TabularMdp& mdp, double gamma,
                                     double tolerance = 1e-8, int max_iterations = 1'000'000);

/// V^pi by iterating the policy's Bellman operator to `tolerance`.
std::vector<double> evaluate_policy(const TabularMdp& mdp, const std::vector<Action>& policy,
                                    double gamma, double tolerance = 1e-10);

/// Episodic wrapper of a static scenario's grid MDP: observations built from
/// positions and ideal-rate expected throughputs, expected rewards, no noise.
class GridMdpEnv final : public Environment {
public:
    explicit GridMdpEnv(ScenarioConfig scenario);

    Observation reset(std::uint64_t seed) override;
    StepResult step(Action action) override;
    std::size_t observation_size() const override;

    Observation observation_at(Position fgw) const;
    const TabularMdp& mdp() const { return mdp_; }
    const ScenarioConfig& scenario() const { return scenario_; }
    Position fgw() const { return fgw_; }

private:
    ScenarioConfig scenario_;
    TabularMdp mdp_;
    Position fgw_;
    int steps_ = 0;
    bool started_ = false;
    bool done_ = false;
};

}  // namespace rarl
