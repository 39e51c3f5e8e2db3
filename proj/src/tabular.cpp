#include "rarl/tabular.hpp"

#include "rarl/errors.hpp"
#include "rarl/linksim.hpp"

#include <algorithm>
#include <cmath>

namespace rarl {

namespace {

// Greedy action with lowest index among near-ties.
Action greedy(const std::array<double, kActionCount>& q)
{
    const double best = *std::max_element(q.begin(), q.end());
    const double slack = 1e-9 * std::max(1.0, std::abs(best));
    for (std::size_t a = 0; a < kActionCount; ++a) {
        if (q[a] >= best - slack) {
            return action_from_index(static_cast<int>(a));
        }
    }
    return Action::Same;
}

}  // namespace

TabularMdp build_grid_mdp(const Venue& venue, const std::function<double(Position)>& reward_at)
{
    venue.validate();
    const std::size_t n = venue.cell_count();
    std::vector<double> cell_reward(n);
    for (std::size_t s = 0; s < n; ++s) {
        cell_reward[s] = reward_at(venue.cell_position(s));
    }
    TabularMdp mdp;
    mdp.next.resize(n);
    mdp.reward.resize(n);
    for (std::size_t s = 0; s < n; ++s) {
        const Position p = venue.cell_position(s);
        for (Action a : kAllActions) {
            const auto ai = static_cast<std::size_t>(to_index(a));
            const std::size_t t = venue.cell_index(clamp_move(p, a, venue));
            mdp.next[s][ai] = t;
            mdp.reward[s][ai] = cell_reward[t];
        }
    }
    return mdp;
}

TabularMdp build_grid_mdp(const ScenarioConfig& scenario)
{
    if (scenario.is_moving()) {
        throw ConfigError("grid MDP: requires a static scenario");
    }
    return build_grid_mdp(scenario.venue, [&](Position p) {
        return expected_reward(scenario, p, scenario.faps);
    });
}

ValueIterationResult value_iteration(const TabularMdp& mdp, double gamma, double tolerance,
                                     int max_iterations)
{
    const std::size_t n = mdp.state_count();
    ValueIterationResult out;
    out.values.assign(n, 0.0);
    std::vector<double> next(n);
    for (int it = 0; it < max_iterations; ++it) {
        double change = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            double best = -INFINITY;
            for (std::size_t a = 0; a < kActionCount; ++a) {
                best = std::max(best, mdp.reward[s][a] + gamma * out.values[mdp.next[s][a]]);
            }
            next[s] = best;
            change = std::max(change, std::abs(best - out.values[s]));
        }
        out.values.swap(next);
        out.iterations = it + 1;
        out.residual = change;
        if (change < tolerance) {
            out.converged = true;
            break;
        }
    }
    out.policy.resize(n);
    for (std::size_t s = 0; s < n; ++s) {
        std::array<double, kActionCount> q{};
        for (std::size_t a = 0; a < kActionCount; ++a) {
            q[a] = mdp.reward[s][a] + gamma * out.values[mdp.next[s][a]];
        }
        out.policy[s] = greedy(q);
    }
    return out;
}

std::vector<double> evaluate_policy(const TabularMdp& mdp, const std::vector<Action>& policy,
                                    double gamma, double tolerance)
{
    const std::size_t n = mdp.state_count();
    if (policy.size() != n) {
        throw ContractViolation("evaluate_policy: policy size does not match state count");
    }
    std::vector<double> v(n, 0.0);
    std::vector<double> next(n);
    for (int it = 0; it < 1'000'000; ++it) {
        double change = 0.0;
        for (std::size_t s = 0; s < n; ++s) {
            const auto a = static_cast<std::size_t>(to_index(policy[s]));
            next[s] = mdp.reward[s][a] + gamma * v[mdp.next[s][a]];
            change = std::max(change, std::abs(next[s] - v[s]));
        }
        v.swap(next);
        if (change < tolerance) {
            break;
        }
    }
    return v;
}

GridMdpEnv::GridMdpEnv(ScenarioConfig scenario) : scenario_(std::move(scenario))
{
    scenario_.validate();
    mdp_ = build_grid_mdp(scenario_);
    fgw_ = scenario_.fgw_start;
}

std::size_t GridMdpEnv::observation_size() const
{
    return observation_size_for(scenario_);
}

Observation GridMdpEnv::observation_at(Position fgw) const
{
    const ExpectedThroughput tp = expected_throughput(scenario_, fgw, scenario_.faps);
    return make_observation(scenario_, {scenario_.backhaul, fgw, scenario_.faps}, tp.fgw_bps,
                            tp.fap_bps);
}

Observation GridMdpEnv::reset(std::uint64_t /*seed*/)
{
    fgw_ = scenario_.fgw_start;
    steps_ = 0;
    started_ = true;
    done_ = false;
    return observation_at(fgw_);
}

StepResult GridMdpEnv::step(Action action)
{
    if (!started_) {
        throw ContractViolation("step: environment has not been reset");
    }
    if (done_) {
        throw ContractViolation("step: episode already finished; call reset");
    }
    const std::size_t s = scenario_.venue.cell_index(fgw_);
    const auto a = static_cast<std::size_t>(to_index(action));
    const double reward = mdp_.reward[s][a];
    fgw_ = scenario_.venue.cell_position(mdp_.next[s][a]);
    ++steps_;
    done_ = steps_ >= scenario_.horizon;

    StepResult r;
    r.observation = observation_at(fgw_);
    r.reward = reward;
    r.done = done_;
    r.info.time_s = steps_ * scenario_.venue.decision_interval;
    r.info.nodes = {scenario_.backhaul, fgw_, scenario_.faps};
    return r;
}

}  // namespace rarl
