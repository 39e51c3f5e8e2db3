#pragma once

#include "rarl/env.hpp"
#include "rarl/qnetwork.hpp"
#include "rarl/replay_buffer.hpp"
#include "rarl/train_schedule.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rarl {

/// Index of the largest Q-value, lowest index on ties.
int argmax_lowest(const Eigen::VectorXd& q);

Action greedy_action(const QNetwork& net, std::span<const double> obs);

/// Epsilon-greedy: one uniform draw decides exploration, a second picks the
/// random action.
Action act(const QNetwork& net, std::span<const double> obs, double epsilon, Rng& rng);

/// r * reward_scale + gamma * (1 - done) * max_a Q_target(next_obs, a)
std::vector<double> td_targets(const QNetwork& target, std::span<const Transition* const> batch,
                               const TrainSchedule& schedule);

/// One clipped SGD step on the mean squared TD error. Returns the loss
/// before the step.
double td_update(QNetwork& net, const QNetwork& target, std::span<const Transition* const> batch,
                 const TrainSchedule& schedule);

/// Everything needed to resume training.
struct AgentCheckpoint {
    QNetwork online;
    QNetwork target;
    TrainSchedule schedule;
    std::uint64_t seed = 0;
    std::int64_t env_steps = 0;
    std::int64_t grad_steps = 0;
    std::int64_t episodes = 0;
    std::string exploration_rng;  // textual engine state
    std::string replay_rng;

    friend bool operator==(const AgentCheckpoint&, const AgentCheckpoint&) = default;
};

struct EpisodeLog {
    std::int64_t episode = 0;
    std::int64_t steps = 0;  // cumulative environment steps at episode end
    double episode_return = 0.0;
    double epsilon = 0.0;    // at episode end
    double loss_mean = 0.0;  // 0 when no update happened

    friend bool operator==(const EpisodeLog&, const EpisodeLog&) = default;
};

struct TrainOptions {
    /// Stop once this many total env steps are reached (<= schedule.total_steps).
    std::optional<std::int64_t> stop_after;
    std::function<void(const EpisodeLog&)> on_episode;
};

struct TrainResult {
    AgentCheckpoint checkpoint;
    std::vector<EpisodeLog> log;
};

/// Deep Q-learning. Resuming from a checkpoint continues the schedule
/// position, networks and RNG streams; the replay buffer starts empty.
TrainResult train(Environment& env, const TrainSchedule& schedule, std::uint64_t seed,
                  const std::optional<AgentCheckpoint>& resume = std::nullopt,
                  const TrainOptions& options = {});

}  // namespace rarl
