#include "rarl/train_schedule.hpp"

#include "rarl/errors.hpp"

namespace rarl {

void TrainSchedule::validate() const
{
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw ConfigError("agent.gamma: must be in (0, 1)");
    }
    if (!(learning_rate > 0.0)) {
        throw ConfigError("agent.learning_rate: must be positive");
    }
    if (batch_size < 1) {
        throw ConfigError("agent.batch_size: must be at least 1");
    }
    if (target_sync_period < 1) {
        throw ConfigError("agent.target_sync_period: must be at least 1");
    }
    if (!(epsilon_end >= 0.0 && epsilon_end <= epsilon_start && epsilon_start <= 1.0)) {
        throw ConfigError("agent.epsilon_end: need 0 <= epsilon_end <= epsilon_start <= 1");
    }
    if (epsilon_decay_steps < 0 || total_steps < 0 || learning_starts < 0) {
        throw ConfigError("agent: step counts must be non-negative");
    }
    if (replay_capacity < 1) {
        throw ConfigError("agent.replay_capacity: must be at least 1");
    }
    if (!(grad_clip_norm > 0.0)) {
        throw ConfigError("agent.grad_clip_norm: must be positive");
    }
    if (!(reward_scale > 0.0)) {
        throw ConfigError("agent.reward_scale: must be positive");
    }
    for (int h : hidden_layers) {
        if (h < 1) {
            throw ConfigError("agent.hidden_layers: sizes must be positive");
        }
    }
}

double TrainSchedule::epsilon_at(std::int64_t step) const
{
    if (epsilon_decay_steps <= 0 || step >= epsilon_decay_steps) {
        return epsilon_end;
    }
    const double f = static_cast<double>(step) / static_cast<double>(epsilon_decay_steps);
    return epsilon_start + f * (epsilon_end - epsilon_start);
}

}  // namespace rarl
