#pragma once

#include <cstdint>
#include <vector>

namespace rarl {

/// DQN hyperparameters and schedule.
struct TrainSchedule {
    double gamma = 0.95;
    double learning_rate = 1e-3;
    int batch_size = 64;
    int target_sync_period = 500;  // gradient steps
    double epsilon_start = 1.0;
    double epsilon_end = 0.05;
    std::int64_t epsilon_decay_steps = 30'000;
    std::int64_t total_steps = 150'000;  // environment steps
    std::int64_t learning_starts = 1'000;
    std::int64_t replay_capacity = 50'000;
    double grad_clip_norm = 10.0;
    // Constant factor applied to rewards before they enter the TD target.
    // Rescaling leaves the optimal policy unchanged.
    double reward_scale = 1.0;
    std::vector<int> hidden_layers{64, 64};

    /// Throws ConfigError on out-of-range values.
    void validate() const;

    /// Linear decay from epsilon_start to epsilon_end over epsilon_decay_steps.
    double epsilon_at(std::int64_t step) const;

    friend bool operator==(const TrainSchedule&, const TrainSchedule&) = default;
};

}  // namespace rarl
