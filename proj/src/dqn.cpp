#include "rarl/dqn.hpp"

#include "rarl/errors.hpp"

#include <sstream>

namespace rarl {

namespace {

std::string engine_state(const Rng& rng)
{
    std::ostringstream os;
    os << rng;
    return os.str();
}

Rng engine_from(const std::string& state)
{
    Rng rng;
    std::istringstream is(state);
    is >> rng;
    if (!is) {
        throw ContractViolation("checkpoint: corrupt RNG state");
    }
    return rng;
}

Eigen::MatrixXd stack(std::span<const Transition* const> batch, bool next)
{
    const auto& first = next ? batch.front()->next_obs : batch.front()->obs;
    Eigen::MatrixXd m(static_cast<Eigen::Index>(first.size()),
                      static_cast<Eigen::Index>(batch.size()));
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const auto& v = next ? batch[i]->next_obs : batch[i]->obs;
        for (std::size_t r = 0; r < v.size(); ++r) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = v[r];
        }
    }
    return m;
}

}  // namespace

int argmax_lowest(const Eigen::VectorXd& q)
{
    int best = 0;
    for (Eigen::Index i = 1; i < q.size(); ++i) {
        if (q(i) > q(best)) {
            best = static_cast<int>(i);
        }
    }
    return best;
}

Action greedy_action(const QNetwork& net, std::span<const double> obs)
{
    return action_from_index(argmax_lowest(net.forward(obs)));
}

Action act(const QNetwork& net, std::span<const double> obs, double epsilon, Rng& rng)
{
    if (uniform01(rng) < epsilon) {
        return action_from_index(static_cast<int>(uniform_index(rng, kActionCount)));
    }
    return greedy_action(net, obs);
}

std::vector<double> td_targets(const QNetwork& target, std::span<const Transition* const> batch,
                               const TrainSchedule& schedule)
{
    const Eigen::MatrixXd q_next = target.forward_batch(stack(batch, true));
    std::vector<double> y(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const Transition& t = *batch[i];
        const double bootstrap =
            t.done ? 0.0 : q_next.col(static_cast<Eigen::Index>(i)).maxCoeff();
        y[i] = t.reward * schedule.reward_scale + schedule.gamma * bootstrap;
    }
    return y;
}

double td_update(QNetwork& net, const QNetwork& target, std::span<const Transition* const> batch,
                 const TrainSchedule& schedule)
{
    if (batch.empty()) {
        throw ContractViolation("td_update: empty batch");
    }
    const std::vector<double> y = td_targets(target, batch, schedule);
    std::vector<int> actions(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        actions[i] = to_index(batch[i]->action);
    }
    NetworkGradients grad;
    const double loss = net.squared_error(stack(batch, false), actions, y, &grad);
    const double norm = grad.norm();
    if (norm > schedule.grad_clip_norm) {
        grad.scale(schedule.grad_clip_norm / norm);
    }
    net.apply_sgd(grad, schedule.learning_rate);
    return loss;
}

TrainResult train(Environment& env, const TrainSchedule& schedule, std::uint64_t seed,
                  const std::optional<AgentCheckpoint>& resume, const TrainOptions& options)
{
    schedule.validate();
    std::vector<int> sizes{static_cast<int>(env.observation_size())};
    sizes.insert(sizes.end(), schedule.hidden_layers.begin(), schedule.hidden_layers.end());
    sizes.push_back(static_cast<int>(env.action_count()));

    AgentCheckpoint ck;
    Rng explore_rng;
    Rng replay_rng;
    if (resume) {
        ck = *resume;
        if (ck.online.layer_sizes() != sizes) {
            throw ContractViolation("train: checkpoint network shape does not match environment");
        }
        explore_rng = engine_from(ck.exploration_rng);
        replay_rng = engine_from(ck.replay_rng);
    } else {
        Rng init_rng(derive_seed(seed, streams::kNetworkInit));
        ck.online = QNetwork::random(sizes, init_rng);
        ck.target = ck.online;
        ck.seed = seed;
        explore_rng.seed(derive_seed(seed, streams::kExploration));
        replay_rng.seed(derive_seed(seed, streams::kReplay));
    }
    ck.schedule = schedule;

    const std::int64_t limit =
        std::min(schedule.total_steps, options.stop_after.value_or(schedule.total_steps));
    ReplayBuffer buffer(static_cast<std::size_t>(schedule.replay_capacity));
    const auto warmup = std::max<std::int64_t>(schedule.learning_starts, schedule.batch_size);
    std::vector<const Transition*> batch(static_cast<std::size_t>(schedule.batch_size));

    TrainResult result;
    while (ck.env_steps < limit) {
        Observation obs = env.reset(derive_seed(ck.seed, streams::kEpisodeBase +
                                                             static_cast<std::uint64_t>(ck.episodes)));
        double episode_return = 0.0;
        double loss_sum = 0.0;
        std::int64_t loss_count = 0;
        while (true) {
            const double eps = schedule.epsilon_at(ck.env_steps);
            const Action a = act(ck.online, obs, eps, explore_rng);
            StepResult r = env.step(a);
            ++ck.env_steps;
            episode_return += r.reward;
            // Episodes end on the time limit only, so every transition bootstraps.
            buffer.push({obs, a, r.reward, r.observation, false});
            obs = std::move(r.observation);

            if (static_cast<std::int64_t>(buffer.size()) >= warmup) {
                const auto idx = buffer.sample(batch.size(), replay_rng);
                for (std::size_t i = 0; i < idx.size(); ++i) {
                    batch[i] = &buffer[idx[i]];
                }
                loss_sum += td_update(ck.online, ck.target, batch, schedule);
                ++loss_count;
                ++ck.grad_steps;
                if (ck.grad_steps % schedule.target_sync_period == 0) {
                    ck.target = ck.online;
                }
            }
            if (r.done || ck.env_steps >= limit) {
                break;
            }
        }
        ++ck.episodes;
        EpisodeLog row{ck.episodes - 1, ck.env_steps, episode_return,
                       schedule.epsilon_at(ck.env_steps),
                       loss_count > 0 ? loss_sum / static_cast<double>(loss_count) : 0.0};
        if (options.on_episode) {
            options.on_episode(row);
        }
        result.log.push_back(row);
    }
    ck.exploration_rng = engine_state(explore_rng);
    ck.replay_rng = engine_state(replay_rng);
    result.checkpoint = std::move(ck);
    return result;
}

}  // namespace rarl
