#include "rarl/checkpoint.hpp"
#include "rarl/dqn.hpp"
#include "rarl/errors.hpp"
#include "rarl/qnetwork.hpp"
#include "rarl/replay_buffer.hpp"
#include "rarl/tabular.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <set>

using namespace rarl;

namespace {

QNetwork with_output_bias(std::vector<double> q)
{
    QNetwork net({2, 4, static_cast<int>(q.size())});
    for (std::size_t i = 0; i < q.size(); ++i) {
        net.biases.back()[static_cast<Eigen::Index>(i)] = q[i];
    }
    return net;
}

// Builds the network the hand computation below refers to.
QNetwork golden_net()
{
    QNetwork net({2, 2, 2, 1});
    net.weights[0] << 1, 0, 0, -1;
    net.biases[0] << 0.5, 0;
    net.weights[1] << 2, 1, -1, 1;
    net.biases[1] << 0, 1;
    net.weights[2] << 1, 3;
    net.biases[2] << -1;
    return net;
}

double relative_error(double a, double b)
{
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6});
}

ScenarioConfig tiny_grid()
{
    ScenarioConfig c = ScenarioConfig::defaults(ScenarioKind::Custom);
    c.venue.width = 50;
    c.venue.height = 50;
    c.backhaul = {0, 0};
    c.faps = {{50, 50}};
    c.fgw_start = {0, 0};
    c.horizon = 10;
    return c;
}

TrainSchedule small_schedule()
{
    TrainSchedule s;
    s.total_steps = 3000;
    s.learning_starts = 200;
    s.batch_size = 16;
    s.epsilon_decay_steps = 2000;
    s.target_sync_period = 100;
    s.learning_rate = 1e-2;
    s.reward_scale = 0.02;
    return s;
}

}  // namespace

TEST_CASE("zero network outputs zeros")
{
    const QNetwork net({6, 64, 64, 5});
    CHECK(net.parameter_count() == 6 * 64 + 64 + 64 * 64 + 64 + 64 * 5 + 5);
    const std::vector<double> obs{0.1, 0.9, 0.3, 0.2, 0.5, 0.7};
    CHECK(net.forward(obs).isZero());
}

TEST_CASE("hand-computed forward pass")
{
    // layer 1: relu([2 + 0.5, -3]) = [2.5, 0]
    // layer 2: relu([5, -2.5 + 1]) = [5, 0]
    // output:  5 - 1 = 4
    const std::vector<double> x{2, 3};
    CHECK(golden_net().forward(x)[0] == doctest::Approx(4.0));
}

TEST_CASE("doubling the output layer doubles every Q-value")
{
    Rng rng(3);
    QNetwork net = QNetwork::random({4, 8, 8, 5}, rng);
    const std::vector<double> obs{0.2, 0.4, 0.6, 0.8};
    const Eigen::VectorXd q = net.forward(obs);
    net.weights.back() *= 2;
    net.biases.back() *= 2;
    CHECK((net.forward(obs) - 2 * q).norm() < 1e-12);
}

TEST_CASE("forward rejects a wrong observation length")
{
    const QNetwork net({3, 4, 5});
    const std::vector<double> obs{1, 2};
    CHECK_THROWS_AS(net.forward(obs), ContractViolation);
}

TEST_CASE("batch forward matches single forwards")
{
    Rng rng(5);
    const QNetwork net = QNetwork::random({3, 7, 5}, rng);
    Eigen::MatrixXd x = Eigen::MatrixXd::Random(3, 9);
    const Eigen::MatrixXd q = net.forward_batch(x);
    for (int j = 0; j < 9; ++j) {
        const std::vector<double> col(x.col(j).data(), x.col(j).data() + 3);
        CHECK((net.forward(col) - q.col(j)).norm() < 1e-12);
    }
}

TEST_CASE("random initialization respects the fan-in bound")
{
    Rng rng(8);
    const QNetwork net = QNetwork::random({6, 64, 64, 5}, rng);
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(net.layer_sizes()[l]));
        CHECK(net.weights[l].cwiseAbs().maxCoeff() <= bound);
        CHECK(net.biases[l].cwiseAbs().maxCoeff() <= bound);
    }
    Rng same(8);
    CHECK(QNetwork::random({6, 64, 64, 5}, same) == net);
}

TEST_CASE("closed-form gradient of a two-parameter net")
{
    QNetwork net({1, 1});
    net.weights[0] << 0.5;
    net.biases[0] << 0.1;
    Eigen::MatrixXd x(1, 1);
    x << 2.0;
    const std::vector<int> a{0};
    const std::vector<double> y{3.0};
    NetworkGradients g;
    const double loss = net.squared_error(x, a, y, &g);
    // Q = 1.1, loss = 1.9^2, dL/dw = 2 (Q - y) x, dL/db = 2 (Q - y)
    CHECK(loss == doctest::Approx(3.61));
    CHECK(g.weights[0](0, 0) == doctest::Approx(-7.6));
    CHECK(g.biases[0](0) == doctest::Approx(-3.8));

    TrainSchedule s;
    s.gamma = 0.0;
    s.learning_rate = 0.01;
    const Transition t{{2.0}, Action::Left, 3.0, {0.0}, false};
    const std::vector<const Transition*> batch{&t};
    const QNetwork target = net;
    CHECK(td_update(net, target, batch, s) == doctest::Approx(3.61));
    CHECK(net.weights[0](0, 0) == doctest::Approx(0.5 + 0.076));
    CHECK(net.biases[0](0) == doctest::Approx(0.1 + 0.038));
}

TEST_CASE("no update at the TD fixed point")
{
    Rng rng(2);
    QNetwork net = QNetwork::random({3, 6, 5}, rng);
    const QNetwork before = net;
    TrainSchedule s;
    s.gamma = 0.0;
    std::vector<Transition> ts;
    for (int i = 0; i < 4; ++i) {
        std::vector<double> obs{0.1 * i, 0.5, 0.9 - 0.2 * i};
        const Action a = action_from_index(i);
        ts.push_back({obs, a, net.forward(obs)[to_index(a)], obs, false});
    }
    std::vector<const Transition*> batch;
    for (const auto& t : ts) {
        batch.push_back(&t);
    }
    CHECK(td_update(net, before, batch, s) == doctest::Approx(0.0).epsilon(1e-24));
    CHECK(net == before);
}

TEST_CASE("TD targets bootstrap unless terminal")
{
    QNetwork target = with_output_bias({1, 4, 2, 0, 3});
    TrainSchedule s;
    s.gamma = 0.5;
    s.reward_scale = 2.0;
    const Transition live{{0, 0}, Action::Up, 1.0, {0, 0}, false};
    const Transition dead{{0, 0}, Action::Up, 1.0, {0, 0}, true};
    const std::vector<const Transition*> batch{&live, &dead};
    const auto y = td_targets(target, batch, s);
    CHECK(y[0] == doctest::Approx(2.0 + 0.5 * 4));
    CHECK(y[1] == doctest::Approx(2.0));
}

TEST_CASE("backprop agrees with central differences")
{
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const std::vector<int> sizes{3, 5, 4, 5};
        const QNetwork net = QNetwork::random(sizes, rng);
        const int n = 6;
        Eigen::MatrixXd x(3, n);
        std::vector<int> a(n);
        std::vector<double> y(n);
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < 3; ++i) {
                x(i, j) = uniform01(rng);
            }
            a[j] = static_cast<int>(uniform_index(rng, 5));
            y[j] = 2 * uniform01(rng) - 1;
        }
        NetworkGradients g;
        net.squared_error(x, a, y, &g);
        std::vector<double> analytic;
        for (std::size_t l = 0; l < g.weights.size(); ++l) {
            for (Eigen::Index i = 0; i < g.weights[l].size(); ++i) {
                analytic.push_back(g.weights[l].reshaped<Eigen::RowMajor>()(i));
            }
            for (Eigen::Index i = 0; i < g.biases[l].size(); ++i) {
                analytic.push_back(g.biases[l](i));
            }
        }
        std::vector<double> theta = net.flat_parameters();
        REQUIRE(theta.size() == analytic.size());
        QNetwork probe = net;
        for (std::size_t k = 0; k < theta.size(); ++k) {
            const double h = 1e-6;
            const double orig = theta[k];
            theta[k] = orig + h;
            probe.set_flat_parameters(theta);
            const double up = probe.squared_error(x, a, y, nullptr);
            theta[k] = orig - h;
            probe.set_flat_parameters(theta);
            const double down = probe.squared_error(x, a, y, nullptr);
            theta[k] = orig;
            const double numeric = (up - down) / (2 * h);
            CAPTURE(k);
            REQUIRE(relative_error(analytic[k], numeric) <= 1e-4);
        }
    }
}

TEST_CASE("gradient clipping bounds the step")
{
    QNetwork net({1, 1});
    TrainSchedule s;
    s.gamma = 0.0;
    s.learning_rate = 1.0;
    s.grad_clip_norm = 10.0;
    const Transition t{{1.0}, Action::Left, 1000.0, {1.0}, false};
    const std::vector<const Transition*> batch{&t};
    const QNetwork target = net;
    td_update(net, target, batch, s);
    const double step = std::hypot(net.weights[0](0, 0), net.biases[0](0));
    CHECK(step == doctest::Approx(10.0));
}

TEST_CASE("greedy action and tie-break")
{
    const std::vector<double> obs{0.3, 0.6};
    Rng rng(1);
    CHECK(act(with_output_bias({1, 5, 2, 2, 0}), obs, 0.0, rng) == Action::Right);
    CHECK(act(with_output_bias({3, 3, 1, 3, 0}), obs, 0.0, rng) == Action::Left);
    CHECK(greedy_action(with_output_bias({0, 0, 0, 7, 7}), obs) == Action::Down);
}

TEST_CASE("fully random actions are uniform")
{
    const QNetwork net = with_output_bias({1, 5, 2, 2, 0});
    const std::vector<double> obs{0.3, 0.6};
    Rng rng(2024);
    std::vector<int> counts(5, 0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        ++counts[to_index(act(net, obs, 1.0, rng))];
    }
    double chi2 = 0.0;
    for (int c : counts) {
        CHECK(std::abs(c / double(n) - 0.2) <= 0.02 * 0.2);
        chi2 += (c - n / 5.0) * (c - n / 5.0) / (n / 5.0);
    }
    CHECK(chi2 < 18.47);  // 4 dof, p = 0.001
}

TEST_CASE("replay buffer keeps the newest transitions")
{
    ReplayBuffer buf(3);
    for (int i = 0; i < 5; ++i) {
        buf.push({{double(i)}, Action::Same, double(i), {double(i)}, false});
    }
    CHECK(buf.size() == 3);
    std::multiset<double> rewards;
    for (std::size_t i = 0; i < buf.size(); ++i) {
        rewards.insert(buf[i].reward);
    }
    CHECK(rewards == std::multiset<double>{2, 3, 4});
    Rng rng(1);
    for (std::size_t idx : buf.sample(100, rng)) {
        CHECK(idx < 3);
    }
    ReplayBuffer empty(4);
    CHECK_THROWS_AS(empty.sample(1, rng), ContractViolation);
}

TEST_CASE("epsilon schedule")
{
    TrainSchedule s;
    CHECK(s.epsilon_at(0) == 1.0);
    CHECK(s.epsilon_at(15000) == doctest::Approx(0.525));
    CHECK(s.epsilon_at(30000) == s.epsilon_end);
    CHECK(s.epsilon_at(1000000) == s.epsilon_end);
}

TEST_CASE("schedule validation")
{
    TrainSchedule s;
    CHECK_NOTHROW(s.validate());
    s.gamma = 1.0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = {};
    s.epsilon_end = 0.5;
    s.epsilon_start = 0.2;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = {};
    s.batch_size = 0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("checkpoint round-trip is lossless")
{
    Rng rng(6);
    AgentCheckpoint ck;
    ck.online = QNetwork::random({6, 64, 64, 5}, rng);
    ck.target = QNetwork::random({6, 64, 64, 5}, rng);
    ck.schedule.learning_rate = 0.0123;
    ck.seed = 99;
    ck.env_steps = 1234;
    ck.grad_steps = 234;
    ck.episodes = 10;
    Rng a(1);
    a.discard(17);
    std::ostringstream state;
    state << a;
    ck.exploration_rng = state.str();
    ck.replay_rng = state.str();

    const AgentCheckpoint back = deserialize_checkpoint(serialize_checkpoint(ck));
    CHECK(back == ck);
    const std::vector<double> obs{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
    const Eigen::VectorXd q1 = ck.online.forward(obs);
    const Eigen::VectorXd q2 = back.online.forward(obs);
    for (int i = 0; i < 5; ++i) {
        CHECK(q1[i] == q2[i]);
    }

    const auto path = std::filesystem::temp_directory_path() / "rarl_ckpt_test.bin";
    save_checkpoint(ck, path);
    CHECK(load_checkpoint(path) == ck);
    std::filesystem::remove(path);
}

TEST_CASE("malformed checkpoints are rejected")
{
    Rng rng(6);
    AgentCheckpoint ck;
    ck.online = QNetwork::random({2, 3, 5}, rng);
    ck.target = ck.online;
    const std::string bytes = serialize_checkpoint(ck);
    CHECK_THROWS_AS(deserialize_checkpoint(bytes.substr(0, bytes.size() / 2)), ContractViolation);
    std::string bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS_AS(deserialize_checkpoint(bad), ContractViolation);
    CHECK_THROWS_AS(load_checkpoint("/nonexistent/ckpt.bin"), std::runtime_error);
}

TEST_CASE("training is reproducible per seed")
{
    GridMdpEnv env_a(tiny_grid());
    GridMdpEnv env_b(tiny_grid());
    const TrainResult a = train(env_a, small_schedule(), 7);
    const TrainResult b = train(env_b, small_schedule(), 7);
    CHECK(a.log == b.log);
    CHECK(a.checkpoint == b.checkpoint);
    CHECK(a.checkpoint.env_steps == 3000);
}

TEST_CASE("resumed training continues the schedule")
{
    GridMdpEnv env(tiny_grid());
    TrainOptions stop;
    stop.stop_after = 1500;
    const TrainResult first = train(env, small_schedule(), 7, std::nullopt, stop);
    CHECK(first.checkpoint.env_steps == 1500);
    const TrainResult rest = train(env, small_schedule(), 7, first.checkpoint);
    CHECK(rest.checkpoint.env_steps == 3000);
    REQUIRE_FALSE(rest.log.empty());
    CHECK(rest.log.front().episode == first.log.back().episode + 1);
    for (const EpisodeLog& row : rest.log) {
        CHECK(row.epsilon == small_schedule().epsilon_at(row.steps));
    }
    CHECK(rest.checkpoint.grad_steps > first.checkpoint.grad_steps);
}

TEST_CASE("DQN recovers the optimal policy on a 3x3 grid")
{
    const ScenarioConfig c = tiny_grid();
    GridMdpEnv env(c);
    TrainSchedule s = small_schedule();
    // short effective horizon keeps the action gaps large next to the values
    s.gamma = 0.5;
    s.reward_scale = 0.05;
    s.total_steps = 20000;
    s.epsilon_decay_steps = 12500;
    const TrainResult r = train(env, s, 3);
    const ValueIterationResult vi = value_iteration(env.mdp(), s.gamma);
    REQUIRE(vi.converged);
    for (std::size_t st = 0; st < env.mdp().state_count(); ++st) {
        const Action a = greedy_action(r.checkpoint.online, env.observation_at(c.venue.cell_position(st)));
        const std::size_t k = static_cast<std::size_t>(to_index(a));
        const double q = env.mdp().reward[st][k] + s.gamma * vi.values[env.mdp().next[st][k]];
        CAPTURE(st);
        CHECK(q >= vi.values[st] - 1e-6 * std::abs(vi.values[st]));
    }
}
