// Command-line front end: train, eval, sweep, baseline-point, validate-config, replay.

#include "rarl/commands.hpp"
#include "rarl/config.hpp"
#include "rarl/errors.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct ScenarioArgs {
    std::string config_path;
    std::string scenario;
    std::optional<std::uint64_t> seed;

    void attach(CLI::App* cmd)
    {
        auto* cfg = cmd->add_option("--config", config_path, "Scenario JSON file");
        auto* sc = cmd->add_option("--scenario", scenario,
                                   "Built-in scenario: asymmetric, moving-fap, two-faps");
        cfg->excludes(sc);
        cmd->add_option("--seed", seed, "Override the scenario seed");
    }

    rarl::ScenarioConfig resolve() const
    {
        rarl::ScenarioConfig c;
        if (!config_path.empty()) {
            c = rarl::load_config(config_path);
        } else if (!scenario.empty()) {
            c = rarl::parse_config(R"({"kind": ")" + scenario + R"("})");
        } else {
            throw rarl::ConfigError("one of --config or --scenario is required");
        }
        if (seed) {
            c.seed = *seed;
        }
        c.validate();
        return c;
    }
};

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Rate-adaptation-aware flying gateway positioning"};
    app.set_version_flag("--version", std::string(rarl::kToolVersion));
    app.require_subcommand(1);

    std::string out;
    bool force = false;

    ScenarioArgs train_args;
    std::optional<std::int64_t> stop_after;
    std::string resume;
    auto* train = app.add_subcommand("train", "Train a DQN agent");
    train_args.attach(train);
    train->add_option("--out", out, "Run directory")->required();
    train->add_flag("--force", force, "Reuse a non-empty run directory");
    train->add_option("--stop-after", stop_after, "Stop after this many environment steps")
        ->check(CLI::PositiveNumber);
    train->add_option("--resume", resume, "Continue from a checkpoint")->check(CLI::ExistingFile);

    ScenarioArgs eval_args;
    std::string policy;
    int episodes = 5;
    auto* eval = app.add_subcommand("eval", "Roll out a checkpoint or a baseline");
    eval_args.attach(eval);
    eval->add_option("--policy", policy, "Checkpoint path or snr-balance | follow-fap | centroid")
        ->required();
    eval->add_option("--episodes", episodes, "Evaluation episodes")->check(CLI::PositiveNumber);
    eval->add_option("--out", out, "Run directory")->required();
    eval->add_flag("--force", force, "Reuse a non-empty run directory");

    ScenarioArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "Move the FGW along the venue diagonal");
    sweep_args.attach(sweep);
    sweep->add_option("--out", out, "Run directory")->required();
    sweep->add_flag("--force", force, "Reuse a non-empty run directory");

    ScenarioArgs point_args;
    auto* point = app.add_subcommand("baseline-point", "Print the geometric baseline target");
    point_args.attach(point);

    ScenarioArgs validate_args;
    auto* validate = app.add_subcommand("validate-config", "Check a config and print it resolved");
    validate_args.attach(validate);

    std::string manifest;
    auto* replay = app.add_subcommand("replay", "Re-run a recorded manifest");
    replay->add_option("--manifest", manifest, "manifest.json of a previous run")
        ->required()
        ->check(CLI::ExistingFile);
    replay->add_option("--out", out, "Run directory")->required();
    replay->add_flag("--force", force, "Reuse a non-empty run directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*train) {
            rarl::TrainRequest req;
            req.stop_after = stop_after;
            if (!resume.empty()) {
                req.resume = resume;
            }
            rarl::run_train(train_args.resolve(), req, out, force, &std::cerr);
            std::cout << "wrote " << out << '\n';
        } else if (*eval) {
            rarl::run_eval(eval_args.resolve(), policy, episodes, out, force);
            std::cout << "wrote " << out << '\n';
        } else if (*sweep) {
            rarl::run_sweep(sweep_args.resolve(), out, force);
            std::cout << "wrote " << out << '\n';
        } else if (*point) {
            std::cout << rarl::describe_baseline_point(point_args.resolve());
        } else if (*validate) {
            std::cout << rarl::serialize_config(validate_args.resolve());
        } else if (*replay) {
            rarl::run_replay(manifest, out, force, &std::cerr);
            std::cout << "wrote " << out << '\n';
        }
    } catch (const rarl::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
