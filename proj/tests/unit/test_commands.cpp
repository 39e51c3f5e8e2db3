#include "rarl/checkpoint.hpp"
#include "rarl/commands.hpp"
#include "rarl/config.hpp"
#include "rarl/errors.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rarl;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("rarl_cmd_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t line_count(const fs::path& p)
{
    const std::string s = slurp(p);
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

ScenarioConfig quick(ScenarioKind kind)
{
    ScenarioConfig c = ScenarioConfig::defaults(kind);
    c.horizon = 30;
    c.agent.total_steps = 600;
    c.agent.learning_starts = 100;
    c.agent.batch_size = 16;
    c.agent.epsilon_decay_steps = 400;
    return c;
}

int run_cli(const std::string& args)
{
    const int status = std::system((std::string(RARL_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("train writes manifest, checkpoint and log, reproducibly")
{
    const auto a = scratch("train_a");
    const auto b = scratch("train_b");
    const ScenarioConfig c = quick(ScenarioKind::Asymmetric);
    const RunManifest m = run_train(c, {}, a, false);
    run_train(c, {}, b, false);
    CHECK(m.status == "complete");
    CHECK(fs::exists(a / "manifest.json"));
    CHECK(fs::exists(a / "checkpoint.bin"));
    CHECK(slurp(a / "train_log.csv").starts_with("episode,steps,return,epsilon,loss_mean\n"));
    CHECK(line_count(a / "train_log.csv") == 1 + 20);
    CHECK(slurp(a / "train_log.csv") == slurp(b / "train_log.csv"));
    CHECK(slurp(a / "checkpoint.bin") == slurp(b / "checkpoint.bin"));
    const RunManifest back = parse_manifest(slurp(a / "manifest.json"));
    CHECK(back.config == c);
    CHECK(back.command == "train");
}

TEST_CASE("existing output directories are protected")
{
    const auto dir = scratch("collide");
    const ScenarioConfig c = quick(ScenarioKind::Asymmetric);
    run_sweep(c, dir, false);
    CHECK_THROWS_AS(run_sweep(c, dir, false), std::runtime_error);
    CHECK_NOTHROW(run_sweep(c, dir, true));
}

TEST_CASE("stopped and resumed training continues the schedule")
{
    const auto first = scratch("resume_1");
    const auto second = scratch("resume_2");
    const ScenarioConfig c = quick(ScenarioKind::Asymmetric);
    TrainRequest stop;
    stop.stop_after = 300;
    run_train(c, stop, first, false);
    const AgentCheckpoint mid = load_checkpoint(first / "checkpoint.bin");
    CHECK(mid.env_steps == 300);

    TrainRequest resume;
    resume.resume = first / "checkpoint.bin";
    run_train(c, resume, second, false);
    const AgentCheckpoint done = load_checkpoint(second / "checkpoint.bin");
    CHECK(done.env_steps == 600);
    std::istringstream log(slurp(second / "train_log.csv"));
    std::string line;
    std::getline(log, line);
    while (std::getline(log, line)) {
        std::istringstream row(line);
        std::string episode, steps, ret, eps;
        std::getline(row, episode, ',');
        std::getline(row, steps, ',');
        std::getline(row, ret, ',');
        std::getline(row, eps, ',');
        CHECK(std::stod(eps) == c.agent.epsilon_at(std::stoll(steps)));
    }
}

TEST_CASE("the manifest exists before a failing run gets far")
{
    const auto src = scratch("shape_src");
    const auto dir = scratch("shape_dst");
    run_train(quick(ScenarioKind::Asymmetric), {}, src, false);
    TrainRequest bad;
    bad.resume = src / "checkpoint.bin";
    CHECK_THROWS(run_train(quick(ScenarioKind::TwoFaps), bad, dir, false));
    const RunManifest m = parse_manifest(slurp(dir / "manifest.json"));
    CHECK(m.status == "running");
}

TEST_CASE("eval of a baseline needs no checkpoint")
{
    const auto dir = scratch("eval_centroid");
    const ScenarioConfig c = quick(ScenarioKind::TwoFaps);
    run_eval(c, "centroid", 2, dir, false);
    const std::string header = slurp(dir / "eval.csv").substr(0, slurp(dir / "eval.csv").find('\n'));
    CHECK(header
          == "episode,t_s,fgw_x_m,fgw_y_m,snr_backhaul_db,rate_backhaul,throughput_backhaul_bps,"
             "snr_fap1_db,rate_fap1,throughput_fap1_bps,snr_fap2_db,rate_fap2,throughput_fap2_bps,reward");
    CHECK(line_count(dir / "eval.csv") == 1 + 2 * 30);
    const std::string summary = slurp(dir / "summary.csv");
    CHECK(summary.find("throughput_ratio_fap1_to_backhaul") != std::string::npos);
    CHECK(summary.find("throughput_ratio_fap2_to_backhaul") != std::string::npos);
    CHECK(line_count(dir / "summary.csv") == 3);
}

TEST_CASE("eval summary reports final distances")
{
    const auto dir = scratch("eval_balance");
    ScenarioConfig c = quick(ScenarioKind::Asymmetric);
    run_eval(c, "snr-balance", 1, dir, false);
    std::istringstream in(slurp(dir / "summary.csv"));
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header
          == "episode,final_x_m,final_y_m,distance_backhaul_m,distance_fap1_m,"
             "mean_throughput_backhaul_bps,mean_throughput_fap1_bps,throughput_ratio_fap1_to_backhaul,return");
    // 30 intervals from (500,500) only reach (350,350) after 12 moves
    CHECK(row.starts_with("0,350,350,494.97474683058"));
}

TEST_CASE("eval rejects a checkpoint built for another observation size")
{
    const auto src = scratch("eval_src");
    run_train(quick(ScenarioKind::Asymmetric), {}, src, false);
    CHECK_THROWS_AS(run_eval(quick(ScenarioKind::TwoFaps), (src / "checkpoint.bin").string(), 1,
                             scratch("eval_mismatch"), false),
                    ConfigError);
    CHECK_THROWS_AS(run_eval(quick(ScenarioKind::TwoFaps), "nowhere.bin", 1, scratch("eval_missing"), false),
                    ConfigError);
}

TEST_CASE("sweep output")
{
    const auto dir = scratch("sweep");
    run_sweep(quick(ScenarioKind::Asymmetric), dir, false);
    CHECK(line_count(dir / "sweep.csv") == 1 + 39);
    CHECK_THROWS_AS(run_sweep(quick(ScenarioKind::MovingFap), scratch("sweep_moving"), false), ConfigError);
}

TEST_CASE("replaying a manifest reproduces the CSVs")
{
    const auto a = scratch("replay_a");
    const auto b = scratch("replay_b");
    run_eval(quick(ScenarioKind::MovingFap), "follow-fap", 2, a, false);
    run_replay(a / "manifest.json", b, false);
    CHECK(slurp(a / "eval.csv") == slurp(b / "eval.csv"));
    CHECK(slurp(a / "summary.csv") == slurp(b / "summary.csv"));
}

TEST_CASE("baseline point description")
{
    const std::string s = describe_baseline_point(ScenarioConfig::defaults(ScenarioKind::Asymmetric));
    CHECK(s.find("snapped_x_m,350\n") != std::string::npos);
    CHECK(s.find("distance_ratio,0.562341\n") != std::string::npos);
    const std::string t = describe_baseline_point(ScenarioConfig::defaults(ScenarioKind::TwoFaps));
    CHECK(t.find("centroid_x_m,675\n") != std::string::npos);
}

TEST_CASE("command-line exit codes")
{
    const auto dir = scratch("cli");
    CHECK(run_cli("validate-config --scenario asymmetric") == 0);
    CHECK(run_cli("validate-config --scenario nonsense") == 2);
    CHECK(run_cli("frobnicate") == 2);
    CHECK(run_cli("sweep --scenario moving-fap --out " + dir.string()) == 2);
    CHECK(run_cli("sweep --scenario asymmetric --seed 4 --out " + dir.string()) == 0);
    CHECK(run_cli("sweep --scenario asymmetric --out " + dir.string()) == 3);
    CHECK(run_cli("sweep --scenario asymmetric --force --out " + dir.string()) == 0);
    CHECK(run_cli("baseline-point --scenario two-faps") == 0);
}
