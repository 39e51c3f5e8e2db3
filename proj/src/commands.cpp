#include "rarl/commands.hpp"

#include "rarl/baselines.hpp"
#include "rarl/checkpoint.hpp"
#include "rarl/config.hpp"
#include "rarl/csv.hpp"
#include "rarl/dqn.hpp"
#include "rarl/env.hpp"
#include "rarl/errors.hpp"
#include "rarl/linksim.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>
#include <variant>

namespace rarl {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

std::string utc_now()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void prepare_out_dir(const fs::path& out_dir, bool force)
{
    if (fs::exists(out_dir)) {
        if (!fs::is_directory(out_dir)) {
            throw std::runtime_error(out_dir.string() + " exists and is not a directory");
        }
        if (!fs::is_empty(out_dir) && !force) {
            throw std::runtime_error(out_dir.string() + " is not empty; pass --force to overwrite");
        }
    }
    fs::create_directories(out_dir);
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << text;
}

std::string read_text(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_manifest(const fs::path& out_dir, const RunManifest& m)
{
    write_text(out_dir / kManifestFile, serialize_manifest(m));
}

std::vector<std::string> link_names(const ScenarioConfig& c)
{
    std::vector<std::string> names{"backhaul"};
    for (std::size_t i = 0; i < c.fap_count(); ++i) {
        names.push_back("fap" + std::to_string(i + 1));
    }
    return names;
}

std::vector<const LinkMetrics*> links_of(const NetworkSnapshot& s)
{
    std::vector<const LinkMetrics*> links{&s.backhaul_link};
    for (const LinkMetrics& m : s.fap_links) {
        links.push_back(&m);
    }
    return links;
}

// t, position, then snr/rate/throughput per link, then reward.
std::vector<std::string> snapshot_header(const ScenarioConfig& c)
{
    std::vector<std::string> h{"t_s", "fgw_x_m", "fgw_y_m"};
    for (const auto& n : link_names(c)) {
        h.push_back("snr_" + n + "_db");
        h.push_back("rate_" + n);
        h.push_back("throughput_" + n + "_bps");
    }
    h.push_back("reward");
    return h;
}

std::vector<std::string> snapshot_cells(const NetworkSnapshot& s, double reward)
{
    std::vector<std::string> cells{format_number(s.time_s), format_number(s.nodes.fgw.x),
                                   format_number(s.nodes.fgw.y)};
    for (const LinkMetrics* m : links_of(s)) {
        cells.push_back(format_number(m->snr_db));
        cells.push_back(std::to_string(m->chosen_rate));
        cells.push_back(format_number(m->throughput_bps));
    }
    cells.push_back(format_number(reward));
    return cells;
}

using EvalPolicy = std::variant<AgentCheckpoint, BaselinePolicy>;

EvalPolicy resolve_policy(const ScenarioConfig& config, const std::string& policy)
{
    if (const auto kind = parse_baseline_kind(policy)) {
        return BaselinePolicy(*kind, config);
    }
    if (!fs::exists(policy)) {
        throw ConfigError("policy: \"" + policy
                          + "\" is neither a checkpoint file nor a baseline "
                            "(snr-balance, follow-fap, centroid)");
    }
    AgentCheckpoint ck = load_checkpoint(policy);
    const auto expected = observation_size_for(config);
    if (static_cast<std::size_t>(ck.online.input_size()) != expected) {
        throw ConfigError("policy: checkpoint expects observations of size "
                          + std::to_string(ck.online.input_size()) + ", scenario "
                          + std::string(to_string(config.kind)) + " produces "
                          + std::to_string(expected));
    }
    return ck;
}

RunManifest execute(RunManifest m, const fs::path& out_dir, bool force, std::ostream* progress);

void run_train_into(const RunManifest& m, const fs::path& out_dir, std::ostream* progress)
{
    std::optional<AgentCheckpoint> resume;
    if (!m.resume.empty()) {
        resume = load_checkpoint(m.resume);
    }
    RelayEnv env(m.config);
    CsvWriter log(out_dir / "train_log.csv", {"episode", "steps", "return", "epsilon", "loss_mean"});
    TrainOptions options;
    options.stop_after = m.stop_after;
    options.on_episode = [&](const EpisodeLog& row) {
        log.row({std::to_string(row.episode), std::to_string(row.steps),
                 format_number(row.episode_return), format_number(row.epsilon),
                 format_number(row.loss_mean)});
        if (progress && (row.episode + 1) % 100 == 0) {
            *progress << "episode " << row.episode + 1 << "  steps " << row.steps << "  return "
                      << format_fixed(row.episode_return, 2) << "  epsilon "
                      << format_fixed(row.epsilon, 3) << '\n';
        }
    };
    TrainResult result = train(env, m.config.agent, m.config.seed, resume, options);
    save_checkpoint(result.checkpoint, out_dir / "checkpoint.bin");
}

void run_eval_into(const RunManifest& m, const fs::path& out_dir)
{
    const ScenarioConfig& c = m.config;
    const EvalPolicy policy = resolve_policy(c, m.policy);
    RelayEnv env(c);
    const auto names = link_names(c);

    auto header = snapshot_header(c);
    header.insert(header.begin(), "episode");
    CsvWriter rows(out_dir / "eval.csv", header);

    std::vector<std::string> sh{"episode", "final_x_m", "final_y_m"};
    for (const auto& n : names) {
        sh.push_back("distance_" + n + "_m");
    }
    for (const auto& n : names) {
        sh.push_back("mean_throughput_" + n + "_bps");
    }
    for (std::size_t i = 1; i < names.size(); ++i) {
        sh.push_back("throughput_ratio_" + names[i] + "_to_backhaul");
    }
    sh.push_back("return");
    CsvWriter summary(out_dir / "summary.csv", sh);

    const int tail = std::min(20, c.horizon);
    for (int e = 0; e < m.episodes; ++e) {
        Observation obs = env.reset(derive_seed(c.seed, streams::kEvalEpisodeBase
                                                            + static_cast<std::uint64_t>(e)));
        std::vector<NetworkSnapshot> history;
        double ret = 0.0;
        while (!env.done()) {
            Action a = Action::Same;
            if (const auto* ck = std::get_if<AgentCheckpoint>(&policy)) {
                a = greedy_action(ck->online, obs);
            } else {
                a = std::get<BaselinePolicy>(policy).act(env.last_snapshot().nodes);
            }
            StepResult r = env.step(a);
            ret += r.reward;
            auto cells = snapshot_cells(r.info, r.reward);
            cells.insert(cells.begin(), std::to_string(e));
            rows.row(cells);
            history.push_back(std::move(r.info));
            obs = std::move(r.observation);
        }

        const NetworkSnapshot& last = history.back();
        std::vector<std::string> cells{std::to_string(e), format_number(last.nodes.fgw.x),
                                       format_number(last.nodes.fgw.y)};
        cells.push_back(format_number(link_distance(last.nodes.backhaul, last.nodes.fgw)));
        for (const Position& f : last.nodes.faps) {
            cells.push_back(format_number(link_distance(last.nodes.fgw, f)));
        }
        std::vector<double> sums(names.size(), 0.0);
        for (auto it = history.end() - tail; it != history.end(); ++it) {
            const auto links = links_of(*it);
            for (std::size_t i = 0; i < links.size(); ++i) {
                sums[i] += links[i]->throughput_bps;
            }
        }
        for (double s : sums) {
            cells.push_back(format_number(s / tail));
        }
        for (std::size_t i = 1; i < sums.size(); ++i) {
            cells.push_back(format_number(sums[0] > 0.0 ? sums[i] / sums[0] : 0.0));
        }
        cells.push_back(format_number(ret));
        summary.row(cells);
    }
}

void run_sweep_into(const RunManifest& m, const fs::path& out_dir)
{
    const auto samples = sweep_diagonal(m.config, m.config.seed);
    auto header = snapshot_header(m.config);
    header.insert(header.begin(), "index");
    CsvWriter out(out_dir / "sweep.csv", header);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        auto cells = snapshot_cells(samples[i].snapshot, reward_from(m.config, samples[i].snapshot));
        cells.insert(cells.begin(), std::to_string(i));
        out.row(cells);
    }
}

RunManifest execute(RunManifest m, const fs::path& out_dir, bool force, std::ostream* progress)
{
    m.config.validate();
    if (m.command == "eval" && m.episodes < 1) {
        throw ConfigError("episodes: must be at least 1");
    }
    if (m.command == "sweep" && m.config.is_moving()) {
        throw ConfigError("sweep: requires a static scenario, " + std::string(to_string(m.config.kind))
                          + " has a moving FAP");
    }
    if (m.command == "eval") {
        resolve_policy(m.config, m.policy);  // fail before touching the output directory
    }
    prepare_out_dir(out_dir, force);
    m.started_utc = utc_now();
    m.finished_utc.clear();
    m.status = "running";
    m.version = std::string(kToolVersion);
    write_manifest(out_dir, m);

    if (m.command == "train") {
        run_train_into(m, out_dir, progress);
    } else if (m.command == "eval") {
        run_eval_into(m, out_dir);
    } else if (m.command == "sweep") {
        run_sweep_into(m, out_dir);
    } else {
        throw ConfigError("command: unknown \"" + m.command + "\"");
    }

    m.finished_utc = utc_now();
    m.status = "complete";
    write_manifest(out_dir, m);
    return m;
}

}  // namespace

std::string serialize_manifest(const RunManifest& m)
{
    Json j;
    j["command"] = m.command;
    j["version"] = m.version;
    j["status"] = m.status;
    j["started_utc"] = m.started_utc;
    j["finished_utc"] = m.finished_utc;
    j["artifacts"] = m.artifacts;
    if (m.command == "eval") {
        j["policy"] = m.policy;
        j["episodes"] = m.episodes;
    }
    if (m.command == "train") {
        j["stop_after"] = m.stop_after ? Json(*m.stop_after) : Json(nullptr);
        j["resume"] = m.resume;
    }
    j["config"] = Json::parse(serialize_config(m.config));
    return j.dump(2) + "\n";
}

RunManifest parse_manifest(const std::string& text)
{
    try {
        const Json j = Json::parse(text);
        RunManifest m;
        m.command = j.at("command").get<std::string>();
        m.version = j.value("version", std::string(kToolVersion));
        m.status = j.value("status", std::string());
        m.started_utc = j.value("started_utc", std::string());
        m.finished_utc = j.value("finished_utc", std::string());
        m.artifacts = j.value("artifacts", std::vector<std::string>{});
        m.policy = j.value("policy", std::string());
        m.episodes = j.value("episodes", 0);
        if (j.contains("stop_after") && !j.at("stop_after").is_null()) {
            m.stop_after = j.at("stop_after").get<std::int64_t>();
        }
        m.resume = j.value("resume", std::string());
        m.config = parse_config(j.at("config").dump());
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("manifest: ") + e.what());
    }
}

RunManifest run_train(const ScenarioConfig& config, const TrainRequest& request,
                      const fs::path& out_dir, bool force, std::ostream* progress)
{
    RunManifest m;
    m.command = "train";
    m.config = config;
    m.stop_after = request.stop_after;
    if (request.resume) {
        m.resume = fs::absolute(*request.resume).string();
    }
    m.artifacts = {kManifestFile, "checkpoint.bin", "train_log.csv"};
    return execute(std::move(m), out_dir, force, progress);
}

RunManifest run_eval(const ScenarioConfig& config, const std::string& policy, int episodes,
                     const fs::path& out_dir, bool force)
{
    RunManifest m;
    m.command = "eval";
    m.config = config;
    m.policy = parse_baseline_kind(policy) ? policy : fs::absolute(policy).string();
    m.episodes = episodes;
    m.artifacts = {kManifestFile, "eval.csv", "summary.csv"};
    return execute(std::move(m), out_dir, force, nullptr);
}

RunManifest run_sweep(const ScenarioConfig& config, const fs::path& out_dir, bool force)
{
    RunManifest m;
    m.command = "sweep";
    m.config = config;
    m.artifacts = {kManifestFile, "sweep.csv"};
    return execute(std::move(m), out_dir, force, nullptr);
}

RunManifest run_replay(const fs::path& manifest_path, const fs::path& out_dir, bool force,
                       std::ostream* progress)
{
    RunManifest m = parse_manifest(read_text(manifest_path));
    return execute(std::move(m), out_dir, force, progress);
}

std::string describe_baseline_point(const ScenarioConfig& c)
{
    std::ostringstream out;
    if (c.fap_count() == 2) {
        const Position p = centroid_target(c.backhaul, c.faps[0], c.faps[1], c.venue);
        out << "centroid_x_m," << format_number(p.x) << '\n'
            << "centroid_y_m," << format_number(p.y) << '\n'
            << "expected_reward," << format_number(expected_reward(c, p, c.faps)) << '\n';
        return out.str();
    }
    const BalancePoint b =
        snr_balance_point(c.backhaul, c.faps[0], c.backhaul_radio, c.fgw_radio, c.venue);
    out << "exact_x_m," << format_fixed(b.exact.x, 3) << '\n'
        << "exact_y_m," << format_fixed(b.exact.y, 3) << '\n'
        << "snapped_x_m," << format_number(b.snapped.x) << '\n'
        << "snapped_y_m," << format_number(b.snapped.y) << '\n'
        << "distance_ratio," << format_fixed(b.distance_ratio, 6) << '\n'
        << "snr_backhaul_db," << format_fixed(snr(c.backhaul_radio, link_distance(c.backhaul, b.snapped)), 3) << '\n'
        << "snr_fap_db," << format_fixed(snr(c.fgw_radio, link_distance(b.snapped, c.faps[0])), 3) << '\n';
    return out.str();
}

}  // namespace rarl
