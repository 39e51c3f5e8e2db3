#pragma once

#include "rarl/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rarl {

inline constexpr std::string_view kToolVersion = "rarl 1.0.0";

/// Recorded before a run starts and rewritten when it completes. Holds every
/// input that influences the CSVs; the timestamps do not.
struct RunManifest {
    std::string command;  // train | eval | sweep
    ScenarioConfig config;
    std::string policy;                      // eval
    int episodes = 0;                        // eval
    std::optional<std::int64_t> stop_after;  // train
    std::string resume;                      // train, checkpoint path or empty
    std::vector<std::string> artifacts;      // file names inside the run directory
    std::string version{kToolVersion};
    std::string started_utc;
    std::string finished_utc;
    std::string status = "running";
};

std::string serialize_manifest(const RunManifest& manifest);
/// Throws ConfigError on a malformed manifest.
RunManifest parse_manifest(const std::string& text);

inline constexpr const char* kManifestFile = "manifest.json";

struct TrainRequest {
    std::optional<std::int64_t> stop_after;
    std::optional<std::filesystem::path> resume;
};

/// Trains a DQN agent and writes manifest.json, checkpoint.bin and
/// train_log.csv. Refuses a non-empty `out_dir` unless `force`.
RunManifest run_train(const ScenarioConfig& config, const TrainRequest& request,
                      const std::filesystem::path& out_dir, bool force, std::ostream* progress = nullptr);

/// Greedy rollouts of a checkpoint or a named baseline ("snr-balance",
/// "follow-fap", "centroid"); writes eval.csv and summary.csv.
RunManifest run_eval(const ScenarioConfig& config, const std::string& policy, int episodes,
                     const std::filesystem::path& out_dir, bool force);

/// Diagonal sweep of a static scenario; writes sweep.csv.
RunManifest run_sweep(const ScenarioConfig& config, const std::filesystem::path& out_dir, bool force);

/// Re-executes the run described by a manifest into `out_dir`.
RunManifest run_replay(const std::filesystem::path& manifest_path,
                       const std::filesystem::path& out_dir, bool force, std::ostream* progress = nullptr);

/// Human-readable geometric baseline target for the scenario's initial geometry.
std::string describe_baseline_point(const ScenarioConfig& config);

}  // namespace rarl
