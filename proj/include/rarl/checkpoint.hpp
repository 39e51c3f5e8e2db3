#pragma once

#include "rarl/dqn.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace rarl {

// Checkpoint layout (all integers and floats little-endian):
//
//   "RARLCKPT" | u32 version | u32 record count | records...
//   record := u16 name length | name | u8 kind | u8 rank | rank x u64 dims | payload
//   kind 0: f64 tensor, row-major, prod(dims) values
//   kind 1: i64 tensor, row-major, prod(dims) values
//   kind 2: string, payload u64 length | bytes (rank 0)
//
// Records: "layer_sizes", "online.w<l>", "online.b<l>", "target.w<l>",
// "target.b<l>", "schedule.*", "position.*", "seed", "rng.*".
inline constexpr std::uint32_t kCheckpointVersion = 1;

std::string serialize_checkpoint(const AgentCheckpoint& ck);
/// Throws ContractViolation on malformed input.
AgentCheckpoint deserialize_checkpoint(const std::string& bytes);

/// Throws std::runtime_error with the path on IO failure.
void save_checkpoint(const AgentCheckpoint& ck, const std::filesystem::path& path);
AgentCheckpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace rarl
