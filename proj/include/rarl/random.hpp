#pragma once

#include <cstdint>
#include <random>

namespace rarl {

using Rng = std::mt19937_64;

/// Counter-based seed split. Stream `k` of root seed `r` is
/// splitmix64(r + (k + 1) * 0x9E3779B97F4A7C15), so streams never depend on
/// how many other streams were drawn before them.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream);

// Stream ids used across the project. Evaluation episodes use
// kEvalEpisodeBase + episode index.
namespace streams {
inline constexpr std::uint64_t kEnvironment = 1;
inline constexpr std::uint64_t kNetworkInit = 2;
inline constexpr std::uint64_t kExploration = 3;
inline constexpr std::uint64_t kReplay = 4;
inline constexpr std::uint64_t kEpisodeBase = 1000;
inline constexpr std::uint64_t kEvalEpisodeBase = 1'000'000;
}  // namespace streams

/// Uniform double in [0, 1) built from the top 53 bits; identical across
/// standard libraries, unlike std::uniform_real_distribution.
inline double uniform01(Rng& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n) by rejection; n > 0.
std::uint64_t uniform_index(Rng& rng, std::uint64_t n);

/// Binomial(n, p) draw, equivalent to n independent Bernoulli(p) trials.
std::int64_t binomial(Rng& rng, std::int64_t n, double p);

}  // namespace rarl
