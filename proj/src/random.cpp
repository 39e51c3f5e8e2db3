#include "rarl/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rarl {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream)
{
    return splitmix64(root + (stream + 1) * 0x9E3779B97F4A7C15ULL);
}

std::uint64_t uniform_index(Rng& rng, std::uint64_t n)
{
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t draw = rng();
    while (draw >= limit) {
        draw = rng();
    }
    return draw % n;
}

std::int64_t binomial(Rng& rng, std::int64_t n, double p)
{
    if (n <= 0 || p <= 0.0) {
        return 0;
    }
    if (p >= 1.0) {
        return n;
    }
    // Small counts: direct Bernoulli trials.
    if (n < 64) {
        std::int64_t k = 0;
        for (std::int64_t i = 0; i < n; ++i) {
            k += uniform01(rng) < p ? 1 : 0;
        }
        return k;
    }
    // Larger counts: inversion over the pmf, walking outward from the mode so
    // the expected number of terms is O(sqrt(n p (1-p))).
    const double q = 1.0 - p;
    const auto mode = static_cast<std::int64_t>(std::floor((n + 1) * p));
    const double log_pmf_mode = std::lgamma(n + 1.0) - std::lgamma(mode + 1.0) -
                                std::lgamma(n - mode + 1.0) + mode * std::log(p) +
                                (n - mode) * std::log(q);
    const double pmf_mode = std::exp(log_pmf_mode);
    double u = uniform01(rng);

    double up_pmf = pmf_mode;
    double down_pmf = pmf_mode;
    std::int64_t up = mode;
    std::int64_t down = mode;
    u -= pmf_mode;
    if (u < 0.0) {
        return mode;
    }
    const double ratio = p / q;
    while (up < n || down > 0) {
        if (up < n) {
            up_pmf *= ratio * static_cast<double>(n - up) / static_cast<double>(up + 1);
            ++up;
            u -= up_pmf;
            if (u < 0.0) {
                return up;
            }
        }
        if (down > 0) {
            down_pmf *= static_cast<double>(down) / (ratio * static_cast<double>(n - down + 1));
            --down;
            u -= down_pmf;
            if (u < 0.0) {
                return down;
            }
        }
    }
    // Rounding residue; fall back to the mode.
    return mode;
}

}  // namespace rarl
