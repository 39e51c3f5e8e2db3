#include "rarl/baselines.hpp"
#include "rarl/env.hpp"
#include "rarl/errors.hpp"
#include "rarl/random.hpp"

#include <doctest.h>

#include <cmath>

using namespace rarl;

namespace {

RadioConfig radio(double p)
{
    RadioConfig r;
    r.tx_power_dbm = p;
    return r;
}

}  // namespace

TEST_CASE("SNR balance with equal powers is the midpoint")
{
    const BalancePoint b = snr_balance_point({0, 0}, {1000, 1000}, radio(20), radio(20), Venue{});
    CHECK(b.exact.x == doctest::Approx(500));
    CHECK(b.exact.y == doctest::Approx(500));
    CHECK(b.snapped == Position{500, 500});
    CHECK(b.distance_ratio == doctest::Approx(1.0));
}

TEST_CASE("SNR balance with a weaker backhaul")
{
    const BalancePoint b = snr_balance_point({0, 0}, {1000, 1000}, radio(15), radio(20), Venue{});
    CHECK(b.distance_ratio == doctest::Approx(0.562341).epsilon(1e-5));
    // d_B / d_F = k on the segment puts the point at k / (1 + k) of the way
    const double frac = 0.562341 / 1.562341;
    CHECK(b.exact.x == doctest::Approx(1000 * frac).epsilon(1e-5));
    CHECK(b.exact.x == doctest::Approx(360).epsilon(0.01));
    CHECK((b.snapped == Position{350, 350} || b.snapped == Position{375, 375}));
    const double pre = snr(radio(15), distance(b.exact, {0, 0})) - snr(radio(20), distance(b.exact, {1000, 1000}));
    CHECK(std::abs(pre) <= 1e-9);
    const double post = snr(radio(15), distance(b.snapped, {0, 0})) - snr(radio(20), distance(b.snapped, {1000, 1000}));
    CHECK(std::abs(post) <= 0.5);
}

TEST_CASE("SNR balance holds for random geometries")
{
    Rng rng(4);
    for (int i = 0; i < 500; ++i) {
        const Position b{1000 * uniform01(rng), 1000 * uniform01(rng)};
        const Position f{1000 * uniform01(rng), 1000 * uniform01(rng)};
        if (distance(b, f) < 50) {
            continue;
        }
        const double pb = 10 + 10 * uniform01(rng);
        const double pf = 10 + 10 * uniform01(rng);
        const BalancePoint p = snr_balance_point(b, f, radio(pb), radio(pf), Venue{});
        const double diff = snr(radio(pb), distance(p.exact, b)) - snr(radio(pf), distance(p.exact, f));
        REQUIRE(std::abs(diff) <= 0.5);
        REQUIRE(Venue{}.is_grid_aligned(p.snapped));
    }
    CHECK_THROWS_AS(snr_balance_point({5, 5}, {5, 5}, radio(20), radio(20), Venue{}), ContractViolation);
}

TEST_CASE("follow-FAP target")
{
    CHECK(follow_fap_target({0, 500}, {1000, 500}, 0.5, Venue{}) == Position{500, 500});
    CHECK(follow_fap_target({0, 0}, {600, 600}, 0.5, Venue{}) == Position{300, 300});
    CHECK_THROWS_AS(follow_fap_target({0, 0}, {600, 600}, 1.0, Venue{}), ContractViolation);
    CHECK_THROWS_AS(follow_fap_target({0, 0}, {600, 600}, 0.0, Venue{}), ContractViolation);
}

TEST_CASE("follow-FAP target moves at most one step per interval along the schedule")
{
    const ScenarioConfig c = ScenarioConfig::defaults(ScenarioKind::MovingFap);
    const BaselinePolicy policy(BaselineKind::FollowFap, c);
    Position prev = policy.target({c.backhaul, c.fgw_start, {c.fap_position(0, 0)}});
    for (int t = 1; t <= c.horizon; ++t) {
        const Position next = policy.target({c.backhaul, c.fgw_start, {c.fap_position(0, t)}});
        CHECK(std::abs(next.x - prev.x) <= c.venue.step);
        CHECK(std::abs(next.y - prev.y) <= c.venue.step);
        prev = next;
    }
}

TEST_CASE("centroid target")
{
    CHECK(centroid_target({0, 500}, {1000, 1000}, {1000, 0}, Venue{}) == Position{675, 500});
    CHECK(centroid_target({250, 250}, {250, 250}, {250, 250}, Venue{}) == Position{250, 250});
    Rng rng(9);
    for (int i = 0; i < 200; ++i) {
        const Position a{1000 * uniform01(rng), 1000 * uniform01(rng)};
        const Position b{1000 * uniform01(rng), 1000 * uniform01(rng)};
        const Position d{1000 * uniform01(rng), 1000 * uniform01(rng)};
        const Position ref = centroid_target(a, b, d, Venue{});
        REQUIRE(centroid_target(b, d, a, Venue{}) == ref);
        REQUIRE(centroid_target(d, a, b, Venue{}) == ref);
    }
}

TEST_CASE("greedy baseline step")
{
    CHECK(baseline_policy_step({300, 300}, {300, 300}) == Action::Same);
    CHECK(baseline_policy_step({300, 300}, {400, 325}) == Action::Right);
    CHECK(baseline_policy_step({300, 300}, {325, 200}) == Action::Down);
    CHECK(baseline_policy_step({300, 300}, {250, 350}) == Action::Left);
}

TEST_CASE("repeated baseline steps reach the target in L1 / step moves")
{
    const Venue v;
    Rng rng(13);
    for (int i = 0; i < 200; ++i) {
        Position p = v.cell_position(uniform_index(rng, v.cell_count()));
        const Position target = v.cell_position(uniform_index(rng, v.cell_count()));
        const int expect =
            static_cast<int>(std::lround((std::abs(p.x - target.x) + std::abs(p.y - target.y)) / v.step));
        int steps = 0;
        while (!(p == target) && steps < 1000) {
            p = clamp_move(p, baseline_policy_step(p, target), v);
            ++steps;
        }
        REQUIRE(steps == expect);
        REQUIRE(baseline_policy_step(p, target) == Action::Same);
    }
}

TEST_CASE("baseline policies require matching topologies")
{
    CHECK_THROWS_AS(BaselinePolicy(BaselineKind::Centroid, ScenarioConfig::defaults(ScenarioKind::Asymmetric)),
                    ConfigError);
    CHECK_THROWS_AS(BaselinePolicy(BaselineKind::SnrBalance, ScenarioConfig::defaults(ScenarioKind::TwoFaps)),
                    ConfigError);
    CHECK(parse_baseline_kind("follow-fap") == BaselineKind::FollowFap);
    CHECK_FALSE(parse_baseline_kind("nearest").has_value());
}

TEST_CASE("SNR-balance baseline walks to its target and stays")
{
    const ScenarioConfig c = ScenarioConfig::defaults(ScenarioKind::Asymmetric);
    const BaselinePolicy policy(BaselineKind::SnrBalance, c);
    RelayEnv env(c);
    env.reset(1);
    while (!env.done()) {
        env.step(policy.act(env.last_snapshot().nodes));
    }
    CHECK(env.fgw() == policy.target(env.last_snapshot().nodes));
}

TEST_CASE("centroid is not optimal on the two-FAP topology")
{
    const ScenarioConfig c = ScenarioConfig::defaults(ScenarioKind::TwoFaps);
    double best = -1e300;
    for (std::size_t s = 0; s < c.venue.cell_count(); ++s) {
        best = std::max(best, expected_reward(c, c.venue.cell_position(s), c.faps));
    }
    const Position cen = centroid_target(c.backhaul, c.faps[0], c.faps[1], c.venue);
    CHECK(best >= expected_reward(c, cen, c.faps));
}
