#include "rarl/errors.hpp"
#include "rarl/random.hpp"
#include "rarl/scenario.hpp"
#include "rarl/venue.hpp"

#include <doctest.h>

#include <cmath>

using namespace rarl;

TEST_CASE("clamp_move steps one cell and stops at the boundary")
{
    const Venue v;
    CHECK(clamp_move({500, 500}, Action::Left, v) == Position{475, 500});
    CHECK(clamp_move({500, 500}, Action::Right, v) == Position{525, 500});
    CHECK(clamp_move({500, 500}, Action::Up, v) == Position{500, 525});
    CHECK(clamp_move({500, 500}, Action::Down, v) == Position{500, 475});
    CHECK(clamp_move({0, 500}, Action::Left, v) == Position{0, 500});
    CHECK(clamp_move({1000, 1000}, Action::Up, v) == Position{1000, 1000});
    CHECK(clamp_move({500, 500}, Action::Same, v) == Position{500, 500});
}

TEST_CASE("random walks stay inside the venue and on the grid")
{
    const Venue v;
    Rng rng(42);
    Position p{500, 500};
    for (int i = 0; i < 20000; ++i) {
        p = clamp_move(p, action_from_index(static_cast<int>(uniform_index(rng, kActionCount))), v);
        REQUIRE(v.contains(p));
        REQUIRE(v.is_grid_aligned(p));
    }
}

TEST_CASE("distance examples")
{
    CHECK(distance({0, 0}, {1000, 1000}) == doctest::Approx(1414.214).epsilon(1e-6));
    CHECK(distance({175, 525}, {0, 0}) == doctest::Approx(553.40).epsilon(1e-5));
    CHECK(distance({333, 777}, {333, 777}) == 0.0);
}

TEST_CASE("grid indexing round-trips")
{
    const Venue v;
    CHECK(v.columns() == 41);
    CHECK(v.rows() == 41);
    CHECK(v.cell_count() == 1681);
    for (std::size_t i = 0; i < v.cell_count(); ++i) {
        REQUIRE(v.cell_index(v.cell_position(i)) == i);
    }
    CHECK(v.cell_position(0) == Position{0, 0});
    CHECK(v.cell_position(41) == Position{0, 25});
    CHECK(v.snap({361, 359}) == Position{350, 350});
    CHECK(v.snap({-40, 1200}) == Position{0, 1000});
}

TEST_CASE("venue validation")
{
    Venue v;
    v.width = 990;  // not a multiple of the step
    CHECK_THROWS_AS(v.validate(), ConfigError);
    v = Venue{};
    v.step = 0;
    CHECK_THROWS_AS(v.validate(), ConfigError);
    CHECK_NOTHROW(Venue{}.validate());
}

TEST_CASE("waypoint schedule interpolation")
{
    const WaypointSchedule s({{0, {600, 600}}, {20, {600, 600}}, {40, {1000, 1000}}});
    CHECK(s.position_at(30) == Position{800, 800});
    CHECK(s.position_at(100) == Position{1000, 1000});
    CHECK(s.position_at(0) == Position{600, 600});
    CHECK(s.end_time() == 40);
    CHECK_THROWS_AS(s.position_at(-1), ContractViolation);
}

TEST_CASE("waypoint schedule holds the first target before its first time")
{
    const WaypointSchedule s({{5, {100, 100}}, {15, {200, 100}}});
    CHECK(s.position_at(0) == Position{100, 100});
    CHECK(s.position_at(10) == Position{150, 100});
}

TEST_CASE("waypoint schedule rejects bad input")
{
    CHECK_THROWS_AS(WaypointSchedule(std::vector<Waypoint>{}), ConfigError);
    CHECK_THROWS_AS(WaypointSchedule({{0, {0, 0}}, {0, {25, 0}}}), ConfigError);
    CHECK_THROWS_AS(WaypointSchedule({{10, {0, 0}}, {5, {25, 0}}}), ConfigError);
}

TEST_CASE("default moving schedule")
{
    const WaypointSchedule s = default_moving_schedule();
    CHECK(s.position_at(10) == Position{600, 600});
    CHECK(s.position_at(50) == Position{1000, 1000});
    CHECK(s.position_at(80) == Position{700, 300});
    CHECK(s.position_at(200) == Position{700, 300});
    // constant speed per segment, fastest on the last leg
    double fastest = 0.0;
    for (int t = 0; t < 100; ++t) {
        fastest = std::max(fastest, distance(s.position_at(t), s.position_at(t + 1)));
    }
    CHECK(fastest == doctest::Approx(std::hypot(300.0, 700.0) / 20.0));
}
