#pragma once

#include "rarl/action.hpp"

#include <cstddef>
#include <vector>

namespace rarl {

struct Position {
    double x = 0.0;  // meters
    double y = 0.0;  // meters

    friend bool operator==(const Position&, const Position&) = default;
};

/// Rectangular operating area with a movement grid of `step` meters.
struct Venue {
    double width = 1000.0;
    double height = 1000.0;
    double step = 25.0;
    double decision_interval = 1.0;  // seconds

    /// Throws ConfigError unless dimensions are positive and divisible by step.
    void validate() const;

    bool contains(Position p) const;
    bool is_grid_aligned(Position p) const;

    std::size_t columns() const;  // width / step + 1
    std::size_t rows() const;     // height / step + 1
    std::size_t cell_count() const { return columns() * rows(); }
    double diagonal() const;

    /// Row-major grid indexing: index = row * columns() + column.
    Position cell_position(std::size_t index) const;
    std::size_t cell_index(Position p) const;

    /// Nearest grid point, clamped into the venue.
    Position snap(Position p) const;
    Position clamp(Position p) const;

    friend bool operator==(const Venue&, const Venue&) = default;
};

double distance(Position a, Position b);

/// One `step` along the action's axis, clamped to the venue bounds.
Position clamp_move(Position p, Action action, const Venue& venue);

struct Waypoint {
    double time = 0.0;  // seconds
    Position target;

    friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

/// Straight-line, constant-speed motion between time-stamped targets.
class WaypointSchedule {
public:
    WaypointSchedule() = default;
    /// Throws ConfigError when empty or times are not strictly increasing.
    explicit WaypointSchedule(std::vector<Waypoint> waypoints);

    /// Holds the first target before the first waypoint time and the last
    /// target after the final one. Throws ConfigError on an empty schedule and
    /// ContractViolation for t < 0.
    Position position_at(double t) const;

    const std::vector<Waypoint>& waypoints() const { return waypoints_; }
    bool empty() const { return waypoints_.empty(); }
    double end_time() const;

    friend bool operator==(const WaypointSchedule&, const WaypointSchedule&) = default;

private:
    std::vector<Waypoint> waypoints_;
};

}  // namespace rarl
