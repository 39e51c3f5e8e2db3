#include "rarl/venue.hpp"

#include "rarl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rarl {

namespace {

bool is_multiple(double value, double step)
{
    const double q = value / step;
    return std::abs(q - std::round(q)) < 1e-9;
}

}  // namespace

std::string_view to_string(Action a)
{
    switch (a) {
    case Action::Left: return "left";
    case Action::Right: return "right";
    case Action::Up: return "up";
    case Action::Down: return "down";
    case Action::Same: return "same";
    }
    return "?";
}

std::optional<Action> parse_action(std::string_view name)
{
    for (Action a : kAllActions) {
        if (to_string(a) == name) {
            return a;
        }
    }
    return std::nullopt;
}

void Venue::validate() const
{
    if (!(width > 0.0) || !(height > 0.0)) {
        throw ConfigError("venue: width and height must be positive");
    }
    if (!(step > 0.0)) {
        throw ConfigError("venue.step: must be positive");
    }
    if (!is_multiple(width, step) || !is_multiple(height, step)) {
        throw ConfigError("venue.step: must divide venue width and height evenly");
    }
    if (!(decision_interval > 0.0)) {
        throw ConfigError("venue.decision_interval: must be positive");
    }
}

bool Venue::contains(Position p) const
{
    return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
}

bool Venue::is_grid_aligned(Position p) const
{
    return is_multiple(p.x, step) && is_multiple(p.y, step);
}

std::size_t Venue::columns() const
{
    return static_cast<std::size_t>(std::llround(width / step)) + 1;
}

std::size_t Venue::rows() const
{
    return static_cast<std::size_t>(std::llround(height / step)) + 1;
}

double Venue::diagonal() const
{
    return std::hypot(width, height);
}

Position Venue::cell_position(std::size_t index) const
{
    const std::size_t col = index % columns();
    const std::size_t row = index / columns();
    return {static_cast<double>(col) * step, static_cast<double>(row) * step};
}

std::size_t Venue::cell_index(Position p) const
{
    const Position s = snap(p);
    const auto col = static_cast<std::size_t>(std::llround(s.x / step));
    const auto row = static_cast<std::size_t>(std::llround(s.y / step));
    return row * columns() + col;
}

Position Venue::clamp(Position p) const
{
    return {std::clamp(p.x, 0.0, width), std::clamp(p.y, 0.0, height)};
}

Position Venue::snap(Position p) const
{
    const Position c = clamp(p);
    return clamp({std::round(c.x / step) * step, std::round(c.y / step) * step});
}

double distance(Position a, Position b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

Position clamp_move(Position p, Action action, const Venue& venue)
{
    switch (action) {
    case Action::Left: p.x -= venue.step; break;
    case Action::Right: p.x += venue.step; break;
    case Action::Up: p.y += venue.step; break;
    case Action::Down: p.y -= venue.step; break;
    case Action::Same: break;
    }
    return venue.clamp(p);
}

WaypointSchedule::WaypointSchedule(std::vector<Waypoint> waypoints)
    : waypoints_(std::move(waypoints))
{
    if (waypoints_.empty()) {
        throw ConfigError("waypoints: schedule must contain at least one waypoint");
    }
    for (std::size_t i = 1; i < waypoints_.size(); ++i) {
        if (!(waypoints_[i].time > waypoints_[i - 1].time)) {
            throw ConfigError("waypoints[" + std::to_string(i) +
                              "].t: waypoint times must be strictly increasing");
        }
    }
}

double WaypointSchedule::end_time() const
{
    return waypoints_.empty() ? 0.0 : waypoints_.back().time;
}

Position WaypointSchedule::position_at(double t) const
{
    if (waypoints_.empty()) {
        throw ConfigError("waypoints: empty schedule");
    }
    if (t < 0.0) {
        throw ContractViolation("position_at: t must be non-negative");
    }
    if (t <= waypoints_.front().time) {
        return waypoints_.front().target;
    }
    if (t >= waypoints_.back().time) {
        return waypoints_.back().target;
    }
    const auto next = std::upper_bound(
        waypoints_.begin(), waypoints_.end(), t,
        [](double value, const Waypoint& w) { return value < w.time; });
    const Waypoint& b = *next;
    const Waypoint& a = *(next - 1);
    const double f = (t - a.time) / (b.time - a.time);
    return {a.target.x + f * (b.target.x - a.target.x),
            a.target.y + f * (b.target.y - a.target.y)};
}

}  // namespace rarl
