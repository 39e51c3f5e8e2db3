#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace rarl {

/// Discrete FGW movement. Up is +y, Right is +x.
enum class Action : int { Left = 0, Right = 1, Up = 2, Down = 3, Same = 4 };

inline constexpr std::size_t kActionCount = 5;

inline constexpr std::array<Action, kActionCount> kAllActions{
    Action::Left, Action::Right, Action::Up, Action::Down, Action::Same};

constexpr int to_index(Action a) { return static_cast<int>(a); }

constexpr Action action_from_index(int i) { return static_cast<Action>(i); }

std::string_view to_string(Action a);
std::optional<Action> parse_action(std::string_view name);

}  // namespace rarl
