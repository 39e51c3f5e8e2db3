#pragma once

#include "rarl/action.hpp"
#include "rarl/random.hpp"

#include <cstddef>
#include <vector>

namespace rarl {

struct Transition {
    std::vector<double> obs;
    Action action = Action::Same;
    double reward = 0.0;
    std::vector<double> next_obs;
    bool done = false;  // true terminal; time-limit truncation is not terminal
};

/// Fixed-capacity ring of transitions with uniform sampling.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(Transition t);
    std::size_t size() const { return items_.size(); }
    std::size_t capacity() const { return capacity_; }
    const Transition& operator[](std::size_t i) const { return items_[i]; }

    /// `count` indices drawn uniformly with replacement. Buffer must be non-empty.
    std::vector<std::size_t> sample(std::size_t count, Rng& rng) const;

private:
    std::size_t capacity_;
    std::size_t next_ = 0;
    std::vector<Transition> items_;
};

}  // namespace rarl
