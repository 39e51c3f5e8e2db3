#include "rarl/replay_buffer.hpp"

#include "rarl/errors.hpp"

namespace rarl {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity)
{
    if (capacity_ == 0) {
        throw ContractViolation("ReplayBuffer: capacity must be positive");
    }
    items_.reserve(capacity_);
}

void ReplayBuffer::push(Transition t)
{
    if (items_.size() < capacity_) {
        items_.push_back(std::move(t));
    } else {
        items_[next_] = std::move(t);
    }
    next_ = (next_ + 1) % capacity_;
}

std::vector<std::size_t> ReplayBuffer::sample(std::size_t count, Rng& rng) const
{
    if (items_.empty()) {
        throw ContractViolation("ReplayBuffer::sample: buffer is empty");
    }
    std::vector<std::size_t> idx(count);
    for (auto& i : idx) {
        i = static_cast<std::size_t>(uniform_index(rng, items_.size()));
    }
    return idx;
}

}  // namespace rarl
