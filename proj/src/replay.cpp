#include "d2d/replay.hpp"

#include <algorithm>

#include "d2d/errors.hpp"

namespace d2d {

ReplayMemory::ReplayMemory(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ConfigError("replay_capacity", "must be at least 1");
  buffer_.reserve(std::min<std::size_t>(capacity, 1 << 16));
}

void ReplayMemory::push(Transition t) {
  if (t.state.size() != t.next_state.size()) {
    throw ShapeError("transition state and next_state differ in dimension");
  }
  if (!buffer_.empty() && buffer_.front().state.size() != t.state.size()) {
    throw ShapeError("transition dimension differs from stored transitions");
  }
  if (buffer_.size() < capacity_) {
    buffer_.push_back(std::move(t));
    return;
  }
  buffer_[head_] = std::move(t);
  head_ = (head_ + 1) % capacity_;
}

const Transition& ReplayMemory::at(std::size_t age_index) const {
  if (age_index >= buffer_.size()) throw DomainError("replay index out of range");
  return buffer_[(head_ + age_index) % buffer_.size()];
}

std::optional<std::vector<Transition>> ReplayMemory::sample(std::size_t batch_size, Rng& rng) const {
  const std::size_t n = buffer_.size();
  if (batch_size == 0 || batch_size > n) return std::nullopt;

  // Floyd's subset sampling, then a shuffle so the order is uniform too.
  std::vector<std::size_t> picked;
  picked.reserve(batch_size);
  std::vector<bool> taken(n, false);
  for (std::size_t j = n - batch_size; j < n; ++j) {
    const std::size_t t = std::uniform_int_distribution<std::size_t>(0, j)(rng);
    const std::size_t k = taken[t] ? j : t;
    taken[k] = true;
    picked.push_back(k);
  }
  std::shuffle(picked.begin(), picked.end(), rng);

  std::vector<Transition> batch;
  batch.reserve(batch_size);
  for (std::size_t k : picked) batch.push_back(buffer_[k]);
  return batch;
}

}  // namespace d2d
