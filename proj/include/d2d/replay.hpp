#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "d2d/random.hpp"

namespace d2d {

struct Transition {
  std::vector<double> state;
  std::size_t action = 0;
  double reward = 0.0;
  std::vector<double> next_state;

  bool operator==(const Transition&) const = default;
};

// Bounded FIFO of transitions. Once full, each push evicts the oldest entry.
class ReplayMemory {
 public:
  explicit ReplayMemory(std::size_t capacity);

  // Throws ShapeError if state/next_state dimensions differ from each other
  // or from transitions already stored.
  void push(Transition t);

  std::size_t size() const noexcept { return buffer_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  bool empty() const noexcept { return buffer_.empty(); }

  // Index 0 is the oldest stored transition.
  const Transition& at(std::size_t age_index) const;

  // batch_size distinct transitions drawn uniformly, in random order.
  // std::nullopt when fewer than batch_size are stored (or batch_size is 0).
  std::optional<std::vector<Transition>> sample(std::size_t batch_size, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;  // slot of the oldest entry once full
  std::vector<Transition> buffer_;
};

}  // namespace d2d
