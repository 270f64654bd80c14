#pragma once

// Q-learning pieces shared by every agent: bootstrap target, action
// selection and the replay-driven gradient step.

#include <cstddef>
#include <optional>
#include <span>

#include "d2d/adam.hpp"
#include "d2d/mlp.hpp"
#include "d2d/random.hpp"
#include "d2d/replay.hpp"

namespace d2d {

/// reward + decay * max_next_q. decay must lie in [0, 1].
double td_target(double reward, double max_next_q, double decay);

/// Index of the largest q-value; ties go to the lowest index.
std::size_t greedy_action(std::span<const double> q);

// Uniform random action with probability epsilon, greedy otherwise.
// Always consumes one uniform draw, plus one more when exploring.
std::size_t epsilon_greedy(std::span<const double> q, double epsilon, Rng& rng);

// One learning step: sample batch_size transitions, bootstrap targets from
// target_net (or net itself when null) on the next states, and apply one
// Adam update of the mean-squared TD error. Returns the loss before the update,
// or std::nullopt (and leaves everything untouched) if the memory holds fewer
// than batch_size transitions.
std::optional<double> train_step(Mlp& net, AdamState& opt, const ReplayMemory& memory,
                                 std::size_t batch_size, double decay, Rng& rng,
                                 const Mlp* target_net = nullptr);

}  // namespace d2d
