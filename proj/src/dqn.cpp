#include "d2d/dqn.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "d2d/errors.hpp"

namespace d2d {

double td_target(double reward, double max_next_q, double decay) {
  if (!(decay >= 0.0 && decay <= 1.0)) {
    throw DomainError("decay factor must lie in [0, 1], got " + std::to_string(decay));
  }
  return reward + decay * max_next_q;
}

std::size_t greedy_action(std::span<const double> q) {
  if (q.empty()) throw ShapeError("greedy_action: no q-values");
  std::size_t best = 0;
  for (std::size_t a = 1; a < q.size(); ++a) {
    if (q[a] > q[best]) best = a;
  }
  return best;
}

std::size_t epsilon_greedy(std::span<const double> q, double epsilon, Rng& rng) {
  if (q.empty()) throw ShapeError("epsilon_greedy: no q-values");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw DomainError("epsilon must lie in [0, 1]");
  if (uniform01(rng) < epsilon) {
    return std::uniform_int_distribution<std::size_t>(0, q.size() - 1)(rng);
  }
  return greedy_action(q);
}

std::optional<double> train_step(Mlp& net, AdamState& opt, const ReplayMemory& memory,
                                 std::size_t batch_size, double decay, Rng& rng,
                                 const Mlp* target_net) {
  auto batch = memory.sample(batch_size, rng);
  if (!batch) return std::nullopt;

  const std::size_t dim = net.input_size();
  std::vector<double> states;
  std::vector<double> next_states;
  std::vector<std::size_t> actions;
  states.reserve(batch_size * dim);
  next_states.reserve(batch_size * dim);
  actions.reserve(batch_size);
  for (const Transition& t : *batch) {
    if (t.state.size() != dim) throw ShapeError("train_step: transition does not match network input");
    states.insert(states.end(), t.state.begin(), t.state.end());
    next_states.insert(next_states.end(), t.next_state.begin(), t.next_state.end());
    actions.push_back(t.action);
  }

  const Mlp& bootstrap = target_net ? *target_net : net;
  const std::vector<double> next_q = bootstrap.forward_batch(next_states, batch_size);
  const std::size_t width = bootstrap.output_size();
  std::vector<double> targets(batch_size);
  for (std::size_t n = 0; n < batch_size; ++n) {
    const auto first = next_q.begin() + static_cast<std::ptrdiff_t>(n * width);
    const double max_next = *std::max_element(first, first + static_cast<std::ptrdiff_t>(width));
    targets[n] = td_target((*batch)[n].reward, max_next, decay);
  }

  LossGradient lg = net.loss_gradient(states, actions, targets);
  adam_step(opt, net.params(), lg.grad);
  return lg.loss;
}

}  // namespace d2d
