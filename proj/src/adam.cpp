#include "d2d/adam.hpp"

#include <cmath>

#include "d2d/errors.hpp"
#include "d2d/kernels.hpp"

namespace d2d {

void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads) {
  if (params.size() != grads.size() || params.size() != state.first_moment.size() ||
      params.size() != state.second_moment.size()) {
    throw ShapeError("adam_step: parameter, gradient and moment sizes differ");
  }
  ++state.step_count;
  const double t = static_cast<double>(state.step_count);
  kernels::AdamCoefficients c;
  c.lr = state.config.lr;
  c.beta1 = state.config.beta1;
  c.beta2 = state.config.beta2;
  c.eps = state.config.eps;
  c.bias1 = 1.0 - std::pow(c.beta1, t);
  c.bias2 = 1.0 - std::pow(c.beta2, t);
  kernels::parallel::adam_update(params, grads, state.first_moment, state.second_moment, c);
}

}  // namespace d2d
