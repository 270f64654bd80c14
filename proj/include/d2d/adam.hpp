#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace d2d {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  AdamState() = default;
  AdamState(std::size_t num_params, AdamConfig cfg)
      : config(cfg), first_moment(num_params, 0.0), second_moment(num_params, 0.0) {}

  AdamConfig config;
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  std::uint64_t step_count = 0;
};

// Bias-corrected Adam update of params in place; increments step_count.
void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads);

}  // namespace d2d
