#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "d2d/random.hpp"

namespace d2d {

struct LossGradient {
  double loss = 0.0;
  std::vector<double> grad;  // same layout as Mlp::params()
};

/// Mean of squared differences. Throws DomainError on an empty batch and
/// ShapeError on a length mismatch.
double mse_loss(std::span<const double> targets, std::span<const double> predictions);

// Fully connected Q-network: ReLU on hidden layers, identity on the output.
//
// All parameters live in one contiguous vector. Layer l occupies
//   weights: in_l * out_l values, row-major [in][out]
//   biases:  out_l values
// in that order, layer after layer.
class Mlp {
 public:
  Mlp() = default;
  // Zero-initialized network. layer_dims = {input, hidden..., output}.
  explicit Mlp(std::vector<std::size_t> layer_dims);

  // Weights and biases uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)].
  static Mlp random(std::vector<std::size_t> layer_dims, Rng& rng);

  const std::vector<std::size_t>& layer_dims() const noexcept { return dims_; }
  std::size_t num_layers() const noexcept { return dims_.empty() ? 0 : dims_.size() - 1; }
  std::size_t input_size() const noexcept { return dims_.front(); }
  std::size_t output_size() const noexcept { return dims_.back(); }
  std::size_t num_params() const noexcept { return params_.size(); }

  std::span<double> params() noexcept { return params_; }
  std::span<const double> params() const noexcept { return params_; }
  std::span<double> weights(std::size_t layer);
  std::span<const double> weights(std::size_t layer) const;
  std::span<double> biases(std::size_t layer);
  std::span<const double> biases(std::size_t layer) const;

  std::vector<double> forward(std::span<const double> state) const;
  // states is [batch x input_size], result [batch x output_size].
  std::vector<double> forward_batch(std::span<const double> states, std::size_t batch) const;

  // Loss (1/n) sum_k (y_k - Q(s_k, a_k))^2 over the batch and its exact
  // gradient; outputs of untaken actions receive zero gradient.
  LossGradient loss_gradient(std::span<const double> states, std::span<const std::size_t> actions,
                             std::span<const double> targets) const;

  bool operator==(const Mlp&) const = default;

 private:
  std::size_t weight_offset(std::size_t layer) const { return offsets_.at(layer); }

  std::vector<std::size_t> dims_;
  std::vector<std::size_t> offsets_;
  std::vector<double> params_;
};

}  // namespace d2d
