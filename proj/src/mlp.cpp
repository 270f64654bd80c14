#include "d2d/mlp.hpp"

#include <cmath>
#include <string>

#include "d2d/errors.hpp"
#include "d2d/kernels.hpp"

namespace d2d {

namespace kern = kernels::parallel;

double mse_loss(std::span<const double> targets, std::span<const double> predictions) {
  if (targets.size() != predictions.size()) throw ShapeError("mse_loss: length mismatch");
  if (targets.empty()) throw DomainError("mse_loss: empty batch");
  double sum = 0.0;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const double d = targets[k] - predictions[k];
    sum += d * d;
  }
  return sum / static_cast<double>(targets.size());
}

Mlp::Mlp(std::vector<std::size_t> layer_dims) : dims_(std::move(layer_dims)) {
  if (dims_.size() < 2) throw ShapeError("Mlp needs at least an input and an output width");
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
    if (dims_[l] == 0 || dims_[l + 1] == 0) throw ShapeError("Mlp layer widths must be positive");
    offsets_.push_back(total);
    total += dims_[l] * dims_[l + 1] + dims_[l + 1];
  }
  params_.assign(total, 0.0);
}

Mlp Mlp::random(std::vector<std::size_t> layer_dims, Rng& rng) {
  Mlp net(std::move(layer_dims));
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(net.dims_[l]));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (double& w : net.weights(l)) w = dist(rng);
    for (double& b : net.biases(l)) b = dist(rng);
  }
  return net;
}

std::span<double> Mlp::weights(std::size_t layer) {
  return {params_.data() + weight_offset(layer), dims_[layer] * dims_[layer + 1]};
}
std::span<const double> Mlp::weights(std::size_t layer) const {
  return {params_.data() + weight_offset(layer), dims_[layer] * dims_[layer + 1]};
}
std::span<double> Mlp::biases(std::size_t layer) {
  return {params_.data() + weight_offset(layer) + dims_[layer] * dims_[layer + 1], dims_[layer + 1]};
}
std::span<const double> Mlp::biases(std::size_t layer) const {
  return {params_.data() + weight_offset(layer) + dims_[layer] * dims_[layer + 1], dims_[layer + 1]};
}

std::vector<double> Mlp::forward(std::span<const double> state) const {
  return forward_batch(state, 1);
}

std::vector<double> Mlp::forward_batch(std::span<const double> states, std::size_t batch) const {
  if (states.size() != batch * input_size()) {
    throw ShapeError("Mlp input has " + std::to_string(states.size()) + " values, expected " +
                     std::to_string(batch) + " x " + std::to_string(input_size()));
  }
  std::vector<double> current(states.begin(), states.end());
  std::vector<double> next;
  for (std::size_t l = 0; l < num_layers(); ++l) {
    next.assign(batch * dims_[l + 1], 0.0);
    kern::dense_forward(weights(l), biases(l), current, next, batch, dims_[l], dims_[l + 1],
                        l + 1 < num_layers());
    current.swap(next);
  }
  return current;
}

LossGradient Mlp::loss_gradient(std::span<const double> states, std::span<const std::size_t> actions,
                                std::span<const double> targets) const {
  const std::size_t batch = actions.size();
  if (targets.size() != batch) throw ShapeError("loss_gradient: targets and actions differ in length");
  if (batch == 0) throw DomainError("loss_gradient: empty batch");
  if (states.size() != batch * input_size()) throw ShapeError("loss_gradient: state batch shape");
  for (std::size_t a : actions) {
    if (a >= output_size()) throw ShapeError("loss_gradient: action index out of range");
  }

  const std::size_t L = num_layers();
  // activations[0] is the input, activations[l+1] the output of layer l.
  std::vector<std::vector<double>> activations(L + 1);
  activations[0].assign(states.begin(), states.end());
  for (std::size_t l = 0; l < L; ++l) {
    activations[l + 1].assign(batch * dims_[l + 1], 0.0);
    kern::dense_forward(weights(l), biases(l), activations[l], activations[l + 1], batch, dims_[l],
                        dims_[l + 1], l + 1 < L);
  }

  const std::size_t out = output_size();
  const double inv_n = 1.0 / static_cast<double>(batch);
  std::vector<double> predicted(batch);
  std::vector<double> delta(batch * out, 0.0);
  for (std::size_t n = 0; n < batch; ++n) {
    const double q = activations[L][n * out + actions[n]];
    predicted[n] = q;
    delta[n * out + actions[n]] = 2.0 * (q - targets[n]) * inv_n;
  }

  LossGradient result;
  result.loss = mse_loss(targets, predicted);
  result.grad.assign(params_.size(), 0.0);
  std::vector<double> delta_in;
  for (std::size_t l = L; l-- > 0;) {
    const std::size_t in = dims_[l];
    const std::size_t width = dims_[l + 1];
    std::span<double> dw{result.grad.data() + weight_offset(l), in * width};
    std::span<double> db{result.grad.data() + weight_offset(l) + in * width, width};
    if (l > 0) {
      delta_in.assign(batch * in, 0.0);
      kern::dense_backward(weights(l), activations[l], delta, dw, db, delta_in, batch, in, width);
      kern::relu_backward(activations[l], delta_in);
      delta.swap(delta_in);
    } else {
      kern::dense_backward(weights(l), activations[l], delta, dw, db, {}, batch, in, width);
    }
  }
  return result;
}

}  // namespace d2d
