#include <cmath>

#include "d2d/kernels.hpp"

namespace d2d::kernels::serial {

void dense_forward(std::span<const double> w, std::span<const double> b, std::span<const double> x,
                   std::span<double> y, std::size_t batch, std::size_t in, std::size_t out,
                   bool relu) {
  for (std::size_t n = 0; n < batch; ++n) {
    double* yn = y.data() + n * out;
    const double* xn = x.data() + n * in;
    for (std::size_t o = 0; o < out; ++o) yn[o] = b[o];
    for (std::size_t i = 0; i < in; ++i) {
      const double xi = xn[i];
      const double* wi = w.data() + i * out;
      for (std::size_t o = 0; o < out; ++o) yn[o] += xi * wi[o];
    }
    if (relu) {
      for (std::size_t o = 0; o < out; ++o) yn[o] = yn[o] > 0.0 ? yn[o] : 0.0;
    }
  }
}

void dense_backward(std::span<const double> w, std::span<const double> x,
                    std::span<const double> dy, std::span<double> dw, std::span<double> db,
                    std::span<double> dx, std::size_t batch, std::size_t in, std::size_t out) {
  for (std::size_t i = 0; i < in; ++i) {
    double* dwi = dw.data() + i * out;
    for (std::size_t o = 0; o < out; ++o) dwi[o] = 0.0;
    for (std::size_t n = 0; n < batch; ++n) {
      const double xni = x[n * in + i];
      const double* dyn = dy.data() + n * out;
      for (std::size_t o = 0; o < out; ++o) dwi[o] += xni * dyn[o];
    }
  }
  for (std::size_t o = 0; o < out; ++o) db[o] = 0.0;
  for (std::size_t n = 0; n < batch; ++n) {
    const double* dyn = dy.data() + n * out;
    for (std::size_t o = 0; o < out; ++o) db[o] += dyn[o];
  }
  if (dx.empty()) return;
  for (std::size_t n = 0; n < batch; ++n) {
    const double* dyn = dy.data() + n * out;
    for (std::size_t i = 0; i < in; ++i) {
      const double* wi = w.data() + i * out;
      double acc = 0.0;
      for (std::size_t o = 0; o < out; ++o) acc += dyn[o] * wi[o];
      dx[n * in + i] = acc;
    }
  }
}

void relu_backward(std::span<const double> activation, std::span<double> grad) {
  for (std::size_t k = 0; k < grad.size(); ++k) {
    if (!(activation[k] > 0.0)) grad[k] = 0.0;
  }
}

void adam_update(std::span<double> params, std::span<const double> grads, std::span<double> m,
                 std::span<double> v, const AdamCoefficients& c) {
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double g = grads[k];
    m[k] = c.beta1 * m[k] + (1.0 - c.beta1) * g;
    v[k] = c.beta2 * v[k] + (1.0 - c.beta2) * g * g;
    const double m_hat = m[k] / c.bias1;
    const double v_hat = v[k] / c.bias2;
    params[k] -= c.lr * m_hat / (std::sqrt(v_hat) + c.eps);
  }
}

}  // namespace d2d::kernels::serial
