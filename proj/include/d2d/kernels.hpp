#pragma once

// Dense-layer and optimizer kernels used by the Q-network.
//
// Two implementations with identical signatures:
//   kernels::serial    plain loops, the reference used by tests
//   kernels::parallel  OpenMP work-sharing over independent outputs
//
// Both accumulate every output element in the same order, so their results
// are bit-identical for any thread count. The parallel versions fall back to
// a single thread for small problems and when already inside a parallel region.
//
// Layout: x is [batch x in], w is [in x out], b is [out], y is [batch x out],
// all row-major.

#include <cstddef>
#include <span>

namespace d2d::kernels {

struct AdamCoefficients {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double bias1 = 1.0;  // 1 - beta1^t
  double bias2 = 1.0;  // 1 - beta2^t
};

#define D2D_KERNEL_DECLS                                                                           \
  /* y = x w + b, optionally followed by ReLU. */                                                 \
  void dense_forward(std::span<const double> w, std::span<const double> b,                        \
                     std::span<const double> x, std::span<double> y, std::size_t batch,           \
                     std::size_t in, std::size_t out, bool relu);                                 \
  /* dw = x^T dy, db = column sums of dy, dx = dy w^T (skipped when dx is empty). */              \
  void dense_backward(std::span<const double> w, std::span<const double> x,                       \
                      std::span<const double> dy, std::span<double> dw, std::span<double> db,     \
                      std::span<double> dx, std::size_t batch, std::size_t in, std::size_t out);  \
  /* grad[k] = 0 wherever activation[k] <= 0. */                                                   \
  void relu_backward(std::span<const double> activation, std::span<double> grad);                 \
  void adam_update(std::span<double> params, std::span<const double> grads, std::span<double> m,  \
                   std::span<double> v, const AdamCoefficients& c);

namespace serial {
D2D_KERNEL_DECLS
}  // namespace serial

namespace parallel {
D2D_KERNEL_DECLS
// Threads the parallel kernels may use (1 when built without OpenMP).
int max_threads();
}  // namespace parallel

#undef D2D_KERNEL_DECLS

}  // namespace d2d::kernels
