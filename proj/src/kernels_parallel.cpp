#include <cmath>
#include <cstdint>

#include "d2d/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace d2d::kernels::parallel {

namespace {

// Below this many multiply-adds the fork/join overhead dominates.
constexpr std::size_t kMinParallelWork = 1 << 15;

bool go_parallel(std::size_t work) {
#ifdef _OPENMP
  return work >= kMinParallelWork && !omp_in_parallel() && omp_get_max_threads() > 1;
#else
  (void)work;
  return false;
#endif
}

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void dense_forward(std::span<const double> w, std::span<const double> b, std::span<const double> x,
                   std::span<double> y, std::size_t batch, std::size_t in, std::size_t out,
                   bool relu) {
  const bool par = go_parallel(batch * in * out);
  const auto nb = static_cast<std::int64_t>(batch);
  const auto no = static_cast<std::int64_t>(out);
  if (batch > 1) {
#pragma omp parallel for schedule(static) if (par)
    for (std::int64_t n = 0; n < nb; ++n) {
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
    return;
  }
  // Single sample: split the output columns instead.
  if (batch == 0) return;
#pragma omp parallel for schedule(static) if (par)
  for (std::int64_t o = 0; o < no; ++o) {
    double acc = b[o];
    for (std::size_t i = 0; i < in; ++i) acc += x[i] * w[i * out + o];
    y[o] = relu && !(acc > 0.0) ? 0.0 : acc;
  }
}

void dense_backward(std::span<const double> w, std::span<const double> x,
                    std::span<const double> dy, std::span<double> dw, std::span<double> db,
                    std::span<double> dx, std::size_t batch, std::size_t in, std::size_t out) {
  const bool par = go_parallel(batch * in * out);
  const auto ni = static_cast<std::int64_t>(in);
  const auto nb = static_cast<std::int64_t>(batch);
#pragma omp parallel if (par)
  {
#pragma omp for schedule(static) nowait
    for (std::int64_t i = 0; i < ni; ++i) {
      double* dwi = dw.data() + i * out;
      for (std::size_t o = 0; o < out; ++o) dwi[o] = 0.0;
      for (std::size_t n = 0; n < batch; ++n) {
        const double xni = x[n * in + i];
        const double* dyn = dy.data() + n * out;
        for (std::size_t o = 0; o < out; ++o) dwi[o] += xni * dyn[o];
      }
    }
#pragma omp single nowait
    {
      for (std::size_t o = 0; o < out; ++o) db[o] = 0.0;
      for (std::size_t n = 0; n < batch; ++n) {
        const double* dyn = dy.data() + n * out;
        for (std::size_t o = 0; o < out; ++o) db[o] += dyn[o];
      }
    }
    if (!dx.empty()) {
#pragma omp for schedule(static)
      for (std::int64_t n = 0; n < nb; ++n) {
        const double* dyn = dy.data() + n * out;
        for (std::size_t i = 0; i < in; ++i) {
          const double* wi = w.data() + i * out;
          double acc = 0.0;
          for (std::size_t o = 0; o < out; ++o) acc += dyn[o] * wi[o];
          dx[n * in + i] = acc;
        }
      }
    }
  }
}

void relu_backward(std::span<const double> activation, std::span<double> grad) {
  const auto nk = static_cast<std::int64_t>(grad.size());
#pragma omp parallel for schedule(static) if (go_parallel(grad.size()))
  for (std::int64_t k = 0; k < nk; ++k) {
    if (!(activation[k] > 0.0)) grad[k] = 0.0;
  }
}

void adam_update(std::span<double> params, std::span<const double> grads, std::span<double> m,
                 std::span<double> v, const AdamCoefficients& c) {
  const auto nk = static_cast<std::int64_t>(params.size());
#pragma omp parallel for schedule(static) if (go_parallel(params.size() * 8))
  for (std::int64_t k = 0; k < nk; ++k) {
    const double g = grads[k];
    m[k] = c.beta1 * m[k] + (1.0 - c.beta1) * g;
    v[k] = c.beta2 * v[k] + (1.0 - c.beta2) * g * g;
    const double m_hat = m[k] / c.bias1;
    const double v_hat = v[k] / c.bias2;
    params[k] -= c.lr * m_hat / (std::sqrt(v_hat) + c.eps);
  }
}

}  // namespace d2d::kernels::parallel
