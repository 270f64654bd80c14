// Serial reference kernels against their OpenMP counterparts, at the shapes
// the Q-network uses (batch 32, 200-wide hidden layers) and a larger layer.

#include <benchmark/benchmark.h>

#include <vector>

#include "d2d/adam.hpp"
#include "d2d/dqn.hpp"
#include "d2d/kernels.hpp"
#include "d2d/mlp.hpp"
#include "d2d/random.hpp"
#include "d2d/replay.hpp"

namespace {

namespace k = d2d::kernels;

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  d2d::Rng rng = d2d::make_rng({seed});
  std::vector<double> v(n);
  for (double& x : v) x = d2d::uniform01(rng) - 0.5;
  return v;
}

struct Layer {
  std::size_t batch, in, out;
  std::vector<double> w, b, x, y, dy, dw, db, dx;

  explicit Layer(const benchmark::State& state)
      : batch(static_cast<std::size_t>(state.range(0))),
        in(static_cast<std::size_t>(state.range(1))),
        out(static_cast<std::size_t>(state.range(2))),
        w(random_vector(in * out, 1)),
        b(random_vector(out, 2)),
        x(random_vector(batch * in, 3)),
        y(batch * out),
        dy(random_vector(batch * out, 4)),
        dw(in * out),
        db(out),
        dx(batch * in) {}
};

template <auto Forward>
void BM_dense_forward(benchmark::State& state) {
  Layer l(state);
  for (auto _ : state) {
    Forward(l.w, l.b, l.x, l.y, l.batch, l.in, l.out, true);
    benchmark::DoNotOptimize(l.y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(l.batch * l.in * l.out));
}

template <auto Backward>
void BM_dense_backward(benchmark::State& state) {
  Layer l(state);
  for (auto _ : state) {
    Backward(l.w, l.x, l.dy, l.dw, l.db, l.dx, l.batch, l.in, l.out);
    benchmark::DoNotOptimize(l.dw.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(l.batch * l.in * l.out));
}

template <auto Update>
void BM_adam_update(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto params = random_vector(n, 5);
  const auto grads = random_vector(n, 6);
  std::vector<double> m(n), v(n);
  const k::AdamCoefficients c{1e-3, 0.9, 0.999, 1e-8, 0.1, 0.001};
  for (auto _ : state) {
    Update(params, grads, m, v, c);
    benchmark::DoNotOptimize(params.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

// One replay-driven learning step of the default 10-CUE, 10-level network.
void BM_train_step(benchmark::State& state) {
  d2d::Rng rng = d2d::make_rng({7});
  d2d::Mlp net = d2d::Mlp::random({10, 200, 200, 10}, rng);
  d2d::AdamState opt(net.num_params(), {});
  d2d::ReplayMemory memory(1000);
  for (std::size_t t = 0; t < 1000; ++t) {
    memory.push({random_vector(10, 100 + t), t % 10, d2d::uniform01(rng), random_vector(10, 5000 + t)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(d2d::train_step(net, opt, memory, 32, 0.95, rng));
}

void layer_shapes(benchmark::internal::Benchmark* b) {
  b->Args({32, 10, 200})->Args({32, 200, 200})->Args({256, 512, 512});
}

}  // namespace

BENCHMARK(BM_dense_forward<k::serial::dense_forward>)->Name("dense_forward/serial")->Apply(layer_shapes);
BENCHMARK(BM_dense_forward<k::parallel::dense_forward>)->Name("dense_forward/parallel")->Apply(layer_shapes);
BENCHMARK(BM_dense_backward<k::serial::dense_backward>)->Name("dense_backward/serial")->Apply(layer_shapes);
BENCHMARK(BM_dense_backward<k::parallel::dense_backward>)->Name("dense_backward/parallel")->Apply(layer_shapes);
BENCHMARK(BM_adam_update<k::serial::adam_update>)->Name("adam_update/serial")->Arg(44410)->Arg(1 << 20);
BENCHMARK(BM_adam_update<k::parallel::adam_update>)->Name("adam_update/parallel")->Arg(44410)->Arg(1 << 20);
BENCHMARK(BM_train_step);

BENCHMARK_MAIN();
