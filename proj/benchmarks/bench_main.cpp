#include <benchmark/benchmark.h>

#include <random>

#include "hawkqk/fitness.hpp"
#include "hawkqk/kernel.hpp"
#include "hawkqk/pca.hpp"
#include "hawkqk/statevector.hpp"
#include "hawkqk/svm.hpp"
#include "hawkqk/synthetic.hpp"

using namespace hawkqk;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, double lo, double hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = u(rng);
  return m;
}

void BM_GateLayer(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  qk::Statevector sv(n);
  qk::Circuit layer;
  for (std::size_t q = 0; q < n; ++q) layer.push_back(qk::Gate::h(q));
  for (std::size_t q = 0; q + 1 < n; ++q) layer.push_back(qk::Gate::cx(q, q + 1));
  for (auto _ : state) {
    sv.apply(layer);
    benchmark::DoNotOptimize(sv.amplitudes().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(layer.size()));
}
BENCHMARK(BM_GateLayer)->Arg(4)->Arg(12)->Arg(20);

void BM_FeatureState(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = random_matrix(1, n, 0.0, 3.14, 1);
  const qk::FeatureMapSpec spec{qk::FeatureMapKind::zz, n, 3};
  for (auto _ : state) benchmark::DoNotOptimize(qk::feature_state(spec, x.row(0)));
}
BENCHMARK(BM_FeatureState)->Arg(4)->Arg(10)->Arg(16);

void BM_KernelMatrix(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const auto x = random_matrix(rows, 8, 0.0, 3.14, 2);
  const qk::FeatureMapSpec spec{qk::FeatureMapKind::zz, 8, 3};
  qk::KernelOptions opts;
  opts.mode = state.range(1) ? qk::KernelMode::sampled : qk::KernelMode::exact;
  for (auto _ : state) benchmark::DoNotOptimize(qk::kernel_matrix(x, spec, opts));
}
BENCHMARK(BM_KernelMatrix)->Args({40, 0})->Args({80, 0})->Args({80, 1});

void BM_Smo(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Matrix x = random_matrix(n, 4, -1.0, 1.0, 3);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = i % 2 ? 1 : -1;
    x(i, 0) += 0.5 * y[i];
  }
  const auto k = svm::rbf_kernel_matrix(x, x, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(svm::smo_train(k, y, {1.0, 1e-3, 0}));
}
BENCHMARK(BM_Smo)->Arg(80)->Arg(300);

void BM_PcaFit(benchmark::State& state) {
  const auto x = random_matrix(static_cast<std::size_t>(state.range(0)),
                               static_cast<std::size_t>(state.range(1)), -1.0, 1.0, 4);
  for (auto _ : state) benchmark::DoNotOptimize(pca::pca_fit(x, 20));
}
BENCHMARK(BM_PcaFit)->Args({80, 2000})->Args({200, 100});

void BM_WrapperFitness(benchmark::State& state) {
  synthetic::PlantedSpec spec;
  spec.n_positive = 40;
  spec.n_negative = 22;
  spec.n_informative = 20;
  spec.n_noise = 1980;
  const auto ds = synthetic::make_planted(spec).data;
  const hho::WrapperFitness fitness(ds, {});
  hho::FeatureMask mask(ds.n_genes());
  std::mt19937_64 rng(5);
  for (std::size_t j = 0; j < ds.n_genes(); ++j) mask.set(j, rng() % 2);
  for (auto _ : state) benchmark::DoNotOptimize(fitness(mask));
}
BENCHMARK(BM_WrapperFitness);

}  // namespace

BENCHMARK_MAIN();
