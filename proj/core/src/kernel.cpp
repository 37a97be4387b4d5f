#include "hawkqk/kernel.hpp"

#include <algorithm>
#include <stdexcept>

#include "parallel.hpp"

namespace hawkqk::qk {

namespace {

std::vector<Statevector> compute_states(const Matrix& x, std::size_t begin, std::size_t end,
                                        const FeatureMapSpec& spec, unsigned threads) {
  std::vector<Statevector> states(end - begin, Statevector(1));
  detail::parallel_for(end - begin, threads,
                       [&](std::size_t i) { states[i] = feature_state(spec, x.row(begin + i)); });
  return states;
}

std::size_t block_rows(const FeatureMapSpec& spec, const KernelOptions& opts) {
  const std::size_t state_bytes = sizeof(Amplitude) << spec.n_qubits;
  return std::max<std::size_t>(1, opts.memory_budget / (2 * state_bytes));
}

double estimate(const Statevector& a, const Statevector& b, const KernelOptions& opts,
                const EntryStream& stream) {
  const double p = fidelity(a, b);
  if (opts.mode == KernelMode::exact) return p;
  Rng rng = entry_rng(opts.shots, stream);
  return static_cast<double>(count_zero_outcomes(p, opts.shots.shots, rng)) /
         static_cast<double>(opts.shots.shots);
}

void check_columns(const Matrix& x, const FeatureMapSpec& spec) {
  spec.validate();
  if (x.cols() != spec.n_qubits)
    throw std::invalid_argument("kernel: " + std::to_string(x.cols()) + " input columns but " +
                                std::to_string(spec.n_qubits) + " qubits");
}

void check_shots(const KernelOptions& opts) {
  if (opts.mode == KernelMode::sampled && opts.shots.shots < 1)
    throw std::invalid_argument("kernel: shots must be at least 1");
}

}  // namespace

KernelMode parse_kernel_mode(const std::string& name) {
  if (name == "exact") return KernelMode::exact;
  if (name == "sampled") return KernelMode::sampled;
  throw std::invalid_argument("unknown kernel mode '" + name + "' (expected exact or sampled)");
}

Rng entry_rng(const ShotConfig& shots, const EntryStream& stream) {
  return derive_rng(shots.seed, {stream.tag, stream.row, stream.col});
}

std::size_t count_zero_outcomes(double p_zero, std::size_t shots, Rng& rng) {
  std::size_t hits = 0;
  for (std::size_t s = 0; s < shots; ++s)
    if (uniform01(rng) < p_zero) ++hits;
  return hits;
}

double exact_kernel_entry(std::span<const double> x, std::span<const double> z,
                          const FeatureMapSpec& spec) {
  return fidelity(feature_state(spec, x), feature_state(spec, z));
}

double sampled_kernel_entry(std::span<const double> x, std::span<const double> z,
                            const FeatureMapSpec& spec, const ShotConfig& shots,
                            const EntryStream& stream) {
  if (shots.shots < 1) throw std::invalid_argument("sampled kernel: shots must be at least 1");
  Statevector sv(spec.n_qubits);
  sv.apply(build_feature_map(spec, x));
  sv.apply(inverse(build_feature_map(spec, z)));

  std::vector<double> cdf = sv.probabilities();
  for (std::size_t i = 1; i < cdf.size(); ++i) cdf[i] += cdf[i - 1];
  Rng rng = entry_rng(shots, stream);
  std::size_t zeros = 0;
  for (std::size_t s = 0; s < shots.shots; ++s) {
    const double u = uniform01(rng);
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.begin()) ++zeros;
  }
  return static_cast<double>(zeros) / static_cast<double>(shots.shots);
}

Matrix kernel_matrix(const Matrix& x, const FeatureMapSpec& spec, const KernelOptions& opts) {
  check_columns(x, spec);
  check_shots(opts);
  const std::size_t n = x.rows();
  const std::size_t block = block_rows(spec, opts);
  Matrix k(n, n);
  for (std::size_t i = 0; i < n; ++i) k(i, i) = 1.0;

  for (std::size_t rb = 0; rb < n; rb += block) {
    const std::size_t re = std::min(n, rb + block);
    const auto rows = compute_states(x, rb, re, spec, opts.threads);
    for (std::size_t cb = rb; cb < n; cb += block) {
      const std::size_t ce = std::min(n, cb + block);
      std::vector<Statevector> other;
      if (cb != rb) other = compute_states(x, cb, ce, spec, opts.threads);
      const auto& cols = cb == rb ? rows : other;

      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (std::size_t i = rb; i < re; ++i)
        for (std::size_t j = std::max(cb, i + 1); j < ce; ++j) pairs.emplace_back(i, j);
      detail::parallel_for(pairs.size(), opts.threads, [&](std::size_t p) {
        const auto [i, j] = pairs[p];
        const double v = estimate(rows[i - rb], cols[j - cb], opts, {kTrainStream, i, j});
        k(i, j) = v;
        k(j, i) = v;
      });
    }
  }
  return k;
}

Matrix cross_kernel_matrix(const Matrix& x_test, const Matrix& x_train, const FeatureMapSpec& spec,
                           const KernelOptions& opts) {
  check_columns(x_test, spec);
  check_columns(x_train, spec);
  check_shots(opts);
  const std::size_t block = block_rows(spec, opts);
  Matrix k(x_test.rows(), x_train.rows());
  for (std::size_t rb = 0; rb < x_test.rows(); rb += block) {
    const std::size_t re = std::min(x_test.rows(), rb + block);
    const auto rows = compute_states(x_test, rb, re, spec, opts.threads);
    for (std::size_t cb = 0; cb < x_train.rows(); cb += block) {
      const std::size_t ce = std::min(x_train.rows(), cb + block);
      const auto cols = compute_states(x_train, cb, ce, spec, opts.threads);
      const std::size_t width = ce - cb;
      detail::parallel_for((re - rb) * width, opts.threads, [&](std::size_t p) {
        const std::size_t i = rb + p / width, j = cb + p % width;
        k(i, j) = estimate(rows[i - rb], cols[j - cb], opts, {kCrossStream, i, j});
      });
    }
  }
  return k;
}

}  // namespace hawkqk::qk
