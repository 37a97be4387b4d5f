#pragma once

#include <cstdint>
#include <span>

#include "hawkqk/feature_map.hpp"
#include "hawkqk/matrix.hpp"
#include "hawkqk/random.hpp"

namespace hawkqk::qk {

struct ShotConfig {
  std::size_t shots = 100;
  std::uint64_t seed = 10598;
};

enum class KernelMode { exact, sampled };

KernelMode parse_kernel_mode(const std::string& name);  // "exact" | "sampled"

// Identifies which kernel entry a shot stream belongs to, so every entry
// draws from its own stream regardless of evaluation order.
struct EntryStream {
  std::uint64_t tag = 0;  // kTrainStream, kCrossStream, or caller-defined
  std::uint64_t row = 0;
  std::uint64_t col = 0;
};

inline constexpr std::uint64_t kTrainStream = 1;
inline constexpr std::uint64_t kCrossStream = 2;

struct KernelOptions {
  KernelMode mode = KernelMode::exact;
  ShotConfig shots;
  // Upper bound on resident statevectors, in bytes. Larger data sets are
  // processed in blocks (recomputing states as needed).
  std::size_t memory_budget = std::size_t{1} << 30;
  unsigned threads = 1;
};

// |<Phi(x)|Phi(z)>|^2 from two simulated states.
double exact_kernel_entry(std::span<const double> x, std::span<const double> z,
                          const FeatureMapSpec& spec);

// Runs U(z)^dagger U(x)|0...0>, samples `shots` outcomes from its exact
// distribution by inverse CDF over basis-state order, and returns the
// frequency of the all-zeros outcome.
double sampled_kernel_entry(std::span<const double> x, std::span<const double> z,
                            const FeatureMapSpec& spec, const ShotConfig& shots,
                            const EntryStream& stream = {});

// Number of shots (out of `shots`) landing on an outcome of probability
// `p_zero` when that outcome is first in inverse-CDF order.
std::size_t count_zero_outcomes(double p_zero, std::size_t shots, Rng& rng);

Rng entry_rng(const ShotConfig& shots, const EntryStream& stream);

// Symmetric Gram matrix over the rows of x; the diagonal is exactly 1.
Matrix kernel_matrix(const Matrix& x, const FeatureMapSpec& spec, const KernelOptions& opts = {});

// Entry (i, j) = kernel(test_i, train_j).
Matrix cross_kernel_matrix(const Matrix& x_test, const Matrix& x_train, const FeatureMapSpec& spec,
                           const KernelOptions& opts = {});

}  // namespace hawkqk::qk
