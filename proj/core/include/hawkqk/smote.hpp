#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "hawkqk/dataset.hpp"

namespace hawkqk::smote {

struct SmoteConfig {
  std::size_t k_neighbors = 5;
  // Desired per-class sample count, keyed by label (+1/-1). Classes without
  // an entry keep their current count.
  std::map<int, std::size_t> target_counts;
  std::uint64_t seed = 0;
};

// One synthetic row: base + delta * (neighbor - base), indices into the input.
struct SyntheticOrigin {
  std::size_t base = 0;
  std::size_t neighbor = 0;
  double delta = 0.0;
};

struct SmoteResult {
  LabeledDataset data;                  // originals first, synthetic rows appended
  std::vector<SyntheticOrigin> origins; // one per synthetic row, in row order
};

// Indices of the k nearest same-class members of `row` (Euclidean), nearest
// first; distance ties go to the lower index.
std::vector<std::size_t> nearest_neighbors(const Matrix& x, std::span<const std::size_t> members,
                                           std::size_t row, std::size_t k);

SmoteResult smote_oversample_traced(const LabeledDataset& ds, const SmoteConfig& cfg);

inline LabeledDataset smote_oversample(const LabeledDataset& ds, const SmoteConfig& cfg) {
  return smote_oversample_traced(ds, cfg).data;
}

// Targets that lift the minority class to the majority count.
std::map<int, std::size_t> balanced_targets(const LabeledDataset& ds);

}  // namespace hawkqk::smote
