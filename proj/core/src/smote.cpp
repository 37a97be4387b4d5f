#include "hawkqk/smote.hpp"

#include <algorithm>
#include <stdexcept>

#include "hawkqk/error.hpp"
#include "hawkqk/random.hpp"

namespace hawkqk::smote {

namespace {
constexpr std::uint64_t kSmoteStream = 0x534d4f5445;  // "SMOTE"
}  // namespace

std::vector<std::size_t> nearest_neighbors(const Matrix& x, std::span<const std::size_t> members,
                                           std::size_t row, std::size_t k) {
  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(members.size());
  for (std::size_t m : members) {
    if (m == row) continue;
    dist.emplace_back(squared_distance(x.row(row), x.row(m)), m);
  }
  k = std::min(k, dist.size());
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = dist[i].second;
  return out;
}

SmoteResult smote_oversample_traced(const LabeledDataset& ds, const SmoteConfig& cfg) {
  ds.validate();
  if (cfg.k_neighbors < 1) throw std::invalid_argument("smote: k_neighbors must be at least 1");

  SmoteResult result;
  result.data = ds;
  Rng rng = derive_rng(cfg.seed, {kSmoteStream});
  std::vector<double> synth(ds.n_genes());

  for (const auto& [label, target] : cfg.target_counts) {
    if (label != 1 && label != -1)
      throw std::invalid_argument("smote: target label must be +1 or -1");
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < ds.n_samples(); ++i)
      if (ds.labels[i] == label) members.push_back(i);
    if (target < members.size())
      throw DataError("smote: target " + std::to_string(target) + " below current count " +
                      std::to_string(members.size()) + " for class " + std::to_string(label));
    const std::size_t needed = target - members.size();
    if (needed == 0) continue;
    if (members.size() < 2)
      throw DataError("smote: class " + std::to_string(label) + " has fewer than 2 samples");
    if (cfg.k_neighbors > members.size() - 1)
      throw DataError("smote: k_neighbors " + std::to_string(cfg.k_neighbors) +
                      " exceeds class size - 1 for class " + std::to_string(label));

    std::vector<std::vector<std::size_t>> neighbors(members.size());
    for (std::size_t m = 0; m < members.size(); ++m)
      neighbors[m] = nearest_neighbors(ds.features, members, members[m], cfg.k_neighbors);

    for (std::size_t s = 0; s < needed; ++s) {
      const std::size_t m = uniform_index(rng, members.size());
      const std::size_t base = members[m];
      const std::size_t nn = neighbors[m][uniform_index(rng, neighbors[m].size())];
      const double delta = uniform01(rng);
      auto a = ds.features.row(base);
      auto b = ds.features.row(nn);
      for (std::size_t j = 0; j < synth.size(); ++j) synth[j] = a[j] + delta * (b[j] - a[j]);
      result.data.features.append_row(synth);
      result.data.labels.push_back(label);
      result.origins.push_back({base, nn, delta});
    }
  }
  return result;
}

std::map<int, std::size_t> balanced_targets(const LabeledDataset& ds) {
  const std::size_t top = std::max(ds.count(1), ds.count(-1));
  return {{1, top}, {-1, top}};
}

}  // namespace hawkqk::smote
