#include "hawkqk/fitness.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "hawkqk/error.hpp"

namespace hawkqk::hho {

EvaluatorKind parse_evaluator(const std::string& name) {
  if (name == "knn") return EvaluatorKind::knn;
  throw std::invalid_argument("unknown fitness evaluator '" + name + "'");
}

void FitnessConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("fitness: alpha must lie in [0, 1]");
  if (knn_k < 1) throw std::invalid_argument("fitness: knn k must be positive");
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0))
    throw std::invalid_argument("fitness: validation fraction must lie in (0, 1)");
  if (folds == 1) throw std::invalid_argument("fitness: folds must be 0 (holdout) or at least 2");
}

std::vector<std::pair<LabeledDataset, LabeledDataset>> stratified_folds(const LabeledDataset& ds,
                                                                        std::size_t k,
                                                                        std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("stratified_folds: need at least 2 folds");
  Rng rng = derive_rng(seed, {0x464f4c44});  // "FOLD"
  std::vector<std::size_t> fold_of(ds.n_samples());
  for (int label : {1, -1}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < ds.n_samples(); ++i)
      if (ds.labels[i] == label) members.push_back(i);
    if (members.size() < k)
      throw DataError("stratified_folds: class " + std::to_string(label) + " has " +
                      std::to_string(members.size()) + " samples for " + std::to_string(k) +
                      " folds");
    for (std::size_t i = members.size(); i > 1; --i)
      std::swap(members[i - 1], members[uniform_index(rng, i)]);
    for (std::size_t p = 0; p < members.size(); ++p) fold_of[members[p]] = p % k;
  }
  std::vector<std::pair<LabeledDataset, LabeledDataset>> parts;
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<std::size_t> fit, val;
    for (std::size_t i = 0; i < ds.n_samples(); ++i) (fold_of[i] == f ? val : fit).push_back(i);
    parts.emplace_back(ds.select_rows(fit), ds.select_rows(val));
  }
  return parts;
}

double knn_error(const LabeledDataset& fit, const LabeledDataset& validation,
                 std::span<const std::size_t> genes, std::size_t k) {
  if (fit.n_samples() == 0 || validation.n_samples() == 0)
    throw std::invalid_argument("knn_error: empty fit or validation set");
  k = std::min(k, fit.n_samples());
  std::vector<std::pair<double, std::size_t>> dist(fit.n_samples());
  std::size_t wrong = 0;
  for (std::size_t v = 0; v < validation.n_samples(); ++v) {
    const auto q = validation.features.row(v);
    for (std::size_t i = 0; i < fit.n_samples(); ++i) {
      const auto x = fit.features.row(i);
      double d = 0.0;
      for (std::size_t g : genes) {
        const double diff = q[g] - x[g];
        d += diff * diff;
      }
      dist[i] = {d, i};
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    int vote = 0;
    for (std::size_t n = 0; n < k; ++n) vote += fit.labels[dist[n].second];
    const int predicted = vote > 0 ? 1 : vote < 0 ? -1 : fit.labels[dist.front().second];
    if (predicted != validation.labels[v]) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(validation.n_samples());
}

WrapperFitness::WrapperFitness(const LabeledDataset& train, const FitnessConfig& cfg)
    : WrapperFitness(train, cfg, nullptr) {}

WrapperFitness::WrapperFitness(const LabeledDataset& train, const FitnessConfig& cfg,
                               ErrorEvaluator evaluator)
    : cfg_(cfg), dimension_(train.n_genes()), custom_(std::move(evaluator)) {
  cfg_.validate();
  if (cfg_.folds >= 2) {
    parts_ = stratified_folds(train, cfg_.folds, cfg_.seed);
  } else {
    auto split = stratified_split(train, {cfg_.validation_fraction, cfg_.seed, true});
    parts_.emplace_back(std::move(split.train), std::move(split.test));
  }
}

double WrapperFitness::validation_error(const FeatureMask& mask) const {
  if (mask.size() != dimension()) throw std::invalid_argument("fitness: mask length differs from gene count");
  const auto genes = mask.selected_indices();
  auto error_of = [&](const LabeledDataset& fit, const LabeledDataset& validation) {
    return custom_ ? custom_(fit.select_genes(genes), validation.select_genes(genes))
                   : knn_error(fit, validation, genes, cfg_.knn_k);
  };
  if (parts_.size() == 1) return error_of(parts_[0].first, parts_[0].second);
  double wrong = 0.0;
  std::size_t total = 0;
  for (const auto& [fit, validation] : parts_) {
    wrong += error_of(fit, validation) * static_cast<double>(validation.n_samples());
    total += validation.n_samples();
  }
  return wrong / static_cast<double>(total);
}

double WrapperFitness::operator()(const FeatureMask& mask) const {
  if (mask.size() != dimension()) throw std::invalid_argument("fitness: mask length differs from gene count");
  const std::size_t selected = mask.selected_count();
  if (selected == 0) return std::numeric_limits<double>::infinity();
  const double ratio = static_cast<double>(selected) / static_cast<double>(dimension());
  return cfg_.alpha * validation_error(mask) + (1.0 - cfg_.alpha) * ratio;
}

}  // namespace hawkqk::hho
