#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hawkqk/binary.hpp"
#include "hawkqk/dataset.hpp"

namespace hawkqk::hho {

enum class EvaluatorKind { knn };

EvaluatorKind parse_evaluator(const std::string& name);

struct FitnessConfig {
  double alpha = 0.99;  // weight on validation error; 1 - alpha goes to the selected ratio
  EvaluatorKind evaluator = EvaluatorKind::knn;
  std::size_t knn_k = 5;
  double validation_fraction = 0.2;
  // 0: one stratified holdout split of validation_fraction. >= 2: stratified
  // k-fold cross-validation, errors pooled over all training samples.
  std::size_t folds = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

// Validation error of a k-nearest-neighbor vote restricted to `genes`.
// Majority vote; a tied vote goes to the single nearest neighbor. Distance
// ties are broken by lower training index.
double knn_error(const LabeledDataset& fit, const LabeledDataset& validation,
                 std::span<const std::size_t> genes, std::size_t k);

// Stratified k-fold partition: fold f holds the members of each class whose
// shuffled position is congruent to f mod k. Returns (fit, validation) pairs.
std::vector<std::pair<LabeledDataset, LabeledDataset>> stratified_folds(const LabeledDataset& ds,
                                                                        std::size_t k,
                                                                        std::uint64_t seed);

// Error of any classifier trained on `fit` and scored on `validation`, both
// already restricted to the masked genes.
using ErrorEvaluator =
    std::function<double(const LabeledDataset& fit, const LabeledDataset& validation)>;

// alpha * error + (1 - alpha) * selected / d. Lower is better; an empty mask
// scores +infinity. Validation splits are drawn once at construction.
class WrapperFitness {
 public:
  WrapperFitness(const LabeledDataset& train, const FitnessConfig& cfg);
  WrapperFitness(const LabeledDataset& train, const FitnessConfig& cfg, ErrorEvaluator evaluator);

  double operator()(const FeatureMask& mask) const;
  double validation_error(const FeatureMask& mask) const;

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t fold_count() const noexcept { return parts_.size(); }
  const LabeledDataset& fit_part(std::size_t fold = 0) const { return parts_.at(fold).first; }
  const LabeledDataset& validation_part(std::size_t fold = 0) const { return parts_.at(fold).second; }

 private:
  FitnessConfig cfg_;
  std::size_t dimension_ = 0;
  std::vector<std::pair<LabeledDataset, LabeledDataset>> parts_;
  ErrorEvaluator custom_;
};

}  // namespace hawkqk::hho
