#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hawkqk/dataset.hpp"

namespace hawkqk::synthetic {

enum class PlantedModel {
  // Informative genes shift by +shift/2 for class +1 and -shift/2 for -1.
  mean_shift,
  // All genes are N(0,1); the label is the sign of the informative-gene sum,
  // so every informative gene carries part of the signal.
  linear_rule,
};

PlantedModel parse_planted_model(const std::string& name);  // "mean_shift" | "linear_rule"

struct PlantedSpec {
  std::size_t n_positive = 30;
  std::size_t n_negative = 30;
  std::size_t n_informative = 5;
  std::size_t n_noise = 45;
  PlantedModel model = PlantedModel::mean_shift;
  double shift = 2.0;       // mean_shift only
  double margin = 0.0;      // linear_rule: |sum| is at least this (samples redrawn)
  double informative_sd = 1.0;  // linear_rule: spread of the informative genes
  double noise_sd = 1.0;        // spread of the uninformative genes
  std::uint64_t seed = 0;
  bool shuffle_genes = true;  // informative genes at random positions
};

struct PlantedDataset {
  LabeledDataset data;
  std::vector<std::size_t> informative;  // ascending gene indices
};

// Rows are interleaved so classes are not blocked; gene names are g0, g1, ...
PlantedDataset make_planted(const PlantedSpec& spec);

}  // namespace hawkqk::synthetic
