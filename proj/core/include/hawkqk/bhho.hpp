#pragma once

#include <functional>
#include <vector>

#include "hawkqk/binary.hpp"
#include "hawkqk/dataset.hpp"
#include "hawkqk/fitness.hpp"
#include "hawkqk/hho.hpp"

namespace hawkqk::hho {

using MaskObjective = std::function<double(const FeatureMask&)>;

struct BhhoResult {
  FeatureMask best_mask;
  double best_fitness = 0.0;
  std::vector<double> convergence;            // best fitness after each iteration
  std::vector<std::size_t> selected_counts;   // best mask size after each iteration
  Population final_population;                // continuous positions + fitness
  std::vector<FeatureMask> final_masks;
};

// Binary HHO. Every hawk carries a continuous position in [lb, ub]^d and a
// mask obtained by passing its latest position through the transfer rule.
// Fitness evaluations of one iteration may run on `threads` workers; results
// are consumed in hawk order so the run depends only on the seed.
BhhoResult run_bhho(const MaskObjective& objective, const HhoParams& p, TransferKind kind,
                    unsigned threads = 1);

BhhoResult run_bhho(const LabeledDataset& train, const HhoParams& p, const FitnessConfig& fcfg,
                    TransferKind kind, unsigned threads = 1);

}  // namespace hawkqk::hho
