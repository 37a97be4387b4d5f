#include "hawkqk/bhho.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include "parallel.hpp"

namespace hawkqk::hho {

namespace {

struct Candidate {
  std::vector<double> position;
  FeatureMask mask;
  double fitness = 0.0;
};

// A solution must keep at least one gene: an empty draw keeps the gene with
// the highest transfer probability instead.
FeatureMask ensure_nonempty(FeatureMask mask, std::span<const double> position, TransferKind kind) {
  if (mask.selected_count() > 0) return mask;
  std::size_t best = 0;
  double best_p = -1.0;
  for (std::size_t j = 0; j < position.size(); ++j) {
    const double p = transfer_probability(position[j], kind);
    if (p > best_p) {
      best_p = p;
      best = j;
    }
  }
  mask.set(best);
  return mask;
}

void evaluate(std::vector<Candidate*>& pending, const MaskObjective& objective, unsigned threads) {
  detail::parallel_for(pending.size(), threads,
                       [&](std::size_t i) { pending[i]->fitness = objective(pending[i]->mask); });
}

}  // namespace

BhhoResult run_bhho(const MaskObjective& objective, const HhoParams& p, TransferKind kind,
                    unsigned threads) {
  p.validate();
  Population pop = init_population(p);
  Rng rng = derive_rng(p.seed, {0x4d4f5645});  // "MOVE"
  const std::size_t n = pop.size();

  std::vector<FeatureMask> masks(n);
  {
    std::vector<Candidate> initial(n);
    std::vector<Candidate*> pending;
    for (std::size_t i = 0; i < n; ++i) {
      initial[i].mask = ensure_nonempty(
          binarize(pop[i].position, FeatureMask(p.dimension), kind, rng), pop[i].position, kind);
      pending.push_back(&initial[i]);
    }
    evaluate(pending, objective, threads);
    for (std::size_t i = 0; i < n; ++i) {
      masks[i] = std::move(initial[i].mask);
      pop[i].fitness = initial[i].fitness;
    }
  }

  BhhoResult result;
  std::vector<double> rabbit = pop.front().position;
  result.best_mask = masks.front();
  result.best_fitness = pop.front().fitness;

  for (std::size_t t = 0; t < p.max_iters; ++t) {
    for (std::size_t i = 0; i < n; ++i)
      if (pop[i].fitness < result.best_fitness) {
        result.best_fitness = pop[i].fitness;
        result.best_mask = masks[i];
        rabbit = pop[i].position;
      }
    result.convergence.push_back(result.best_fitness);
    result.selected_counts.push_back(result.best_mask.selected_count());
    if (t + 1 == p.max_iters) break;

    const Population snapshot = pop;
    const auto mean = mean_position(snapshot);
    std::vector<Candidate> primary(n), dive(n);
    std::vector<bool> greedy(n, false);
    std::vector<Candidate*> pending;
    for (std::size_t i = 0; i < n; ++i) {
      const auto energy = escaping_energy(t, p.max_iters, rng);
      if (std::abs(energy.e) >= 1.0) {
        primary[i].position = exploration_step(pop[i].position, snapshot, rabbit, mean, p,
                                               draw_exploration(rng, n));
      } else {
        const auto draws = draw_exploitation(rng, p.dimension);
        auto move = exploitation_candidates(pop[i].position, rabbit, mean, energy.e, p, draws);
        primary[i].position = std::move(move.primary);
        if (!move.dive.empty()) {
          greedy[i] = true;
          dive[i].position = std::move(move.dive);
        }
      }
      primary[i].mask = ensure_nonempty(binarize(primary[i].position, masks[i], kind, rng),
                                        primary[i].position, kind);
      pending.push_back(&primary[i]);
      if (greedy[i]) {
        dive[i].mask = ensure_nonempty(binarize(dive[i].position, masks[i], kind, rng),
                                       dive[i].position, kind);
        pending.push_back(&dive[i]);
      }
    }
    evaluate(pending, objective, threads);

    for (std::size_t i = 0; i < n; ++i) {
      Candidate* take = nullptr;
      if (!greedy[i])
        take = &primary[i];
      else if (primary[i].fitness < pop[i].fitness)
        take = &primary[i];
      else if (dive[i].fitness < pop[i].fitness)
        take = &dive[i];
      if (take == nullptr) continue;
      pop[i].position = std::move(take->position);
      pop[i].fitness = take->fitness;
      masks[i] = std::move(take->mask);
    }
  }

  result.final_population = std::move(pop);
  result.final_masks = std::move(masks);
  return result;
}

BhhoResult run_bhho(const LabeledDataset& train, const HhoParams& p, const FitnessConfig& fcfg,
                    TransferKind kind, unsigned threads) {
  if (p.dimension != train.n_genes())
    throw std::invalid_argument("run_bhho: dimension differs from gene count");
  const WrapperFitness fitness(train, fcfg);
  return run_bhho([&](const FeatureMask& m) { return fitness(m); }, p, kind, threads);
}

}  // namespace hawkqk::hho
