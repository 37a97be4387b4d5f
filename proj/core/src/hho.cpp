#include "hawkqk/hho.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hawkqk::hho {

void HhoParams::validate() const {
  if (!(upper_bound > lower_bound)) throw std::invalid_argument("hho: upper bound must exceed lower bound");
  if (n_hawks < 2) throw std::invalid_argument("hho: need at least 2 hawks");
  if (max_iters < 1) throw std::invalid_argument("hho: need at least 1 iteration");
  if (dimension < 1) throw std::invalid_argument("hho: dimension must be positive");
}

Population init_population(const HhoParams& p) {
  p.validate();
  Rng rng = derive_rng(p.seed, {0x494e4954});  // "INIT"
  Population pop(p.n_hawks);
  const double width = p.upper_bound - p.lower_bound;
  for (auto& hawk : pop) {
    hawk.position.resize(p.dimension);
    for (auto& z : hawk.position) z = p.lower_bound + uniform01(rng) * width;
    clamp_to_bounds(hawk.position, p);
  }
  return pop;
}

std::vector<double> mean_position(const Population& pop) {
  if (pop.empty()) throw std::invalid_argument("mean_position: empty population");
  std::vector<double> mean(pop.front().position.size(), 0.0);
  for (const auto& hawk : pop)
    for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += hawk.position[j];
  const double inv = 1.0 / static_cast<double>(pop.size());
  for (auto& m : mean) m *= inv;
  return mean;
}

EnergyState escaping_energy(std::size_t t, std::size_t max_iters, double r) {
  if (t >= max_iters) throw std::invalid_argument("escaping_energy: iteration must be below max_iters");
  EnergyState s;
  s.iteration = t;
  s.e0 = 2.0 * r - 1.0;
  s.e = 2.0 * s.e0 * (1.0 - static_cast<double>(t) / static_cast<double>(max_iters));
  return s;
}

EnergyState escaping_energy(std::size_t t, std::size_t max_iters, Rng& rng) {
  return escaping_energy(t, max_iters, uniform01(rng));
}

void clamp_to_bounds(std::span<double> position, const HhoParams& p) {
  for (auto& z : position) z = std::clamp(z, p.lower_bound, p.upper_bound);
}

ExplorationDraws draw_exploration(Rng& rng, std::size_t n_hawks) {
  ExplorationDraws d;
  d.e = uniform01(rng);
  d.r1 = uniform01(rng);
  d.r2 = uniform01(rng);
  d.r3 = uniform01(rng);
  d.r4 = uniform01(rng);
  d.peer = uniform_index(rng, n_hawks);
  return d;
}

std::vector<double> exploration_step(std::span<const double> hawk, const Population& pop,
                                     std::span<const double> rabbit, std::span<const double> mean,
                                     const HhoParams& p, const ExplorationDraws& d) {
  std::vector<double> next(hawk.size());
  if (d.e >= 0.5) {
    const auto& peer = pop.at(d.peer).position;
    for (std::size_t j = 0; j < next.size(); ++j)
      next[j] = peer[j] - d.r1 * std::abs(peer[j] - 2.0 * d.r2 * hawk[j]);
  } else {
    const double shift = d.r3 * (p.lower_bound + d.r4 * (p.upper_bound - p.lower_bound));
    for (std::size_t j = 0; j < next.size(); ++j) next[j] = (rabbit[j] - mean[j]) - shift;
  }
  clamp_to_bounds(next, p);
  return next;
}

std::vector<double> exploration_step(std::span<const double> hawk, const Population& pop,
                                     std::span<const double> rabbit, const HhoParams& p, Rng& rng) {
  const auto mean = mean_position(pop);
  return exploration_step(hawk, pop, rabbit, mean, p, draw_exploration(rng, pop.size()));
}

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::soft_besiege: return "soft_besiege";
    case Strategy::hard_besiege: return "hard_besiege";
    case Strategy::soft_rapid_dive: return "soft_rapid_dive";
    case Strategy::hard_rapid_dive: return "hard_rapid_dive";
  }
  return "unknown";
}

Strategy select_strategy(double e, double escape) {
  const bool soft = std::abs(e) >= 0.5;
  if (escape >= 0.5) return soft ? Strategy::soft_besiege : Strategy::hard_besiege;
  return soft ? Strategy::soft_rapid_dive : Strategy::hard_rapid_dive;
}

double mantegna_sigma(double beta) {
  const double num = std::tgamma(1.0 + beta) * std::sin(std::numbers::pi * beta / 2.0);
  const double den = std::tgamma((1.0 + beta) / 2.0) * beta * std::pow(2.0, (beta - 1.0) / 2.0);
  return std::pow(num / den, 1.0 / beta);
}

double mantegna_draw(Rng& rng, double beta) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double u = normal(rng) * mantegna_sigma(beta);
  const double v = normal(rng);
  return u / std::pow(std::abs(v), 1.0 / beta);
}

std::vector<double> levy_flight(Rng& rng, std::size_t dim, double beta) {
  std::vector<double> step(dim);
  for (auto& s : step) s = 0.01 * mantegna_draw(rng, beta);
  return step;
}

ExploitationDraws draw_exploitation(Rng& rng, std::size_t dim) {
  ExploitationDraws d;
  d.escape = uniform01(rng);
  d.jump = uniform01(rng);
  d.dive_scale.resize(dim);
  for (auto& s : d.dive_scale) s = uniform01(rng);
  d.levy = levy_flight(rng, dim);
  return d;
}

ExploitationMove exploitation_candidates(std::span<const double> hawk,
                                         std::span<const double> rabbit,
                                         std::span<const double> mean, double e,
                                         const HhoParams& p, const ExploitationDraws& d) {
  ExploitationMove move;
  move.strategy = select_strategy(e, d.escape);
  const double jump = 2.0 * (1.0 - d.jump);
  const std::size_t dim = hawk.size();
  move.primary.resize(dim);
  switch (move.strategy) {
    case Strategy::soft_besiege:
      for (std::size_t j = 0; j < dim; ++j) {
        const double delta = rabbit[j] - hawk[j];
        move.primary[j] = delta - e * std::abs(jump * rabbit[j] - hawk[j]);
      }
      break;
    case Strategy::hard_besiege:
      for (std::size_t j = 0; j < dim; ++j)
        move.primary[j] = rabbit[j] - e * std::abs(rabbit[j] - hawk[j]);
      break;
    case Strategy::soft_rapid_dive:
    case Strategy::hard_rapid_dive: {
      const auto anchor = move.strategy == Strategy::soft_rapid_dive ? hawk : mean;
      for (std::size_t j = 0; j < dim; ++j)
        move.primary[j] = rabbit[j] - e * std::abs(jump * rabbit[j] - anchor[j]);
      move.dive.resize(dim);
      for (std::size_t j = 0; j < dim; ++j)
        move.dive[j] = move.primary[j] + d.dive_scale[j] * d.levy[j];
      clamp_to_bounds(move.dive, p);
      break;
    }
  }
  clamp_to_bounds(move.primary, p);
  return move;
}

Hawk exploitation_step(const Hawk& hawk, std::span<const double> rabbit, const Population& pop,
                       const EnergyState& energy, const HhoParams& p, Rng& rng,
                       const Objective& objective) {
  const auto mean = mean_position(pop);
  const auto draws = draw_exploitation(rng, hawk.position.size());
  auto move = exploitation_candidates(hawk.position, rabbit, mean, energy.e, p, draws);
  if (!move.greedy()) {
    const double f = objective(move.primary);
    return {std::move(move.primary), f};
  }
  const double fy = objective(move.primary);
  if (fy < hawk.fitness) return {std::move(move.primary), fy};
  const double fz = objective(move.dive);
  if (fz < hawk.fitness) return {std::move(move.dive), fz};
  return hawk;
}

HhoResult minimize(const Objective& objective, const HhoParams& p) {
  Population pop = init_population(p);
  for (auto& hawk : pop) hawk.fitness = objective(hawk.position);
  Rng rng = derive_rng(p.seed, {0x4d4f5645});  // "MOVE"

  HhoResult result;
  result.best_position = pop.front().position;
  result.best_fitness = pop.front().fitness;
  for (std::size_t t = 0; t < p.max_iters; ++t) {
    for (const auto& hawk : pop)
      if (hawk.fitness < result.best_fitness) {
        result.best_fitness = hawk.fitness;
        result.best_position = hawk.position;
      }
    result.convergence.push_back(result.best_fitness);
    if (t + 1 == p.max_iters) break;

    const Population snapshot = pop;
    const auto mean = mean_position(snapshot);
    for (auto& hawk : pop) {
      const auto energy = escaping_energy(t, p.max_iters, rng);
      if (std::abs(energy.e) >= 1.0) {
        hawk.position = exploration_step(hawk.position, snapshot, result.best_position, mean, p,
                                         draw_exploration(rng, snapshot.size()));
        hawk.fitness = objective(hawk.position);
      } else {
        hawk = exploitation_step(hawk, result.best_position, snapshot, energy, p, rng, objective);
      }
    }
  }
  return result;
}

}  // namespace hawkqk::hho
