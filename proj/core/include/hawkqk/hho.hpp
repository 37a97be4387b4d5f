#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hawkqk/random.hpp"

namespace hawkqk::hho {

struct HhoParams {
  std::size_t n_hawks = 10;
  std::size_t max_iters = 100;
  double lower_bound = -1.0;
  double upper_bound = 1.0;
  std::size_t dimension = 1;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument unless ub > lb, n_hawks >= 2, max_iters >= 1
  // and dimension >= 1.
  void validate() const;
};

struct Hawk {
  std::vector<double> position;
  double fitness = 0.0;
};

using Population = std::vector<Hawk>;

struct EnergyState {
  double e0 = 0.0;  // initial energy in [-1, 1]
  double e = 0.0;   // escaping energy after linear decay
  std::size_t iteration = 0;
};

// N positions drawn uniformly from [lb, ub]^d; fitness left at 0.
Population init_population(const HhoParams& p);

std::vector<double> mean_position(const Population& pop);

// E0 = 2r - 1, E = 2 E0 (1 - t/T). The second form takes r explicitly.
EnergyState escaping_energy(std::size_t t, std::size_t max_iters, Rng& rng);
EnergyState escaping_energy(std::size_t t, std::size_t max_iters, double r);

void clamp_to_bounds(std::span<double> position, const HhoParams& p);

// ---- exploration (|E| >= 1) ----

struct ExplorationDraws {
  double e = 0.0;  // branch selector
  double r1 = 0.0, r2 = 0.0, r3 = 0.0, r4 = 0.0;
  std::size_t peer = 0;  // index of the randomly chosen hawk
};

ExplorationDraws draw_exploration(Rng& rng, std::size_t n_hawks);

// e >= 0.5: Z_k - r1 |Z_k - 2 r2 Z|; otherwise (Z_rabbit - Z_mean) - r3 (lb + r4 (ub - lb)).
// Result clamped to the box.
std::vector<double> exploration_step(std::span<const double> hawk, const Population& pop,
                                     std::span<const double> rabbit, std::span<const double> mean,
                                     const HhoParams& p, const ExplorationDraws& d);

std::vector<double> exploration_step(std::span<const double> hawk, const Population& pop,
                                     std::span<const double> rabbit, const HhoParams& p, Rng& rng);

// ---- exploitation (|E| < 1) ----

enum class Strategy { soft_besiege, hard_besiege, soft_rapid_dive, hard_rapid_dive };

const char* to_string(Strategy s);

// escape >= 0.5 selects a plain besiege, below it a progressive rapid dive;
// |E| >= 0.5 means soft, below it hard.
Strategy select_strategy(double e, double escape);

inline constexpr double kLevyBeta = 1.5;

// Mantegna's sigma_u for a Levy-stable step with exponent beta.
double mantegna_sigma(double beta);

// Raw Mantegna draw u * sigma / |v|^(1/beta), u and v standard normal.
double mantegna_draw(Rng& rng, double beta);

// Levy flight vector as used by the rapid dives: 0.01 * Mantegna draw per coordinate.
std::vector<double> levy_flight(Rng& rng, std::size_t dim, double beta = kLevyBeta);

struct ExploitationDraws {
  double escape = 0.0;             // r in the strategy selector
  double jump = 0.0;               // r5, jump strength J = 2 (1 - r5)
  std::vector<double> dive_scale;  // S, uniform per coordinate
  std::vector<double> levy;        // LF(D)
};

ExploitationDraws draw_exploitation(Rng& rng, std::size_t dim);

struct ExploitationMove {
  Strategy strategy = Strategy::soft_besiege;
  std::vector<double> primary;  // besiege result, or dive candidate Y
  std::vector<double> dive;     // Y + S * LF, only for rapid dives
  bool greedy() const noexcept { return !dive.empty(); }
};

ExploitationMove exploitation_candidates(std::span<const double> hawk,
                                         std::span<const double> rabbit,
                                         std::span<const double> mean, double e,
                                         const HhoParams& p, const ExploitationDraws& d);

using Objective = std::function<double(std::span<const double>)>;

// Applies one exploitation move. Besiege moves are taken unconditionally;
// rapid dives keep Y or Z only when they beat the hawk's current fitness.
Hawk exploitation_step(const Hawk& hawk, std::span<const double> rabbit, const Population& pop,
                       const EnergyState& energy, const HhoParams& p, Rng& rng,
                       const Objective& objective);

struct HhoResult {
  std::vector<double> best_position;
  double best_fitness = 0.0;
  std::vector<double> convergence;
};

// Continuous HHO minimizing `objective` over the box.
HhoResult minimize(const Objective& objective, const HhoParams& p);

}  // namespace hawkqk::hho
