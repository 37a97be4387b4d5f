#include "hawkqk/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "hawkqk/random.hpp"

namespace hawkqk::synthetic {

PlantedModel parse_planted_model(const std::string& name) {
  if (name == "mean_shift") return PlantedModel::mean_shift;
  if (name == "linear_rule") return PlantedModel::linear_rule;
  throw std::invalid_argument("unknown planted model '" + name +
                              "' (expected mean_shift or linear_rule)");
}

PlantedDataset make_planted(const PlantedSpec& spec) {
  if (spec.n_positive < 1 || spec.n_negative < 1)
    throw std::invalid_argument("make_planted: both classes need samples");
  if (spec.n_informative < 1) throw std::invalid_argument("make_planted: need an informative gene");
  if (spec.model == PlantedModel::linear_rule && spec.margin < 0.0)
    throw std::invalid_argument("make_planted: margin must be non-negative");
  if (!(spec.noise_sd > 0.0)) throw std::invalid_argument("make_planted: noise_sd must be positive");
  if (!(spec.informative_sd > 0.0)) throw std::invalid_argument("make_planted: informative_sd must be positive");

  const std::size_t d = spec.n_informative + spec.n_noise;
  const std::size_t n = spec.n_positive + spec.n_negative;
  Rng gene_rng = derive_rng(spec.seed, {0x47454e45});  // "GENE"
  Rng rng = derive_rng(spec.seed, {0x53414d50});       // "SAMP"
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  if (spec.shuffle_genes)
    for (std::size_t i = d; i > 1; --i) std::swap(order[i - 1], order[uniform_index(gene_rng, i)]);
  PlantedDataset out;
  out.informative.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(spec.n_informative));
  std::sort(out.informative.begin(), out.informative.end());

  // Interleave labels: +1 and -1 alternate until one class runs out.
  std::vector<int> labels;
  for (std::size_t p = 0, q = 0; p + q < n;) {
    const bool take_pos = q >= spec.n_negative || (p < spec.n_positive && p <= q);
    labels.push_back(take_pos ? 1 : -1);
    ++(take_pos ? p : q);
  }

  Matrix x(n, d);
  const double sqrt_k = std::sqrt(static_cast<double>(spec.n_informative));
  for (std::size_t i = 0; i < n; ++i) {
    const int y = labels[i];
    if (spec.model == PlantedModel::mean_shift) {
      for (std::size_t j = 0; j < d; ++j) x(i, j) = spec.noise_sd * normal(rng);
      for (std::size_t j : out.informative) x(i, j) = normal(rng) + y * spec.shift / 2.0;
    } else {
      // Rejection sampling on the informative block until its normalized
      // sum lands on the labelled side with the requested margin.
      for (;;) {
        double sum = 0.0;
        for (std::size_t j : out.informative) {
          const double z = normal(rng);
          x(i, j) = spec.informative_sd * z;
          sum += z;
        }
        if (y * sum / sqrt_k > spec.margin) break;
      }
      for (std::size_t j = 0; j < d; ++j)
        if (!std::binary_search(out.informative.begin(), out.informative.end(), j))
          x(i, j) = spec.noise_sd * normal(rng);
    }
  }

  out.data.features = std::move(x);
  out.data.labels = std::move(labels);
  out.data.gene_names.resize(d);
  for (std::size_t j = 0; j < d; ++j) out.data.gene_names[j] = "g" + std::to_string(j);
  out.data.positive_name = "pos";
  out.data.negative_name = "neg";
  return out;
}

}  // namespace hawkqk::synthetic
