#include "hawkqk/binary.hpp"

#include <cmath>
#include <stdexcept>

namespace hawkqk::hho {

FeatureMask::FeatureMask(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto& b : bits_) b = b ? 1 : 0;
}

FeatureMask FeatureMask::all(std::size_t d) { return FeatureMask(std::vector<std::uint8_t>(d, 1)); }

std::size_t FeatureMask::selected_count() const noexcept {
  std::size_t n = 0;
  for (auto b : bits_) n += b;
  return n;
}

std::vector<std::size_t> FeatureMask::selected_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < bits_.size(); ++j)
    if (bits_[j]) out.push_back(j);
  return out;
}

std::string FeatureMask::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t j = 0; j < bits_.size(); ++j)
    if (bits_[j]) s[j] = '1';
  return s;
}

double transfer_probability(double delta, TransferKind kind) {
  if (kind == TransferKind::v_shaped) return std::abs(std::tanh(delta));
  // Split by sign so exp never overflows.
  if (delta >= 0.0) return 1.0 / (1.0 + std::exp(-delta));
  const double ez = std::exp(delta);
  return ez / (1.0 + ez);
}

FeatureMask binarize(std::span<const double> position, const FeatureMask& current,
                     TransferKind kind, Rng& rng) {
  if (position.size() != current.size())
    throw std::invalid_argument("binarize: position and mask lengths differ");
  FeatureMask next(position.size());
  for (std::size_t j = 0; j < position.size(); ++j) {
    const bool hit = uniform01(rng) < transfer_probability(position[j], kind);
    if (kind == TransferKind::s_shaped)
      next.set(j, hit);
    else
      next.set(j, hit ? !current.test(j) : current.test(j));
  }
  return next;
}

}  // namespace hawkqk::hho
