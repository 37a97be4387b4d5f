#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hawkqk/random.hpp"

namespace hawkqk::hho {

// Binary gene-selection vector: bit j set means gene j is kept.
class FeatureMask {
 public:
  FeatureMask() = default;
  explicit FeatureMask(std::size_t d) : bits_(d, 0) {}
  explicit FeatureMask(std::vector<std::uint8_t> bits);

  static FeatureMask all(std::size_t d);

  std::size_t size() const noexcept { return bits_.size(); }
  bool test(std::size_t j) const { return bits_.at(j) != 0; }
  void set(std::size_t j, bool on = true) { bits_.at(j) = on ? 1 : 0; }

  std::size_t selected_count() const noexcept;
  std::vector<std::size_t> selected_indices() const;
  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

  // "0110..." rendering, mostly for logs and tests.
  std::string to_string() const;

  bool operator==(const FeatureMask&) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

enum class TransferKind { s_shaped, v_shaped };

// S: 1 / (1 + exp(-delta)); V: |tanh(delta)|.
double transfer_probability(double delta, TransferKind kind);

// One uniform draw per coordinate, in coordinate order.
// S rule: bit = draw < T(delta). V rule: the current bit flips when draw < T(delta).
FeatureMask binarize(std::span<const double> position, const FeatureMask& current,
                     TransferKind kind, Rng& rng);

}  // namespace hawkqk::hho
