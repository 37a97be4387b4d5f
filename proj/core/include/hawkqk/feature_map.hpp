#pragma once

#include <span>
#include <string>

#include "hawkqk/statevector.hpp"

namespace hawkqk::qk {

enum class FeatureMapKind { z, zz, pauli_z_yy };
enum class Entanglement { linear };

FeatureMapKind parse_feature_map(const std::string& name);  // "z", "zz", "pauli_zyy"
std::string to_string(FeatureMapKind kind);

struct FeatureMapSpec {
  FeatureMapKind kind = FeatureMapKind::zz;
  std::size_t n_qubits = 2;
  std::size_t reps = 3;
  Entanglement entanglement = Entanglement::linear;

  void validate() const;
};

// Singleton {i}: x_i. Pair {i, j}: (pi - x_i)(pi - x_j).
double data_map(std::span<const double> x, std::span<const std::size_t> subset);

// Per repetition: H on every qubit, PHASE(2 phi_i) on every qubit, then per
// linear pair (q, q+1) either the ZZ phase CX . RZ(2 phi_{q,q+1}) . CX (zz)
// or RYY(2 phi_{q,q+1}) (pauli_z_yy).
Circuit build_feature_map(const FeatureMapSpec& spec, std::span<const double> x);

// U(x)|0...0>.
Statevector feature_state(const FeatureMapSpec& spec, std::span<const double> x);

}  // namespace hawkqk::qk
