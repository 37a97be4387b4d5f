#include "hawkqk/feature_map.hpp"

#include <array>
#include <numbers>
#include <stdexcept>

namespace hawkqk::qk {

FeatureMapKind parse_feature_map(const std::string& name) {
  if (name == "z") return FeatureMapKind::z;
  if (name == "zz") return FeatureMapKind::zz;
  if (name == "pauli_zyy" || name == "pauli_z_yy" || name == "pauli") return FeatureMapKind::pauli_z_yy;
  throw std::invalid_argument("unknown feature map '" + name + "' (expected z, zz or pauli_zyy)");
}

std::string to_string(FeatureMapKind kind) {
  switch (kind) {
    case FeatureMapKind::z: return "z";
    case FeatureMapKind::zz: return "zz";
    case FeatureMapKind::pauli_z_yy: return "pauli_zyy";
  }
  return "?";
}

void FeatureMapSpec::validate() const {
  if (n_qubits < 1) throw std::invalid_argument("feature map: need at least one qubit");
  if (n_qubits > kMaxQubits) throw std::invalid_argument("feature map: too many qubits for the simulator");
  if (reps < 1) throw std::invalid_argument("feature map: reps must be at least 1");
}

double data_map(std::span<const double> x, std::span<const std::size_t> subset) {
  if (subset.size() == 1) return x[subset[0]];
  if (subset.size() == 2) return (std::numbers::pi - x[subset[0]]) * (std::numbers::pi - x[subset[1]]);
  throw std::invalid_argument("data_map: subset size must be 1 or 2");
}

Circuit build_feature_map(const FeatureMapSpec& spec, std::span<const double> x) {
  spec.validate();
  if (x.size() != spec.n_qubits)
    throw std::invalid_argument("feature map: input length " + std::to_string(x.size()) +
                                " differs from qubit count " + std::to_string(spec.n_qubits));
  const std::size_t n = spec.n_qubits;
  Circuit block;
  for (std::size_t q = 0; q < n; ++q) block.push_back(Gate::h(q));
  for (std::size_t q = 0; q < n; ++q) {
    const std::array<std::size_t, 1> s{q};
    block.push_back(Gate::phase(q, 2.0 * data_map(x, s)));
  }
  if (spec.kind != FeatureMapKind::z) {
    for (std::size_t q = 0; q + 1 < n; ++q) {
      const std::array<std::size_t, 2> s{q, q + 1};
      const double angle = 2.0 * data_map(x, s);
      if (spec.kind == FeatureMapKind::zz) {
        block.push_back(Gate::cx(q, q + 1));
        block.push_back(Gate::rz(q + 1, angle));
        block.push_back(Gate::cx(q, q + 1));
      } else {
        block.push_back(Gate::ryy(q, q + 1, angle));
      }
    }
  }
  Circuit circuit;
  circuit.reserve(block.size() * spec.reps);
  for (std::size_t r = 0; r < spec.reps; ++r) circuit.insert(circuit.end(), block.begin(), block.end());
  return circuit;
}

Statevector feature_state(const FeatureMapSpec& spec, std::span<const double> x) {
  Statevector sv(spec.n_qubits);
  sv.apply(build_feature_map(spec, x));
  return sv;
}

}  // namespace hawkqk::qk
