#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace hawkqk::qk {

using Amplitude = std::complex<double>;

enum class GateKind { h, phase, rz, cx, ryy };

// q0/q1 meaning per kind: single-qubit gates act on q0; CX uses q0 as
// control and q1 as target; RYY acts symmetrically on q0 and q1.
struct Gate {
  GateKind kind = GateKind::h;
  std::size_t q0 = 0;
  std::size_t q1 = 0;
  double angle = 0.0;

  static Gate h(std::size_t q) { return {GateKind::h, q, 0, 0.0}; }
  static Gate phase(std::size_t q, double theta) { return {GateKind::phase, q, 0, theta}; }
  static Gate rz(std::size_t q, double theta) { return {GateKind::rz, q, 0, theta}; }
  static Gate cx(std::size_t control, std::size_t target) { return {GateKind::cx, control, target, 0.0}; }
  static Gate ryy(std::size_t a, std::size_t b, double theta) { return {GateKind::ryy, a, b, theta}; }

  bool two_qubit() const noexcept { return kind == GateKind::cx || kind == GateKind::ryy; }
  Gate inverse() const;
  std::string to_string() const;

  bool operator==(const Gate&) const = default;
};

using Circuit = std::vector<Gate>;

// Reversed order, each gate inverted.
Circuit inverse(const Circuit& c);

inline constexpr std::size_t kMaxQubits = 24;

// Dense n-qubit state. Little-endian: qubit q is bit q of the amplitude index.
class Statevector {
 public:
  // |0...0>. Throws std::invalid_argument for n == 0 or n > kMaxQubits.
  explicit Statevector(std::size_t n_qubits);

  static Statevector from_amplitudes(std::vector<Amplitude> amplitudes);

  std::size_t n_qubits() const noexcept { return n_qubits_; }
  std::size_t dimension() const noexcept { return amps_.size(); }
  std::span<const Amplitude> amplitudes() const noexcept { return amps_; }

  void apply(const Gate& g);
  void apply(const Circuit& c);

  double norm_squared() const;
  std::vector<double> probabilities() const;

 private:
  std::size_t n_qubits_ = 0;
  std::vector<Amplitude> amps_;
};

Statevector apply_gate(Statevector sv, const Gate& g);

// <a|b>
Amplitude inner_product(const Statevector& a, const Statevector& b);

// |<a|b>|^2
double fidelity(const Statevector& a, const Statevector& b);

}  // namespace hawkqk::qk
