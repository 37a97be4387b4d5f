#include "hawkqk/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace hawkqk::qk {

Gate Gate::inverse() const {
  Gate g = *this;
  if (kind == GateKind::phase || kind == GateKind::rz || kind == GateKind::ryy) g.angle = -angle;
  return g;
}

std::string Gate::to_string() const {
  switch (kind) {
    case GateKind::h: return "H(" + std::to_string(q0) + ")";
    case GateKind::phase: return "P(" + std::to_string(q0) + "," + std::to_string(angle) + ")";
    case GateKind::rz: return "RZ(" + std::to_string(q0) + "," + std::to_string(angle) + ")";
    case GateKind::cx: return "CX(" + std::to_string(q0) + "," + std::to_string(q1) + ")";
    case GateKind::ryy:
      return "RYY(" + std::to_string(q0) + "," + std::to_string(q1) + "," + std::to_string(angle) + ")";
  }
  return "?";
}

Circuit inverse(const Circuit& c) {
  Circuit out;
  out.reserve(c.size());
  for (auto it = c.rbegin(); it != c.rend(); ++it) out.push_back(it->inverse());
  return out;
}

Statevector::Statevector(std::size_t n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits == 0) throw std::invalid_argument("statevector: need at least one qubit");
  if (n_qubits > kMaxQubits)
    throw std::invalid_argument("statevector: " + std::to_string(n_qubits) +
                                " qubits exceeds the dense simulator limit of " +
                                std::to_string(kMaxQubits));
  amps_.assign(std::size_t{1} << n_qubits, Amplitude{0.0, 0.0});
  amps_[0] = 1.0;
}

Statevector Statevector::from_amplitudes(std::vector<Amplitude> amplitudes) {
  const std::size_t dim = amplitudes.size();
  if (dim < 2 || !std::has_single_bit(dim))
    throw std::invalid_argument("statevector: amplitude count must be a power of two >= 2");
  Statevector sv(static_cast<std::size_t>(std::countr_zero(dim)));
  sv.amps_ = std::move(amplitudes);
  return sv;
}

void Statevector::apply(const Gate& g) {
  if (g.q0 >= n_qubits_ || (g.two_qubit() && g.q1 >= n_qubits_))
    throw std::out_of_range("gate " + g.to_string() + " addresses a qubit outside a " +
                            std::to_string(n_qubits_) + "-qubit register");
  if (g.two_qubit() && g.q0 == g.q1)
    throw std::invalid_argument("gate " + g.to_string() + " repeats a qubit");

  const std::size_t dim = amps_.size();
  double* a = reinterpret_cast<double*>(amps_.data());
  const std::size_t m0 = std::size_t{1} << g.q0;

  switch (g.kind) {
    case GateKind::h: {
      const double r = 1.0 / std::sqrt(2.0);
      for (std::size_t base = 0; base < dim; base += 2 * m0)
        for (std::size_t i = base; i < base + m0; ++i) {
          double* x = a + 2 * i;
          double* y = a + 2 * (i + m0);
          const double xr = x[0], xi = x[1], yr = y[0], yi = y[1];
          x[0] = (xr + yr) * r;
          x[1] = (xi + yi) * r;
          y[0] = (xr - yr) * r;
          y[1] = (xi - yi) * r;
        }
      break;
    }
    case GateKind::phase: {
      const double c = std::cos(g.angle), s = std::sin(g.angle);
      for (std::size_t base = m0; base < dim; base += 2 * m0)
        for (std::size_t i = base; i < base + m0; ++i) {
          double* x = a + 2 * i;
          const double xr = x[0], xi = x[1];
          x[0] = c * xr - s * xi;
          x[1] = s * xr + c * xi;
        }
      break;
    }
    case GateKind::rz: {
      const double c = std::cos(g.angle / 2.0), s = std::sin(g.angle / 2.0);
      for (std::size_t i = 0; i < dim; ++i) {
        double* x = a + 2 * i;
        const double sign = (i & m0) ? 1.0 : -1.0;
        const double xr = x[0], xi = x[1];
        x[0] = c * xr - sign * s * xi;
        x[1] = sign * s * xr + c * xi;
      }
      break;
    }
    case GateKind::cx: {
      const std::size_t mt = std::size_t{1} << g.q1;
      for (std::size_t i = 0; i < dim; ++i)
        if ((i & m0) && !(i & mt)) std::swap(amps_[i], amps_[i | mt]);
      break;
    }
    case GateKind::ryy: {
      const std::size_t m1 = std::size_t{1} << g.q1;
      const double c = std::cos(g.angle / 2.0), s = std::sin(g.angle / 2.0);
      const Amplitude is{0.0, s};
      for (std::size_t i = 0; i < dim; ++i) {
        if ((i & m0) || (i & m1)) continue;
        Amplitude& a00 = amps_[i];
        Amplitude& a01 = amps_[i | m0];  // bit q0 set
        Amplitude& a10 = amps_[i | m1];  // bit q1 set
        Amplitude& a11 = amps_[i | m0 | m1];
        const Amplitude p00 = a00, p01 = a01, p10 = a10, p11 = a11;
        // cos(t/2) I - i sin(t/2) Y(x)Y
        a00 = c * p00 + is * p11;
        a11 = c * p11 + is * p00;
        a01 = c * p01 - is * p10;
        a10 = c * p10 - is * p01;
      }
      break;
    }
  }
}

void Statevector::apply(const Circuit& c) {
  for (const auto& g : c) apply(g);
}

double Statevector::norm_squared() const {
  double s = 0.0;
  for (const auto& x : amps_) s += x.real() * x.real() + x.imag() * x.imag();
  return s;
}

std::vector<double> Statevector::probabilities() const {
  std::vector<double> p(amps_.size());
  for (std::size_t i = 0; i < amps_.size(); ++i)
    p[i] = amps_[i].real() * amps_[i].real() + amps_[i].imag() * amps_[i].imag();
  return p;
}

Statevector apply_gate(Statevector sv, const Gate& g) {
  sv.apply(g);
  return sv;
}

Amplitude inner_product(const Statevector& a, const Statevector& b) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("inner_product: dimension mismatch");
  const auto x = a.amplitudes();
  const auto y = b.amplitudes();
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xr = x[i].real(), xi = x[i].imag(), yr = y[i].real(), yi = y[i].imag();
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  return {re, im};
}

double fidelity(const Statevector& a, const Statevector& b) {
  const Amplitude ip = inner_product(a, b);
  return ip.real() * ip.real() + ip.imag() * ip.imag();
}

}  // namespace hawkqk::qk
