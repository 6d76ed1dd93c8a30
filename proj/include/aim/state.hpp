#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>

#include <Eigen/Dense>

namespace aim {

/// Amplitude vector over 2^n computational basis states. Qubit q is bit q of
/// the basis index (little-endian).
class State {
 public:
  State() = default;
  explicit State(int n_qubits)
      : n_qubits_(n_qubits), amps_(Eigen::VectorXcd::Zero(Eigen::Index{1} << n_qubits)) {
    check_size();
    amps_[0] = 1.0;
  }
  State(int n_qubits, Eigen::VectorXcd amplitudes) : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
    if (amps_.size() != (Eigen::Index{1} << n_qubits_)) throw std::invalid_argument("State: amplitude count is not 2^n");
  }

  static State basis(int n_qubits, std::uint64_t index) {
    State s(n_qubits);
    s.amps_[0] = 0.0;
    s.amps_[static_cast<Eigen::Index>(index)] = 1.0;
    return s;
  }

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return amps_.size(); }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  Eigen::VectorXcd& amplitudes() { return amps_; }
  std::complex<double> operator[](Eigen::Index i) const { return amps_[i]; }

  double norm() const { return amps_.norm(); }
  bool is_normalized(double tol = 1e-10) const { return std::abs(amps_.squaredNorm() - 1.0) <= tol; }
  State& normalize() {
    const double n = norm();
    if (n == 0.0) throw std::domain_error("cannot normalize a zero state");
    amps_ /= n;
    return *this;
  }

  /// <this|other>
  std::complex<double> inner(const State& other) const { return amps_.dot(other.amps_); }

 private:
  void check_size() const {
    if (n_qubits_ < 0 || n_qubits_ > 24) throw std::invalid_argument("State: unsupported qubit count");
  }

  int n_qubits_ = 0;
  Eigen::VectorXcd amps_ = Eigen::VectorXcd::Ones(1);
};

}  // namespace aim
