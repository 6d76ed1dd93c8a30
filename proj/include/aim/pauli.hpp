#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace aim {

using cplx = std::complex<double>;
using Basis = std::uint64_t;

enum class Pauli : std::uint8_t { X = 1, Y = 2, Z = 3 };

/// A Pauli string stored as bit masks. Qubit q carries X if only x bit q is
/// set, Z if only z bit q is set and Y if both are set. Identity is (0, 0).
struct PauliString {
  Basis x = 0;
  Basis z = 0;

  static PauliString single(int qubit, Pauli p);
  static PauliString from_factors(const std::map<int, Pauli>& factors);

  std::map<int, Pauli> factors() const;
  bool is_identity() const { return x == 0 && z == 0; }
  bool is_diagonal() const { return x == 0; }
  Basis support() const { return x | z; }
  int weight() const;

  /// P|b> = phase * |b ^ x>.
  cplx phase_on(Basis b) const;

  auto operator<=>(const PauliString&) const = default;
};

/// Product of two Pauli strings: a * b = phase * c.
std::pair<cplx, PauliString> multiply(const PauliString& a, const PauliString& b);

struct PauliTerm {
  cplx coeff{0.0, 0.0};
  PauliString string;

  std::map<int, Pauli> factors() const { return string.factors(); }
};

/// Weighted sum of Pauli strings on a fixed register. Always canonical: like
/// strings are merged and terms with |coeff| <= zero_tolerance are dropped.
class PauliSum {
 public:
  static constexpr double zero_tolerance = 1e-14;

  PauliSum() = default;
  explicit PauliSum(int n_qubits) : n_qubits_(n_qubits) {}
  PauliSum(int n_qubits, const std::vector<PauliTerm>& terms);

  static PauliSum identity(int n_qubits, cplx coeff = 1.0);
  static PauliSum single(int n_qubits, int qubit, Pauli p, cplx coeff = 1.0);
  static PauliSum from_string(int n_qubits, const PauliString& s, cplx coeff = 1.0);

  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  std::vector<PauliTerm> terms() const;
  const std::map<PauliString, cplx>& map() const { return terms_; }

  cplx coefficient(const PauliString& s) const;
  /// Coefficient of the identity string.
  cplx constant() const { return coefficient(PauliString{}); }

  PauliSum& operator+=(const PauliSum& other);
  PauliSum& operator-=(const PauliSum& other);
  PauliSum& operator*=(cplx scalar);
  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
  friend PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
  friend PauliSum operator*(PauliSum a, cplx s) { return a *= s; }
  friend PauliSum operator*(cplx s, PauliSum a) { return a *= s; }
  friend PauliSum operator*(const PauliSum& a, const PauliSum& b);
  bool operator==(const PauliSum& other) const;

  PauliSum adjoint() const;
  bool is_hermitian(double tol = 1e-12) const;

  /// y = O x without materializing O.
  Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;
  cplx expectation(const Eigen::VectorXcd& psi) const;

  Eigen::MatrixXcd to_dense() const;
  Eigen::SparseMatrix<cplx> to_sparse() const;
  /// Matrix elements <basis[i]|O|basis[j]>; states mapped outside the list are
  /// dropped, so the caller must pass a basis invariant under O.
  Eigen::MatrixXcd matrix_in_basis(const std::vector<Basis>& basis) const;

  std::string to_string() const;

 private:
  void add_term(const PauliString& s, cplx c);
  void prune();

  int n_qubits_ = 0;
  std::map<PauliString, cplx> terms_;
};

}  // namespace aim
