#include "aim/pauli.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace aim {

namespace {

constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

cplx i_pow(int k) { return kIPow[((k % 4) + 4) % 4]; }

int popcount(Basis v) { return std::popcount(v); }

}  // namespace

PauliString PauliString::single(int qubit, Pauli p) {
  if (qubit < 0 || qubit >= 64) throw std::out_of_range("Pauli qubit index out of range");
  const Basis bit = Basis{1} << qubit;
  switch (p) {
    case Pauli::X: return {bit, 0};
    case Pauli::Y: return {bit, bit};
    case Pauli::Z: return {0, bit};
  }
  return {};
}

PauliString PauliString::from_factors(const std::map<int, Pauli>& factors) {
  PauliString s;
  for (const auto& [q, p] : factors) {
    const auto f = single(q, p);
    s.x |= f.x;
    s.z |= f.z;
  }
  return s;
}

std::map<int, Pauli> PauliString::factors() const {
  std::map<int, Pauli> out;
  for (Basis m = support(); m != 0; m &= m - 1) {
    const int q = std::countr_zero(m);
    const bool hx = (x >> q) & 1U;
    const bool hz = (z >> q) & 1U;
    out[q] = hx && hz ? Pauli::Y : (hx ? Pauli::X : Pauli::Z);
  }
  return out;
}

int PauliString::weight() const { return popcount(support()); }

cplx PauliString::phase_on(Basis b) const {
  const int ny = popcount(x & z);
  const int sign = popcount(b & z) & 1;
  return i_pow(ny + 2 * sign);
}

std::pair<cplx, PauliString> multiply(const PauliString& a, const PauliString& b) {
  // P = i^{n_y} X^x Z^z, and Z^{z1} X^{x2} = (-1)^{|z1 & x2|} X^{x2} Z^{z1}.
  const PauliString c{a.x ^ b.x, a.z ^ b.z};
  const int k = popcount(a.x & a.z) + popcount(b.x & b.z) - popcount(c.x & c.z) +
                2 * (popcount(a.z & b.x) & 1);
  return {i_pow(k), c};
}

PauliSum::PauliSum(int n_qubits, const std::vector<PauliTerm>& terms) : n_qubits_(n_qubits) {
  for (const auto& t : terms) add_term(t.string, t.coeff);
  prune();
}

PauliSum PauliSum::identity(int n_qubits, cplx coeff) {
  return from_string(n_qubits, PauliString{}, coeff);
}

PauliSum PauliSum::single(int n_qubits, int qubit, Pauli p, cplx coeff) {
  if (qubit < 0 || qubit >= n_qubits) throw std::out_of_range("qubit index out of range");
  return from_string(n_qubits, PauliString::single(qubit, p), coeff);
}

PauliSum PauliSum::from_string(int n_qubits, const PauliString& s, cplx coeff) {
  PauliSum out(n_qubits);
  out.add_term(s, coeff);
  out.prune();
  return out;
}

std::vector<PauliTerm> PauliSum::terms() const {
  std::vector<PauliTerm> out;
  out.reserve(terms_.size());
  for (const auto& [s, c] : terms_) out.push_back({c, s});
  return out;
}

cplx PauliSum::coefficient(const PauliString& s) const {
  const auto it = terms_.find(s);
  return it == terms_.end() ? cplx{0.0, 0.0} : it->second;
}

void PauliSum::add_term(const PauliString& s, cplx c) {
  if (n_qubits_ < 64 && (s.support() >> n_qubits_) != 0)
    throw std::out_of_range("Pauli string acts outside the register");
  terms_[s] += c;
}

void PauliSum::prune() {
  std::erase_if(terms_, [](const auto& kv) { return std::abs(kv.second) <= zero_tolerance; });
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  n_qubits_ = std::max(n_qubits_, other.n_qubits_);
  for (const auto& [s, c] : other.terms_) add_term(s, c);
  prune();
  return *this;
}

PauliSum& PauliSum::operator-=(const PauliSum& other) {
  n_qubits_ = std::max(n_qubits_, other.n_qubits_);
  for (const auto& [s, c] : other.terms_) add_term(s, -c);
  prune();
  return *this;
}

PauliSum& PauliSum::operator*=(cplx scalar) {
  for (auto& kv : terms_) kv.second *= scalar;
  prune();
  return *this;
}

PauliSum operator*(const PauliSum& a, const PauliSum& b) {
  PauliSum out(std::max(a.n_qubits_, b.n_qubits_));
  for (const auto& [sa, ca] : a.terms_) {
    for (const auto& [sb, cb] : b.terms_) {
      const auto [phase, sc] = multiply(sa, sb);
      out.add_term(sc, phase * ca * cb);
    }
  }
  out.prune();
  return out;
}

bool PauliSum::operator==(const PauliSum& other) const {
  if (n_qubits_ != other.n_qubits_ || terms_.size() != other.terms_.size()) return false;
  return std::equal(terms_.begin(), terms_.end(), other.terms_.begin(),
                    [](const auto& l, const auto& r) { return l.first == r.first && l.second == r.second; });
}

PauliSum PauliSum::adjoint() const {
  PauliSum out(n_qubits_);
  for (const auto& [s, c] : terms_) out.terms_[s] = std::conj(c);
  return out;
}

bool PauliSum::is_hermitian(double tol) const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [tol](const auto& kv) { return std::abs(kv.second.imag()) <= tol; });
}

Eigen::VectorXcd PauliSum::apply(const Eigen::VectorXcd& x) const {
  const Basis dim = Basis{1} << n_qubits_;
  if (static_cast<Basis>(x.size()) != dim) throw std::invalid_argument("PauliSum::apply: dimension mismatch");
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(x.size());
  for (const auto& [s, c] : terms_) {
    for (Basis b = 0; b < dim; ++b) y[static_cast<Eigen::Index>(b ^ s.x)] += c * s.phase_on(b) * x[static_cast<Eigen::Index>(b)];
  }
  return y;
}

cplx PauliSum::expectation(const Eigen::VectorXcd& psi) const {
  const Basis dim = Basis{1} << n_qubits_;
  if (static_cast<Basis>(psi.size()) != dim) throw std::invalid_argument("PauliSum::expectation: dimension mismatch");
  cplx total{0.0, 0.0};
  for (const auto& [s, c] : terms_) {
    cplx acc{0.0, 0.0};
    for (Basis b = 0; b < dim; ++b) {
      acc += std::conj(psi[static_cast<Eigen::Index>(b ^ s.x)]) * s.phase_on(b) * psi[static_cast<Eigen::Index>(b)];
    }
    total += c * acc;
  }
  return total;
}

Eigen::MatrixXcd PauliSum::to_dense() const {
  const Basis dim = Basis{1} << n_qubits_;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& [s, c] : terms_) {
    for (Basis b = 0; b < dim; ++b) m(static_cast<Eigen::Index>(b ^ s.x), static_cast<Eigen::Index>(b)) += c * s.phase_on(b);
  }
  return m;
}

Eigen::SparseMatrix<cplx> PauliSum::to_sparse() const {
  const Basis dim = Basis{1} << n_qubits_;
  std::vector<Eigen::Triplet<cplx>> trips;
  trips.reserve(terms_.size() * dim);
  for (const auto& [s, c] : terms_) {
    for (Basis b = 0; b < dim; ++b)
      trips.emplace_back(static_cast<int>(b ^ s.x), static_cast<int>(b), c * s.phase_on(b));
  }
  Eigen::SparseMatrix<cplx> m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m.setFromTriplets(trips.begin(), trips.end());
  m.prune(cplx{0.0, 0.0}, 1e-300);
  return m;
}

Eigen::MatrixXcd PauliSum::matrix_in_basis(const std::vector<Basis>& basis) const {
  const auto n = static_cast<Eigen::Index>(basis.size());
  std::vector<std::pair<Basis, Eigen::Index>> lookup;
  lookup.reserve(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) lookup.emplace_back(basis[i], static_cast<Eigen::Index>(i));
  std::sort(lookup.begin(), lookup.end());

  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Basis b = basis[static_cast<std::size_t>(j)];
    for (const auto& [s, c] : terms_) {
      const Basis target = b ^ s.x;
      const auto it = std::lower_bound(lookup.begin(), lookup.end(), std::pair<Basis, Eigen::Index>{target, 0});
      if (it == lookup.end() || it->first != target) continue;
      m(it->second, j) += c * s.phase_on(b);
    }
  }
  return m;
}

std::string PauliSum::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [s, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real();
    if (c.imag() != 0.0) os << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i";
    os << ")";
    if (s.is_identity()) os << " I";
    for (const auto& [q, p] : s.factors()) os << ' ' << (p == Pauli::X ? 'X' : p == Pauli::Y ? 'Y' : 'Z') << q;
  }
  return first ? "0" : os.str();
}

}  // namespace aim
