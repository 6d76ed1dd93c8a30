#pragma once

// Dense reference implementations built directly from occupation-number
// bitstrings. They share no code with the library's Pauli algebra.

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>

#include <Eigen/Dense>

#include "aim/model.hpp"
#include "aim/random.hpp"
#include "aim/state.hpp"

namespace oracle {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using cplx = std::complex<double>;

/// c_mu^dagger with the sign (-1)^(occupied orbitals below mu).
inline Matrix creation(int mu, int nq) {
  const Eigen::Index dim = Eigen::Index{1} << nq;
  Matrix m = Matrix::Zero(dim, dim);
  const std::uint64_t bit = std::uint64_t{1} << mu;
  for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(dim); ++b) {
    if (b & bit) continue;
    const int below = std::popcount(b & (bit - 1));
    m(static_cast<Eigen::Index>(b | bit), static_cast<Eigen::Index>(b)) = (below % 2) ? -1.0 : 1.0;
  }
  return m;
}

inline Matrix annihilation(int mu, int nq) { return creation(mu, nq).adjoint(); }

inline Matrix ladder(int mu, bool dagger, int nq) { return dagger ? creation(mu, nq) : annihilation(mu, nq); }

inline Matrix number(int mu, int nq) { return creation(mu, nq) * annihilation(mu, nq); }

/// The impurity Hamiltonian assembled from dense ladder operators.
inline Matrix hamiltonian(const aim::AimParams& p) {
  const int nq = p.n_qubits();
  const int ns = p.n_sites();
  const Eigen::Index dim = Eigen::Index{1} << nq;
  Matrix h = Matrix::Zero(dim, dim);
  for (int spin = 0; spin < 2; ++spin) {
    const int off = spin * ns;
    for (int i = 0; i < p.n_imp; ++i) {
      for (int j = 0; j < p.n_imp; ++j) h += p.h(i, j) * creation(off + i, nq) * annihilation(off + j, nq);
      for (int b = 0; b < p.n_bath; ++b) {
        const Matrix t = creation(off + i, nq) * annihilation(off + p.n_imp + b, nq);
        h += p.V(i, b) * (t + t.adjoint());
      }
    }
    for (int b = 0; b < p.n_bath; ++b) h += p.eps[b] * number(off + p.n_imp + b, nq);
  }
  for (int i = 0; i < p.n_imp; ++i) h += p.U[i] * number(i, nq) * number(ns + i, nq);
  return h;
}

inline Matrix total_charge(int nq) {
  const Eigen::Index dim = Eigen::Index{1} << nq;
  Matrix m = Matrix::Zero(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) m(b, b) = std::popcount(static_cast<std::uint64_t>(b));
  return m;
}

inline Matrix spin_z(int nq) {
  const Eigen::Index dim = Eigen::Index{1} << nq;
  const std::uint64_t up_mask = (std::uint64_t{1} << (nq / 2)) - 1;
  Matrix m = Matrix::Zero(dim, dim);
  for (Eigen::Index b = 0; b < dim; ++b) {
    const auto u = static_cast<std::uint64_t>(b);
    m(b, b) = std::popcount(u & up_mask) - std::popcount(u & ~up_mask);
  }
  return m;
}

/// e^{-iHt} from a full Hermitian eigendecomposition.
inline Matrix propagator(const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Eigen::VectorXcd phases = (es.eigenvalues().cast<cplx>() * cplx{0.0, -t}).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

inline double ground_energy(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

inline aim::State random_state(int nq, aim::Rng& rng) {
  const Eigen::Index dim = Eigen::Index{1} << nq;
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = cplx{rng.uniform(-1, 1), rng.uniform(-1, 1)};
  v.normalize();
  return aim::State(nq, v);
}

inline Matrix random_hermitian(int nq, aim::Rng& rng) {
  const Eigen::Index dim = Eigen::Index{1} << nq;
  Matrix a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = cplx{rng.uniform(-1, 1), rng.uniform(-1, 1)};
  return (a + a.adjoint()) / 2.0;
}

/// Dense X, Y, Z on one qubit of an n-qubit register (little-endian).
inline Matrix pauli(char p, int q, int nq) {
  Eigen::Matrix2cd s;
  if (p == 'X') s << 0, 1, 1, 0;
  else if (p == 'Y') s << 0, cplx{0, -1}, cplx{0, 1}, 0;
  else if (p == 'Z') s << 1, 0, 0, -1;
  else s = Eigen::Matrix2cd::Identity();
  Matrix m = Matrix::Identity(1, 1);
  for (int k = nq - 1; k >= 0; --k) {
    const Matrix f = (k == q) ? Matrix(s) : Matrix(Matrix::Identity(2, 2));
    Matrix next(m.rows() * 2, m.cols() * 2);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = m(i, j) * f;
    m = next;
  }
  return m;
}

}  // namespace oracle
