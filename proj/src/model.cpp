#include "aim/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <map>
#include <tuple>

#include "aim/random.hpp"

namespace aim {

void AimParams::validate() const {
  if (n_imp < 1) throw std::invalid_argument("AimParams: n_imp must be >= 1");
  if (n_bath < 0) throw std::invalid_argument("AimParams: n_bath must be >= 0");
  if (h.rows() != n_imp || h.cols() != n_imp) throw std::invalid_argument("AimParams: h must be n_imp x n_imp");
  if (U.size() != n_imp) throw std::invalid_argument("AimParams: U must have n_imp entries");
  if (V.rows() != n_imp || V.cols() != n_bath) throw std::invalid_argument("AimParams: V must be n_imp x n_bath");
  if (eps.size() != n_bath) throw std::invalid_argument("AimParams: eps must have n_bath entries");
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw std::invalid_argument("AimParams: h is not symmetric");
  if (n_qubits() > 62) throw std::invalid_argument("AimParams: too many sites");
}

int up_orbital(const AimParams& /*p*/, int site) { return site; }
int down_orbital(const AimParams& p, int site) { return p.n_sites() + site; }

bool Sector::valid_for(int n_qubits) const {
  if (n_qubits <= 0 || n_qubits % 2 != 0) return false;
  if (((n_total + s_z) % 2) != 0) return false;
  const int r = n_qubits / 2;
  return n_up() >= 0 && n_up() <= r && n_down() >= 0 && n_down() <= r;
}

void Sector::validate(int n_qubits) const {
  if (((n_total + s_z) % 2) != 0)
    throw std::invalid_argument("Sector: N and Sz must have the same parity");
  if (!valid_for(n_qubits))
    throw std::invalid_argument("Sector (" + std::to_string(n_total) + "," + std::to_string(s_z) +
                                ") does not fit " + std::to_string(n_qubits) + " qubits");
}

AimParams sample_params(std::uint64_t seed, int n_imp, int n_bath) {
  if (n_imp < 1 || n_bath < 1) throw std::invalid_argument("sample_params: site counts must be >= 1");
  Rng rng(seed);
  AimParams p;
  p.n_imp = n_imp;
  p.n_bath = n_bath;
  p.seed = seed;
  p.h.resize(n_imp, n_imp);
  // Draw the upper triangle row-major and mirror it.
  for (int i = 0; i < n_imp; ++i) {
    for (int j = i; j < n_imp; ++j) {
      p.h(i, j) = rng.uniform(-5.0, 5.0);
      p.h(j, i) = p.h(i, j);
    }
  }
  p.U.resize(n_imp);
  for (int i = 0; i < n_imp; ++i) p.U[i] = rng.uniform(1.0, 10.0);
  p.V.resize(n_imp, n_bath);
  for (int i = 0; i < n_imp; ++i)
    for (int b = 0; b < n_bath; ++b) p.V(i, b) = rng.uniform(-5.0, 5.0);
  p.eps.resize(n_bath);
  for (int b = 0; b < n_bath; ++b) p.eps[b] = rng.uniform(-5.0, 5.0);
  return p;
}

PauliSum jw_ladder(int orbital, bool dagger, int n_qubits) {
  if (orbital < 0 || orbital >= n_qubits) throw std::out_of_range("jw_ladder: orbital out of range");
  PauliString zs;
  for (int nu = 0; nu < orbital; ++nu) zs.z |= Basis{1} << nu;
  const cplx y_coeff = dagger ? cplx{0.0, -0.5} : cplx{0.0, 0.5};
  auto x = multiply(zs, PauliString::single(orbital, Pauli::X));
  auto y = multiply(zs, PauliString::single(orbital, Pauli::Y));
  PauliSum out(n_qubits, {{0.5 * x.first, x.second}, {y_coeff * y.first, y.second}});
  return out;
}

PauliSum number_op(int orbital, int n_qubits) {
  return PauliSum::identity(n_qubits, 0.5) - PauliSum::single(n_qubits, orbital, Pauli::Z, 0.5);
}

PauliSum build_hamiltonian(const AimParams& params) {
  params.validate();
  const int nq = params.n_qubits();
  PauliSum H(nq);
  auto hop = [nq](int a, int b) { return jw_ladder(a, true, nq) * jw_ladder(b, false, nq); };

  for (int spin = 0; spin < 2; ++spin) {
    auto orb = [&](int site) { return spin == 0 ? up_orbital(params, site) : down_orbital(params, site); };
    for (int i = 0; i < params.n_imp; ++i) {
      for (int j = 0; j < params.n_imp; ++j) {
        if (params.h(i, j) != 0.0) H += params.h(i, j) * hop(orb(i), orb(j));
      }
      for (int b = 0; b < params.n_bath; ++b) {
        const double v = params.V(i, b);
        if (v == 0.0) continue;
        const int bo = orb(params.n_imp + b);
        H += v * (hop(orb(i), bo) + hop(bo, orb(i)));
      }
    }
    for (int b = 0; b < params.n_bath; ++b) {
      if (params.eps[b] != 0.0) H += params.eps[b] * number_op(orb(params.n_imp + b), nq);
    }
  }
  for (int i = 0; i < params.n_imp; ++i) {
    if (params.U[i] != 0.0)
      H += params.U[i] * (number_op(up_orbital(params, i), nq) * number_op(down_orbital(params, i), nq));
  }
  return H;
}

std::pair<PauliSum, PauliSum> symmetry_ops(int n_qubits) {
  if (n_qubits <= 0 || n_qubits % 2 != 0) throw std::invalid_argument("symmetry_ops: n_qubits must be even");
  const int r = n_qubits / 2;
  PauliSum plus(n_qubits), minus(n_qubits);
  for (int q = 0; q < n_qubits; ++q) {
    const PauliSum n = number_op(q, n_qubits);
    plus += n;
    if (q < r) minus += n; else minus -= n;
  }
  return {plus, minus};
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

std::uint64_t sector_dimension(const Sector& sector, int n_qubits) {
  sector.validate(n_qubits);
  const int r = n_qubits / 2;
  return binomial(r, sector.n_up()) * binomial(r, sector.n_down());
}

std::vector<Sector> enumerate_sectors(int n_qubits, bool unique_only) {
  if (n_qubits <= 0 || n_qubits % 2 != 0) throw std::invalid_argument("enumerate_sectors: n_qubits must be even");
  const int r = n_qubits / 2;
  std::vector<Sector> out;
  for (int n = 1; n <= n_qubits - 1; ++n) {
    for (int up = std::max(0, n - r); up <= std::min(n, r); ++up) {
      const Sector s{n, 2 * up - n};
      if (unique_only && s.s_z < 0) continue;
      out.push_back(s);
    }
  }
  return out;
}

std::vector<Sector> all_sectors(int n_qubits) {
  std::vector<Sector> out{Sector{0, 0}};
  const auto inner = enumerate_sectors(n_qubits, false);
  out.insert(out.end(), inner.begin(), inner.end());
  out.push_back(Sector{n_qubits, 0});
  return out;
}

std::vector<Basis> sector_basis(const Sector& sector, int n_qubits) {
  sector.validate(n_qubits);
  const int r = n_qubits / 2;
  const Basis up_mask = (Basis{1} << r) - 1;
  std::vector<Basis> out;
  out.reserve(sector_dimension(sector, n_qubits));
  const Basis dim = Basis{1} << n_qubits;
  for (Basis b = 0; b < dim; ++b) {
    if (std::popcount(b & up_mask) == sector.n_up() && std::popcount(b >> r) == sector.n_down()) out.push_back(b);
  }
  return out;
}

Sector sector_of(Basis b, int n_qubits) {
  const int r = n_qubits / 2;
  const Basis up_mask = (Basis{1} << r) - 1;
  const int up = std::popcount(b & up_mask);
  const int down = std::popcount(b >> r);
  return Sector{up + down, up - down};
}

double sector_leakage(const State& state, const Sector& sector) {
  double leak = 0.0;
  for (Eigen::Index b = 0; b < state.dim(); ++b) {
    if (sector_of(static_cast<Basis>(b), state.n_qubits()) != sector) leak += std::norm(state[b]);
  }
  return leak;
}

State SectorSpectrum::eigenstate(int k, int n_qubits) const {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_qubits);
  for (std::size_t i = 0; i < basis.size(); ++i)
    amps[static_cast<Eigen::Index>(basis[i])] = vectors(static_cast<Eigen::Index>(i), k);
  return State(n_qubits, std::move(amps));
}

SectorSpectrum diagonalize_sector(const PauliSum& hamiltonian, const Sector& sector) {
  const int nq = hamiltonian.n_qubits();
  SectorSpectrum out;
  out.sector = sector;
  out.basis = sector_basis(sector, nq);
  // Individual strings may leave the sector (XX and YY do); only their sum
  // has to stay inside.
  std::map<Basis, cplx> image;
  for (const Basis b : out.basis) {
    image.clear();
    for (const auto& [s, c] : hamiltonian.map()) image[b ^ s.x] += c * s.phase_on(b);
    for (const auto& [target, amp] : image) {
      if (std::abs(amp) > 1e-12 && sector_of(target, nq) != sector)
        throw std::invalid_argument("diagonalize_sector: Hamiltonian does not conserve the sector");
    }
  }
  const Eigen::MatrixXcd block = hamiltonian.matrix_in_basis(out.basis);
  if (block.imag().cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("diagonalize_sector: sector block is not real");
  const Eigen::MatrixXd real_block = block.real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(real_block);
  if (solver.info() != Eigen::Success) throw std::runtime_error("diagonalize_sector: eigensolver failed");
  out.energies = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  return out;
}

EdResult exact_diagonalize(const AimParams& params) { return exact_diagonalize(build_hamiltonian(params)); }

EdResult exact_diagonalize(const PauliSum& hamiltonian) {
  const int nq = hamiltonian.n_qubits();
  if (nq > kMaxEdQubits) throw std::invalid_argument("exact_diagonalize: more than 16 qubits");
  EdResult result;
  for (const Sector& s : all_sectors(nq)) result.spectra.push_back(diagonalize_sector(hamiltonian, s));

  double e0 = std::numeric_limits<double>::infinity();
  for (const auto& sp : result.spectra) e0 = std::min(e0, sp.energies[0]);

  // Tie-break: lowest (N, |Sz|), then Sz >= 0.
  const SectorSpectrum* best = nullptr;
  auto key = [](const Sector& s) { return std::tuple(s.n_total, std::abs(s.s_z), s.s_z < 0); };
  for (const auto& sp : result.spectra) {
    if (sp.energies[0] - e0 > 1e-10) continue;
    if (best == nullptr || key(sp.sector) < key(best->sector)) best = &sp;
  }

  std::vector<double> all;
  for (const auto& sp : result.spectra) all.insert(all.end(), sp.energies.data(), sp.energies.data() + sp.energies.size());
  std::sort(all.begin(), all.end());

  result.ground_energy = e0;
  result.ground_sector = best->sector;
  result.ground_state = best->eigenstate(0, nq);
  result.gap = all.size() > 1 ? all[1] - all[0] : std::numeric_limits<double>::infinity();
  result.degenerate = result.gap < kDegeneracyTolerance;
  return result;
}

std::complex<double> resolvent_reference(const PauliSum& h_tilde, const State& phi, std::complex<double> z) {
  if (h_tilde.n_qubits() != phi.n_qubits()) throw std::invalid_argument("resolvent_reference: register mismatch");
  if (phi.n_qubits() > 12) throw std::invalid_argument("resolvent_reference: dense solve limited to 12 qubits");
  const Eigen::Index dim = phi.dim();
  const Eigen::MatrixXcd a = z * Eigen::MatrixXcd::Identity(dim, dim) - h_tilde.to_dense();
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  if (!(lu.rcond() >= 1e-14)) throw std::domain_error("resolvent_reference: singular system");
  const Eigen::VectorXcd x = lu.solve(phi.amplitudes());
  return phi.amplitudes().dot(x);
}

std::complex<double> resolvent_reference(const AimParams& params, const State& phi, std::complex<double> z,
                                         double e_gs) {
  const PauliSum h = build_hamiltonian(params);
  return resolvent_reference(h - PauliSum::identity(h.n_qubits(), e_gs), phi, z);
}

}  // namespace aim
