#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "aim/pauli.hpp"
#include "aim/state.hpp"

namespace aim {

/// Anderson impurity model parameters, energies in eV.
///
/// Site s < n_imp is an impurity, the rest are bath sites. The spin-up orbital
/// of site s is qubit s and the spin-down orbital is qubit n_sites() + s.
struct AimParams {
  int n_imp = 1;
  int n_bath = 0;
  Eigen::MatrixXd h;    // n_imp x n_imp, symmetric
  Eigen::VectorXd U;    // n_imp
  Eigen::MatrixXd V;    // n_imp x n_bath
  Eigen::VectorXd eps;  // n_bath
  std::optional<std::uint64_t> seed;

  int n_sites() const { return n_imp + n_bath; }
  int n_qubits() const { return 2 * n_sites(); }
  int register_size() const { return n_sites(); }

  /// Throws std::invalid_argument when dimensions or symmetry are violated.
  void validate() const;
};

int up_orbital(const AimParams& p, int site);
int down_orbital(const AimParams& p, int site);

/// Charge/spin label with N_up = (N + Sz)/2 and N_down = (N - Sz)/2.
struct Sector {
  int n_total = 0;
  int s_z = 0;

  int n_up() const { return (n_total + s_z) / 2; }
  int n_down() const { return (n_total - s_z) / 2; }
  /// True when the parity matches and both occupations fit a register of
  /// n_qubits / 2 orbitals.
  bool valid_for(int n_qubits) const;
  void validate(int n_qubits) const;

  auto operator<=>(const Sector&) const = default;
};

AimParams sample_params(std::uint64_t seed, int n_imp, int n_bath);

/// Jordan-Wigner image of c_orbital (dagger=false) or c_orbital^dagger.
PauliSum jw_ladder(int orbital, bool dagger, int n_qubits);
PauliSum number_op(int orbital, int n_qubits);
PauliSum build_hamiltonian(const AimParams& params);
/// Returns (n^+, n^-): total charge and N_up - N_down.
std::pair<PauliSum, PauliSum> symmetry_ops(int n_qubits);

std::uint64_t binomial(int n, int k);
std::uint64_t sector_dimension(const Sector& sector, int n_qubits);
/// Nontrivial sectors 1 <= N <= Nq - 1, ordered by (N, Sz). With unique_only
/// only the Sz >= 0 member of each Z2 pair is kept.
std::vector<Sector> enumerate_sectors(int n_qubits, bool unique_only);
/// All sectors including the empty and the fully occupied one.
std::vector<Sector> all_sectors(int n_qubits);
/// Sorted computational basis states of a sector.
std::vector<Basis> sector_basis(const Sector& sector, int n_qubits);
Sector sector_of(Basis b, int n_qubits);
/// Squared amplitude mass outside the sector.
double sector_leakage(const State& state, const Sector& sector);

/// Spectrum of H restricted to one sector, eigenvalues ascending.
struct SectorSpectrum {
  Sector sector;
  std::vector<Basis> basis;
  Eigen::VectorXd energies;
  Eigen::MatrixXd vectors;

  State eigenstate(int k, int n_qubits) const;
};

SectorSpectrum diagonalize_sector(const PauliSum& hamiltonian, const Sector& sector);

struct EdResult {
  double ground_energy = 0.0;
  State ground_state;
  Sector ground_sector;
  bool degenerate = false;
  double gap = 0.0;
  std::vector<SectorSpectrum> spectra;
};

constexpr double kDegeneracyTolerance = 1e-9;
constexpr int kMaxEdQubits = 16;

/// Sector-blocked exact diagonalization over every (N, Sz) sector.
EdResult exact_diagonalize(const AimParams& params);
EdResult exact_diagonalize(const PauliSum& hamiltonian);

/// <phi|(z - H_tilde)^{-1}|phi> by a dense linear solve.
std::complex<double> resolvent_reference(const PauliSum& h_tilde, const State& phi, std::complex<double> z);
std::complex<double> resolvent_reference(const AimParams& params, const State& phi, std::complex<double> z,
                                         double e_gs);

}  // namespace aim
