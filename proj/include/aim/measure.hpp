#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aim/ansatz.hpp"
#include "aim/model.hpp"
#include "aim/random.hpp"
#include "aim/sim.hpp"

namespace aim {

/// One Hamiltonian contribution and how a shot estimates it.
///
/// A shot b contributes coeff * (-1)^popcount(b & z_mask), times
/// ((-1)^b_mu - (-1)^b_nu) / 2 for hopping terms measured after rotating
/// (mu, nu) by Givens(-pi/4).
struct MeasTerm {
  std::string label;
  double coeff = 0.0;
  int circuit = 0;
  bool hopping = false;
  Edge pair;
  Basis z_mask = 0;
};

struct MeasCircuit {
  std::vector<Edge> rotated_pairs;
  std::vector<int> terms;
};

struct MeasPlan {
  int n_qubits = 0;
  double constant = 0.0;
  std::vector<MeasCircuit> circuits;
  std::vector<MeasTerm> terms;

  /// Givens(-pi/4) on each rotated pair; readout of all qubits follows.
  Circuit rotation(int circuit) const;
};

/// Circuit 0 reads every diagonal term; each further circuit rotates a set of
/// disjoint hopping pairs. With `parallel`, impurity-bath pairs are grouped by
/// round-robin edge coloring, impurity pairs by the circle method, and the two
/// spin copies of a pair share a circuit.
MeasPlan plan_measurements(const AimParams& params, bool parallel);

std::size_t unparallelized_circuit_count(int n_imp, int n_bath);

/// (1/2)(X_mu X_nu + Y_mu Y_nu) prod_{rho != mu, nu} Z_rho
PauliSum rotated_operator(int mu, int nu, int n_qubits);

struct TermEstimate {
  std::string label;
  double coeff = 0.0;
  double estimate = 0.0;
  double variance = 0.0;  // of the estimate
  double kept_fraction = 1.0;
};

struct EnergyEstimate {
  double energy = 0.0;
  /// Shot-noise variance of `energy`; zero in the exact mode.
  double variance = 0.0;
  /// Variance of one shot's summed estimators, added over circuits. Divided
  /// by the per-circuit shot count it predicts `variance`.
  double per_shot_variance = 0.0;
  double kept_fraction = 1.0;
  std::vector<TermEstimate> terms;
};

struct EstimateOptions {
  /// 0 selects the exact infinite-shot limit.
  std::uint64_t shots = 0;
  bool post_select = false;
  /// Target sector for post-selection.
  std::optional<Sector> sector;
};

/// Estimates <H> from per-circuit readouts of `state`. Throws
/// std::runtime_error if post-selection keeps no shots.
EnergyEstimate estimate_energy(const State& state, const MeasPlan& plan, const EstimateOptions& options, Rng& rng);
EnergyEstimate estimate_energy(const Circuit& prep, const MeasPlan& plan, const EstimateOptions& options, Rng& rng);

}  // namespace aim
