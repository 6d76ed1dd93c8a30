#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "aim/model.hpp"
#include "aim/sim.hpp"

namespace aim {

enum class Connectivity { square_nn, square_nnn };

std::string to_string(Connectivity mode);
Connectivity connectivity_from_string(const std::string& name);
/// square_nn when the layout exists for (n_imp, n_bath), square_nnn otherwise.
Connectivity default_connectivity(int n_imp, int n_bath);

struct QubitNode {
  int qubit = 0;
  int site = 0;
  int spin = 0;  // 0 up, 1 down
  bool impurity = false;
};

/// Undirected edge stored with a < b.
struct Edge {
  int a = 0;
  int b = 0;

  auto operator<=>(const Edge&) const = default;
};

struct Topology {
  int n_imp = 1;
  int n_bath = 0;
  Connectivity mode = Connectivity::square_nn;
  std::vector<QubitNode> nodes;
  std::vector<Edge> givens;
  std::vector<Edge> zz;

  int n_sites() const { return n_imp + n_bath; }
  int n_qubits() const { return 2 * n_sites(); }
  int n_edges() const { return static_cast<int>(givens.size() + zz.size()); }
  /// Givens edges stay within a spin register, ZZ edges join opposite spins,
  /// no duplicates. Throws std::logic_error on violation.
  void validate() const;
};

/// Impurity-to-bath Givens stars in each register plus a ZZ rung on every
/// site. square_nnn also links impurities pairwise.
Topology build_topology(int n_imp, int n_bath, Connectivity mode);

/// Qubit offsets within one register, floor((i + 1/2) R / k).
std::vector<int> excitation_positions(int k, int register_size);

struct Excitations {
  std::vector<int> up;    // register offsets
  std::vector<int> down;  // register offsets
};

Excitations initial_excitations(const Sector& sector, int register_size);

struct SpaCircuit {
  Topology topology;
  int depth = 1;
  Sector sector;
  Excitations excitations;

  int layer_size() const { return topology.n_edges() + topology.n_qubits(); }
  int n_params() const { return depth * layer_size(); }
  int n_qubits() const { return topology.n_qubits(); }
};

SpaCircuit build_spa(const Topology& topology, int depth, const Sector& sector);

/// X layer, then per layer [Givens edges, ZZ edges, Rz on each qubit], with
/// parameter slots numbered in that order.
Circuit bind(const SpaCircuit& spa, const Eigen::VectorXd& theta);

/// Trial state U(theta) prod X |0...0>.
State prepare(const SpaCircuit& spa, const Eigen::VectorXd& theta);

/// Cost functional of the final state. Fills `grad` with dC/d(psi*), so that
/// dC/dtheta_k = 2 Re <grad | d psi / d theta_k>.
using StateCost = std::function<double(const State& psi, Eigen::VectorXcd& grad)>;

struct CostGradient {
  double value = 0.0;
  Eigen::VectorXd gradient;
  State state;
};

/// Reverse-mode (adjoint) differentiation through the Givens, ZZ and Rz gates
/// of a bound circuit.
CostGradient adjoint_gradient(const Circuit& circuit, int n_params, const StateCost& cost);

}  // namespace aim
