#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "aim/pauli.hpp"
#include "aim/random.hpp"
#include "aim/state.hpp"

namespace aim {

/// Exact propagator e^{-iHt} from a cached eigendecomposition. The basis is
/// split into the connected components of H's action and each component is
/// diagonalized once. Applied to a larger register it acts on the lowest
/// n_qubits() qubits.
class Propagator {
 public:
  explicit Propagator(const PauliSum& h);

  int n_qubits() const { return n_qubits_; }
  const PauliSum& hamiltonian() const { return h_; }
  std::size_t block_count() const { return blocks_.size(); }

  void apply(Eigen::VectorXcd& amps, double t) const;
  State evolve(const State& state, double t) const;

 private:
  struct Block {
    std::vector<Basis> basis;
    Eigen::VectorXd energies;
    Eigen::MatrixXcd vectors;
  };

  PauliSum h_;
  int n_qubits_ = 0;
  std::vector<Block> blocks_;
};

enum class GateKind {
  X,
  H,
  S,
  Sdg,
  Rz,
  Givens,
  ZZ,
  CNOT,
  Toffoli,
  ControlledPauliString,
  Project,
  Measure,
  Evolve,
};

std::string to_string(GateKind kind);

/// One circuit instruction.
///
/// Operand layout: single-qubit kinds use qubits[0]; Givens and ZZ act on
/// (qubits[0], qubits[1]); CNOT is (control, target); Toffoli is
/// (control, control, target). ControlledPauliString applies `pauli` when
/// every (qubit, value) pair in `controls` matches. Project zeroes the branch
/// with qubit != outcome without renormalizing.
struct Gate {
  GateKind kind = GateKind::X;
  std::vector<int> qubits;
  double param = 0.0;
  int outcome = 0;
  std::vector<std::pair<int, int>> controls;
  PauliString pauli;
  std::shared_ptr<const Propagator> propagator;
  /// Position in the parameter vector for bound ansatz gates, -1 otherwise.
  int param_index = -1;

  bool is_unitary() const { return kind != GateKind::Project && kind != GateKind::Measure; }
  /// Highest qubit index touched plus one.
  int span() const;
};

namespace gates {
Gate x(int q);
Gate h(int q);
Gate s(int q);
Gate sdg(int q);
Gate rz(int q, double phi);
/// Identity on |00>,|11>; rotation [[cos, -sin], [sin, cos]] on (|01>, |10>)
/// where |01> means qubit a = 0, qubit b = 1.
Gate givens(int a, int b, double theta);
/// exp(-i theta Z_a Z_b / 2)
Gate zz(int a, int b, double theta);
Gate cnot(int control, int target);
Gate toffoli(int c1, int c2, int target);
Gate controlled_pauli(std::vector<std::pair<int, int>> controls, PauliString pauli);
Gate project(int q, int outcome);
Gate measure(int q);
Gate evolve(std::shared_ptr<const Propagator> propagator, double t);
}  // namespace gates

Gate inverse(const Gate& gate);

struct Circuit {
  int n_qubits = 0;
  std::vector<Gate> gates;

  Circuit& add(Gate g);
  Circuit& append(const Circuit& other);
  void validate() const;
};

/// Outcome of running a circuit. After Project gates the state carries the
/// branch amplitude, so its squared norm is the post-selection survival
/// probability; Measure outcomes are recorded in program order.
struct RunResult {
  State state;
  std::vector<int> outcomes;

  double survival() const { return state.amplitudes().squaredNorm(); }
};

void apply_in_place(State& state, const Gate& gate);
State apply(State state, const Gate& gate);
RunResult run(const Circuit& circuit, State initial, Rng* rng = nullptr);
RunResult run(const Circuit& circuit, Rng* rng = nullptr);

struct MeasureResult {
  int outcome = 0;
  State state;
  double prob = 0.0;
};

constexpr double kZeroBranchNorm = 1e-8;

/// Normalized projection onto one outcome of a qubit. `norm` is the amplitude
/// norm of the branch before renormalizing; `state` is empty for a zero
/// branch (norm < kZeroBranchNorm).
struct Branch {
  std::optional<State> state;
  double norm = 0.0;

  bool zero() const { return !state.has_value(); }
};

double probability_of_one(const State& state, int q);
MeasureResult measure_qubit(const State& state, int q, Rng& rng);
Branch project(const State& state, int q, int outcome);

std::complex<double> expectation(const State& state, const PauliSum& obs);

/// e^{-iHt}|psi>.
State evolve(const State& state, const PauliSum& h, double t);

std::map<Basis, std::uint64_t> sample(const State& state, std::uint64_t shots, Rng& rng);

/// Lowering to {H, Rz, CNOT}: ZZ -> CNOT Rz CNOT, Givens -> a 2-CNOT template.
std::vector<Gate> compile_gate(const Gate& gate);

/// Dense matrix of a unitary circuit, column j = circuit applied to |j>.
Eigen::MatrixXcd unitary(const Circuit& circuit);

}  // namespace aim
