#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aim/pauli.hpp"
#include "aim/random.hpp"
#include "aim/sim.hpp"
#include "aim/state.hpp"

namespace aim {

/// f_orbital(t): c^dagger when dagger is set, c otherwise.
struct FermionOp {
  int orbital = 0;
  bool dagger = false;
  double t = 0.0;

  bool operator==(const FermionOp&) const = default;
};

/// <f_m(t_m) ... f_1(t_1)> with ops[0] = f_1 acting first on the ground state.
struct CorrelatorSpec {
  std::vector<FermionOp> ops;

  std::size_t size() const { return ops.size(); }
  /// Throws std::invalid_argument for non-finite times or orbitals outside
  /// the register.
  void validate(int n_qubits) const;
};

enum class CorrelatorMode { fast, gate_level };

std::string to_string(CorrelatorMode mode);

struct CorrelatorResult {
  std::complex<double> value;
  std::complex<double> g_tilde;
  std::vector<double> norms;
  /// 1-based position of the first vanishing norm.
  std::optional<std::size_t> aborted_at;
  CorrelatorMode mode = CorrelatorMode::fast;
  /// |<gs|e^{-iHt_m}|gs> - e^{-iE t_m}| with E = <gs|H|gs>; zero for an eigenstate.
  double phase_error = 0.0;
};

struct RenormalizedApply {
  std::optional<State> state;  // empty for a zero branch
  double norm = 0.0;

  bool zero() const { return !state.has_value(); }
};

/// Projects the orbital onto 0 (creation) or 1 (annihilation), applies the
/// Z-string and X and renormalizes. `norm` is ||f|psi>||.
RenormalizedApply renormalized_apply(const State& state, int orbital, bool dagger);

struct NormChain {
  std::vector<double> norms;
  State final_state;  // normalized, before the bra-side evolution
  std::optional<std::size_t> aborted_at;
};

/// Evolves by t_j - t_{j-1} (t_0 = 0) and applies the normalized f_j, in order.
NormChain norm_chain(const State& gs, const CorrelatorSpec& spec, const Propagator& propagator);
NormChain norm_chain(const State& gs, const CorrelatorSpec& spec, const PauliSum& h);

/// Statevector evaluation: g_tilde = <gs|e^{iHt_m}|final>, value = g_tilde * prod norms.
CorrelatorResult correlator_fast(const State& gs, const CorrelatorSpec& spec, const Propagator& propagator);
CorrelatorResult correlator_fast(const State& gs, const CorrelatorSpec& spec, const PauliSum& h);

enum class Part { real, imag };

/// Gate counts of one controlled fermion operator.
struct ControlledOpCost {
  int toffoli = 0;  // doubly controlled Z on each lower orbital
  int cnot = 0;
  int controlled_projector = 0;
};

ControlledOpCost controlled_op_cost(int orbital);

/// Controlled f on the system register: with control = 1, projects the
/// orbital through the projector ancilla (post-selected on 0), applies the
/// Z-string and X. Does nothing with control = 0.
std::vector<Gate> controlled_fermion(const FermionOp& op, int control, int projector);

/// Modified Hadamard test on n_qubits + 2 wires: system, control ancilla
/// (n_qubits) and projector ancilla (n_qubits + 1). The control is read out
/// on the last qubit-index n_qubits after the final H.
Circuit hadamard_circuit(const Circuit& gs_prep, const CorrelatorSpec& spec, const PauliSum& h, Part part,
                         bool prepare_control = true);

struct HadamardEstimate {
  double estimate = 0.0;
  /// Shot-noise standard error; zero in the exact mode.
  double std_error = 0.0;
  double survival = 0.0;
  double p0 = 0.0;  // conditioned on survival
  double p1 = 0.0;
  std::uint64_t shots = 0;
  std::uint64_t kept = 0;
};

/// (P0|ps - P1|ps) * survival, which is Re or Im of the full correlator.
/// Exact probabilities when shots is empty. Throws std::runtime_error when
/// the survival probability is below 1e-12.
HadamardEstimate hadamard_gate_level(const Circuit& gs_prep, const CorrelatorSpec& spec, const PauliSum& h, Part part,
                                     std::optional<std::uint64_t> shots = std::nullopt, Rng* rng = nullptr);

/// Same test started from a given system state instead of a preparation circuit.
HadamardEstimate hadamard_gate_level(const State& gs, const CorrelatorSpec& spec, const PauliSum& h, Part part,
                                     std::optional<std::uint64_t> shots = std::nullopt, Rng* rng = nullptr);

/// Complex value from both parts in exact mode, packed as a gate-level result.
CorrelatorResult correlator_gate_level(const Circuit& gs_prep, const CorrelatorSpec& spec, const PauliSum& h);
CorrelatorResult correlator_gate_level(const State& gs, const CorrelatorSpec& spec, const PauliSum& h);

/// |psi> tensor |0...0> on a register extended by `extra` qubits.
State embed(const State& psi, int extra);

struct GreenSeries {
  std::vector<double> t;
  std::vector<std::complex<double>> greater;
  std::vector<std::complex<double>> lesser;
  std::vector<std::complex<double>> retarded;
};

/// G^>(t) = -i<c(t) c^dagger(0)>, G^<(t) = i<c^dagger(0) c(t)>,
/// G^R = theta(t) (G^> - G^<) with theta(0) = 1.
GreenSeries greater_lesser_retarded(const State& gs, const PauliSum& h, int orbital, const std::vector<double>& times);

/// Uniform time grid 0, dt, ..., t_max.
std::vector<double> time_grid(double t_max, double dt);

/// Trapezoid integral of e^{i w t - eta t} G(t) over the samples, per omega.
std::vector<std::complex<double>> damped_fourier(const std::vector<double>& times,
                                                 const std::vector<std::complex<double>>& values,
                                                 const std::vector<double>& omega, double eta);

}  // namespace aim
