#include "aim/correlator.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>

namespace aim {

namespace {

const std::complex<double> I{0.0, 1.0};

PauliString jw_string(int orbital) {
  PauliString f = PauliString::single(orbital, Pauli::X);
  for (int nu = 0; nu < orbital; ++nu) f.z |= Basis{1} << nu;
  return f;
}

double product(const std::vector<double>& v) {
  double p = 1.0;
  for (double x : v) p *= x;
  return p;
}

}  // namespace

void CorrelatorSpec::validate(int n_qubits) const {
  for (const auto& op : ops) {
    if (op.orbital < 0 || op.orbital >= n_qubits) throw std::invalid_argument("CorrelatorSpec: orbital out of range");
    if (!std::isfinite(op.t)) throw std::invalid_argument("CorrelatorSpec: non-finite time");
  }
}

std::string to_string(CorrelatorMode mode) { return mode == CorrelatorMode::fast ? "fast" : "gate_level"; }

RenormalizedApply renormalized_apply(const State& state, int orbital, bool dagger) {
  if (orbital < 0 || orbital >= state.n_qubits()) throw std::out_of_range("renormalized_apply: orbital out of range");
  const Branch b = project(state, orbital, dagger ? 0 : 1);
  RenormalizedApply out;
  out.norm = b.norm;
  if (b.zero()) return out;
  out.state = apply(*b.state, gates::controlled_pauli({}, jw_string(orbital)));
  return out;
}

NormChain norm_chain(const State& gs, const CorrelatorSpec& spec, const Propagator& propagator) {
  if (propagator.n_qubits() != gs.n_qubits()) throw std::invalid_argument("norm_chain: register mismatch");
  spec.validate(gs.n_qubits());
  NormChain chain{{}, gs, std::nullopt};
  double t_prev = 0.0;
  for (std::size_t j = 0; j < spec.size(); ++j) {
    const FermionOp& op = spec.ops[j];
    if (op.t != t_prev) chain.final_state = propagator.evolve(chain.final_state, op.t - t_prev);
    t_prev = op.t;
    RenormalizedApply r = renormalized_apply(chain.final_state, op.orbital, op.dagger);
    chain.norms.push_back(r.norm);
    if (r.zero()) {
      chain.aborted_at = j + 1;
      break;
    }
    chain.final_state = std::move(*r.state);
  }
  return chain;
}

NormChain norm_chain(const State& gs, const CorrelatorSpec& spec, const PauliSum& h) {
  return norm_chain(gs, spec, Propagator(h));
}

CorrelatorResult correlator_fast(const State& gs, const CorrelatorSpec& spec, const Propagator& propagator) {
  CorrelatorResult res;
  NormChain chain = norm_chain(gs, spec, propagator);
  res.norms = chain.norms;
  res.aborted_at = chain.aborted_at;
  const double t_m = spec.size() == 0 ? 0.0 : spec.ops.back().t;
  const State bra = propagator.evolve(gs, t_m);
  const double e = expectation(gs, propagator.hamiltonian()).real();
  res.phase_error = std::abs(gs.inner(bra) - std::exp(-I * e * t_m));
  if (res.aborted_at) return res;
  res.g_tilde = bra.inner(chain.final_state);
  res.value = res.g_tilde * product(res.norms);
  return res;
}

CorrelatorResult correlator_fast(const State& gs, const CorrelatorSpec& spec, const PauliSum& h) {
  return correlator_fast(gs, spec, Propagator(h));
}

ControlledOpCost controlled_op_cost(int orbital) { return {orbital, 1, 1}; }

std::vector<Gate> controlled_fermion(const FermionOp& op, int control, int projector) {
  const int a = op.orbital;
  const int keep = op.dagger ? 0 : 1;
  std::vector<Gate> out;
  for (int nu = 0; nu < a; ++nu)
    out.push_back(gates::controlled_pauli({{control, 1}, {a, keep}}, PauliString::single(nu, Pauli::Z)));
  out.push_back(gates::cnot(control, a));
  // after the flip the rejected component sits at q_a = keep
  out.push_back(gates::controlled_pauli({{control, 1}, {a, keep}}, PauliString::single(projector, Pauli::X)));
  out.push_back(gates::project(projector, 0));
  return out;
}

Circuit hadamard_circuit(const Circuit& gs_prep, const CorrelatorSpec& spec, const PauliSum& h, Part part,
                         bool prepare_control) {
  const int nq = gs_prep.n_qubits;
  if (h.n_qubits() != nq) throw std::invalid_argument("hadamard_circuit: register mismatch");
  spec.validate(nq);
  const int control = nq;
  const int projector = nq + 1;
  Circuit c{nq + 2, gs_prep.gates};
  if (prepare_control) c.add(gates::h(control));
  const auto prop = std::make_shared<const Propagator>(h);
  double t_prev = 0.0;
  for (const auto& op : spec.ops) {
    if (op.t != t_prev) c.add(gates::evolve(prop, op.t - t_prev));
    t_prev = op.t;
    for (Gate& g : controlled_fermion(op, control, projector)) c.add(std::move(g));
  }
  if (part == Part::imag) c.add(gates::sdg(control));
  if (prepare_control) c.add(gates::h(control));
  return c;
}

State embed(const State& psi, int extra) {
  if (extra < 0) throw std::invalid_argument("embed: negative extra");
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(psi.dim() << extra);
  amps.head(psi.dim()) = psi.amplitudes();
  return State(psi.n_qubits() + extra, std::move(amps));
}

namespace {

HadamardEstimate estimate_from(const State& out, int control, std::optional<std::uint64_t> shots, Rng* rng) {
  const Eigen::VectorXcd& amps = out.amplitudes();
  const Basis bit = Basis{1} << control;
  double p0u = 0.0, p1u = 0.0;
  for (Eigen::Index i = 0; i < amps.size(); ++i) (static_cast<Basis>(i) & bit ? p1u : p0u) += std::norm(amps[i]);

  HadamardEstimate est;
  est.survival = p0u + p1u;
  if (est.survival < 1e-12) throw std::runtime_error("hadamard_gate_level: survival probability below 1e-12");
  est.p0 = p0u / est.survival;
  est.p1 = p1u / est.survival;
  if (!shots) {
    est.estimate = p0u - p1u;
    return est;
  }
  if (*shots == 0) throw std::invalid_argument("hadamard_gate_level: shots must be positive");
  if (rng == nullptr) throw std::invalid_argument("hadamard_gate_level: shot mode needs an Rng");
  // each shot scores +1 (kept, 0), -1 (kept, 1) or 0 (discarded)
  std::int64_t score = 0;
  for (std::uint64_t s = 0; s < *shots; ++s) {
    const double u = rng->uniform();
    if (u < p0u) {
      ++score;
      ++est.kept;
    } else if (u < p0u + p1u) {
      --score;
      ++est.kept;
    }
  }
  est.shots = *shots;
  const auto n = static_cast<double>(*shots);
  est.estimate = static_cast<double>(score) / n;
  const double mean = p0u - p1u;
  est.std_error = std::sqrt(std::max(0.0, est.survival - mean * mean) / n);
  return est;
}

CorrelatorResult gate_level(const State& gs, const CorrelatorSpec& spec, const PauliSum& h,
                            const std::function<double(Part)>& part) {
  const NormChain chain = norm_chain(gs, spec, h);
  CorrelatorResult res;
  res.mode = CorrelatorMode::gate_level;
  res.norms = chain.norms;
  res.aborted_at = chain.aborted_at;
  if (res.aborted_at) return res;
  res.value = {part(Part::real), part(Part::imag)};
  res.g_tilde = res.value / product(res.norms);
  return res;
}

}  // namespace

HadamardEstimate hadamard_gate_level(const Circuit& gs_prep, const CorrelatorSpec& spec, const PauliSum& h, Part part,
                                     std::optional<std::uint64_t> shots, Rng* rng) {
  return estimate_from(run(hadamard_circuit(gs_prep, spec, h, part)).state, gs_prep.n_qubits, shots, rng);
}

HadamardEstimate hadamard_gate_level(const State& gs, const CorrelatorSpec& spec, const PauliSum& h, Part part,
                                     std::optional<std::uint64_t> shots, Rng* rng) {
  const Circuit c = hadamard_circuit(Circuit{gs.n_qubits(), {}}, spec, h, part);
  return estimate_from(run(c, embed(gs, 2)).state, gs.n_qubits(), shots, rng);
}

CorrelatorResult correlator_gate_level(const Circuit& gs_prep, const CorrelatorSpec& spec, const PauliSum& h) {
  return gate_level(run(gs_prep).state, spec, h,
                    [&](Part p) { return hadamard_gate_level(gs_prep, spec, h, p).estimate; });
}

CorrelatorResult correlator_gate_level(const State& gs, const CorrelatorSpec& spec, const PauliSum& h) {
  return gate_level(gs, spec, h, [&](Part p) { return hadamard_gate_level(gs, spec, h, p).estimate; });
}

GreenSeries greater_lesser_retarded(const State& gs, const PauliSum& h, int orbital, const std::vector<double>& times) {
  const Propagator prop(h);
  GreenSeries s;
  s.t = times;
  for (double t : times) {
    const CorrelatorSpec g{{{orbital, true, 0.0}, {orbital, false, t}}};
    const CorrelatorSpec l{{{orbital, false, t}, {orbital, true, 0.0}}};
    const std::complex<double> gt = -I * correlator_fast(gs, g, prop).value;
    const std::complex<double> lt = I * correlator_fast(gs, l, prop).value;
    s.greater.push_back(gt);
    s.lesser.push_back(lt);
    s.retarded.push_back(t >= 0.0 ? gt - lt : 0.0);
  }
  return s;
}

std::vector<double> time_grid(double t_max, double dt) {
  if (!(t_max > 0) || !(dt > 0)) throw std::invalid_argument("time_grid: need t_max > 0 and dt > 0");
  const auto n = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9)) + 1;
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = dt * static_cast<double>(i);
  return t;
}

std::vector<std::complex<double>> damped_fourier(const std::vector<double>& times,
                                                 const std::vector<std::complex<double>>& values,
                                                 const std::vector<double>& omega, double eta) {
  if (times.size() != values.size()) throw std::invalid_argument("damped_fourier: length mismatch");
  std::vector<std::complex<double>> out;
  out.reserve(omega.size());
  for (double w : omega) {
    std::complex<double> acc = 0.0;
    std::complex<double> prev = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const std::complex<double> f = std::exp(std::complex<double>{-eta * times[i], w * times[i]}) * values[i];
      if (i > 0) acc += 0.5 * (times[i] - times[i - 1]) * (f + prev);
      prev = f;
    }
    out.push_back(acc);
  }
  return out;
}

}  // namespace aim
