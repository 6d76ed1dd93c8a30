#include "aim/sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace aim {

namespace {

using Index = Eigen::Index;

Basis bit(int q) { return Basis{1} << q; }

void check_qubit(const State& s, int q) {
  if (q < 0 || q >= s.n_qubits()) throw std::out_of_range("gate operand out of range");
}

void apply_single(Eigen::VectorXcd& v, int q, const Eigen::Matrix2cd& m) {
  const Basis mask = bit(q);
  const Basis dim = static_cast<Basis>(v.size());
  for (Basis b = 0; b < dim; ++b) {
    if (b & mask) continue;
    const auto i0 = static_cast<Index>(b);
    const auto i1 = static_cast<Index>(b | mask);
    const cplx a0 = v[i0];
    const cplx a1 = v[i1];
    v[i0] = m(0, 0) * a0 + m(0, 1) * a1;
    v[i1] = m(1, 0) * a0 + m(1, 1) * a1;
  }
}

void apply_controlled_pauli(Eigen::VectorXcd& v, const std::vector<std::pair<int, int>>& controls,
                            const PauliString& p) {
  Basis cmask = 0;
  Basis cval = 0;
  for (const auto& [q, val] : controls) {
    cmask |= bit(q);
    if (val) cval |= bit(q);
  }
  if ((cmask & p.support()) != 0) throw std::invalid_argument("controlled Pauli: control overlaps target");
  const Basis dim = static_cast<Basis>(v.size());
  if (p.x == 0) {
    for (Basis b = 0; b < dim; ++b)
      if ((b & cmask) == cval) v[static_cast<Index>(b)] *= p.phase_on(b);
    return;
  }
  // Pair b with b ^ x, visiting each pair once from its smaller member.
  for (Basis b = 0; b < dim; ++b) {
    if ((b & cmask) != cval) continue;
    const Basis partner = b ^ p.x;
    if (partner < b) continue;
    const cplx a = v[static_cast<Index>(b)];
    const cplx c = v[static_cast<Index>(partner)];
    v[static_cast<Index>(partner)] = p.phase_on(b) * a;
    v[static_cast<Index>(b)] = p.phase_on(partner) * c;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Propagator

Propagator::Propagator(const PauliSum& h) : h_(h), n_qubits_(h.n_qubits()) {
  if (n_qubits_ > 16) throw std::invalid_argument("Propagator: more than 16 qubits");
  if (!h.is_hermitian()) throw std::invalid_argument("Propagator: Hamiltonian is not Hermitian");
  const Basis dim = bit(n_qubits_);
  std::vector<Basis> parent(dim);
  std::iota(parent.begin(), parent.end(), Basis{0});
  auto find = [&parent](Basis a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const auto& [s, c] : h.map()) {
    if (s.x == 0) continue;
    for (Basis b = 0; b < dim; ++b) {
      const Basis ra = find(b);
      const Basis rb = find(b ^ s.x);
      if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }
  }
  std::map<Basis, std::size_t> block_of_root;
  for (Basis b = 0; b < dim; ++b) {
    const Basis r = find(b);
    auto [it, inserted] = block_of_root.try_emplace(r, blocks_.size());
    if (inserted) blocks_.emplace_back();
    blocks_[it->second].basis.push_back(b);
  }
  for (auto& block : blocks_) {
    const Eigen::MatrixXcd m = h.matrix_in_basis(block.basis);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    if (solver.info() != Eigen::Success) throw std::runtime_error("Propagator: eigensolver failed");
    block.energies = solver.eigenvalues();
    block.vectors = solver.eigenvectors();
  }
}

void Propagator::apply(Eigen::VectorXcd& amps, double t) const {
  const Basis sys_dim = bit(n_qubits_);
  const Basis total = static_cast<Basis>(amps.size());
  if (total % sys_dim != 0 || total < sys_dim) throw std::invalid_argument("Propagator: register too small");
  for (Basis offset = 0; offset < total; offset += sys_dim) {
    for (const auto& block : blocks_) {
      const auto n = static_cast<Index>(block.basis.size());
      Eigen::VectorXcd local(n);
      for (Index i = 0; i < n; ++i) local[i] = amps[static_cast<Index>(offset + block.basis[static_cast<std::size_t>(i)])];
      if (local.squaredNorm() == 0.0) continue;
      Eigen::VectorXcd coeffs = block.vectors.adjoint() * local;
      for (Index k = 0; k < n; ++k) coeffs[k] *= std::exp(cplx{0.0, -block.energies[k] * t});
      local.noalias() = block.vectors * coeffs;
      for (Index i = 0; i < n; ++i) amps[static_cast<Index>(offset + block.basis[static_cast<std::size_t>(i)])] = local[i];
    }
  }
}

State Propagator::evolve(const State& state, double t) const {
  if (!std::isfinite(t)) throw std::invalid_argument("evolve: time must be finite");
  State out = state;
  if (t != 0.0) apply(out.amplitudes(), t);
  return out;
}

// ---------------------------------------------------------------------------
// Gates

std::string to_string(GateKind kind) {
  switch (kind) {
    case GateKind::X: return "X";
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::Sdg: return "Sdg";
    case GateKind::Rz: return "Rz";
    case GateKind::Givens: return "Givens";
    case GateKind::ZZ: return "ZZ";
    case GateKind::CNOT: return "CNOT";
    case GateKind::Toffoli: return "Toffoli";
    case GateKind::ControlledPauliString: return "ControlledPauliString";
    case GateKind::Project: return "Project";
    case GateKind::Measure: return "Measure";
    case GateKind::Evolve: return "Evolve";
  }
  return "?";
}

int Gate::span() const {
  int m = 0;
  for (int q : qubits) m = std::max(m, q + 1);
  for (const auto& [q, v] : controls) m = std::max(m, q + 1);
  if (pauli.support() != 0) m = std::max(m, 64 - std::countl_zero(pauli.support()));
  if (propagator) m = std::max(m, propagator->n_qubits());
  return m;
}

namespace gates {
namespace {
Gate make(GateKind kind, std::vector<int> qubits, double param = 0.0) {
  Gate g;
  g.kind = kind;
  g.qubits = std::move(qubits);
  g.param = param;
  return g;
}
}  // namespace

Gate x(int q) { return make(GateKind::X, {q}); }
Gate h(int q) { return make(GateKind::H, {q}); }
Gate s(int q) { return make(GateKind::S, {q}); }
Gate sdg(int q) { return make(GateKind::Sdg, {q}); }
Gate rz(int q, double phi) { return make(GateKind::Rz, {q}, phi); }
Gate givens(int a, int b, double theta) { return make(GateKind::Givens, {a, b}, theta); }
Gate zz(int a, int b, double theta) { return make(GateKind::ZZ, {a, b}, theta); }
Gate cnot(int control, int target) { return make(GateKind::CNOT, {control, target}); }
Gate toffoli(int c1, int c2, int target) { return make(GateKind::Toffoli, {c1, c2, target}); }
Gate controlled_pauli(std::vector<std::pair<int, int>> controls, PauliString pauli) {
  Gate g = make(GateKind::ControlledPauliString, {});
  g.controls = std::move(controls);
  g.pauli = pauli;
  return g;
}
Gate project(int q, int outcome) {
  Gate g = make(GateKind::Project, {q});
  g.outcome = outcome;
  return g;
}
Gate measure(int q) { return make(GateKind::Measure, {q}); }
Gate evolve(std::shared_ptr<const Propagator> propagator, double t) {
  Gate g = make(GateKind::Evolve, {}, t);
  g.propagator = std::move(propagator);
  return g;
}
}  // namespace gates

Gate inverse(const Gate& gate) {
  Gate g = gate;
  switch (gate.kind) {
    case GateKind::X:
    case GateKind::H:
    case GateKind::CNOT:
    case GateKind::Toffoli:
    case GateKind::ControlledPauliString:
      return g;
    case GateKind::S: g.kind = GateKind::Sdg; return g;
    case GateKind::Sdg: g.kind = GateKind::S; return g;
    case GateKind::Rz:
    case GateKind::Givens:
    case GateKind::ZZ:
    case GateKind::Evolve:
      g.param = -gate.param;
      return g;
    case GateKind::Project:
    case GateKind::Measure:
      break;
  }
  throw std::invalid_argument("inverse: non-unitary gate");
}

Circuit& Circuit::add(Gate g) {
  gates.push_back(std::move(g));
  return *this;
}

Circuit& Circuit::append(const Circuit& other) {
  gates.insert(gates.end(), other.gates.begin(), other.gates.end());
  n_qubits = std::max(n_qubits, other.n_qubits);
  return *this;
}

void Circuit::validate() const {
  for (const auto& g : gates) {
    if (g.span() > n_qubits) throw std::out_of_range("Circuit: gate operand out of range");
    for (int q : g.qubits)
      if (q < 0) throw std::out_of_range("Circuit: negative qubit index");
  }
}

void apply_in_place(State& state, const Gate& gate) {
  auto& v = state.amplitudes();
  for (int q : gate.qubits) check_qubit(state, q);
  for (const auto& [q, val] : gate.controls) check_qubit(state, q);
  if (gate.span() > state.n_qubits()) throw std::out_of_range("gate operand out of range");

  switch (gate.kind) {
    case GateKind::X:
      apply_controlled_pauli(v, {}, PauliString::single(gate.qubits[0], Pauli::X));
      return;
    case GateKind::H: {
      const double r = 1.0 / std::numbers::sqrt2;
      Eigen::Matrix2cd m;
      m << r, r, r, -r;
      apply_single(v, gate.qubits[0], m);
      return;
    }
    case GateKind::S:
    case GateKind::Sdg: {
      const cplx phase = gate.kind == GateKind::S ? cplx{0.0, 1.0} : cplx{0.0, -1.0};
      const Basis mask = bit(gate.qubits[0]);
      for (Index b = 0; b < v.size(); ++b)
        if (static_cast<Basis>(b) & mask) v[b] *= phase;
      return;
    }
    case GateKind::Rz: {
      const cplx lo = std::exp(cplx{0.0, -gate.param / 2});
      const cplx hi = std::exp(cplx{0.0, gate.param / 2});
      const Basis mask = bit(gate.qubits[0]);
      for (Index b = 0; b < v.size(); ++b) v[b] *= (static_cast<Basis>(b) & mask) ? hi : lo;
      return;
    }
    case GateKind::Givens: {
      const int a = gate.qubits[0];
      const int b = gate.qubits[1];
      if (a == b) throw std::invalid_argument("Givens: operands must differ");
      const double c = std::cos(gate.param);
      const double s = std::sin(gate.param);
      const Basis ma = bit(a);
      const Basis mb = bit(b);
      for (Basis idx = 0; idx < static_cast<Basis>(v.size()); ++idx) {
        // idx has qubit a = 0, qubit b = 1
        if ((idx & ma) || !(idx & mb)) continue;
        const auto i01 = static_cast<Index>(idx);
        const auto i10 = static_cast<Index>(idx ^ ma ^ mb);
        const cplx v01 = v[i01];
        const cplx v10 = v[i10];
        v[i01] = c * v01 - s * v10;
        v[i10] = s * v01 + c * v10;
      }
      return;
    }
    case GateKind::ZZ: {
      const Basis ma = bit(gate.qubits[0]);
      const Basis mb = bit(gate.qubits[1]);
      if (ma == mb) throw std::invalid_argument("ZZ: operands must differ");
      const cplx same = std::exp(cplx{0.0, -gate.param / 2});
      const cplx diff = std::exp(cplx{0.0, gate.param / 2});
      for (Index b = 0; b < v.size(); ++b) {
        const bool pa = static_cast<Basis>(b) & ma;
        const bool pb = static_cast<Basis>(b) & mb;
        v[b] *= (pa == pb) ? same : diff;
      }
      return;
    }
    case GateKind::CNOT:
      apply_controlled_pauli(v, {{gate.qubits[0], 1}}, PauliString::single(gate.qubits[1], Pauli::X));
      return;
    case GateKind::Toffoli:
      apply_controlled_pauli(v, {{gate.qubits[0], 1}, {gate.qubits[1], 1}},
                             PauliString::single(gate.qubits[2], Pauli::X));
      return;
    case GateKind::ControlledPauliString:
      apply_controlled_pauli(v, gate.controls, gate.pauli);
      return;
    case GateKind::Project: {
      const Basis mask = bit(gate.qubits[0]);
      for (Index b = 0; b < v.size(); ++b) {
        const int val = (static_cast<Basis>(b) & mask) ? 1 : 0;
        if (val != gate.outcome) v[b] = 0.0;
      }
      return;
    }
    case GateKind::Measure:
      throw std::invalid_argument("Measure requires a random stream; use run()");
    case GateKind::Evolve:
      if (!gate.propagator) throw std::invalid_argument("Evolve gate without propagator");
      gate.propagator->apply(v, gate.param);
      return;
  }
}

State apply(State state, const Gate& gate) {
  apply_in_place(state, gate);
  return state;
}

RunResult run(const Circuit& circuit, State initial, Rng* rng) {
  circuit.validate();
  if (initial.n_qubits() != circuit.n_qubits) throw std::invalid_argument("run: register size mismatch");
  RunResult result{std::move(initial), {}};
  for (const auto& g : circuit.gates) {
    if (g.kind != GateKind::Measure) {
      apply_in_place(result.state, g);
      continue;
    }
    if (rng == nullptr) throw std::invalid_argument("run: Measure gate needs a random stream");
    // Sample conditionally on the current branch and keep the branch weight.
    const double weight = result.state.norm();
    if (weight == 0.0) throw std::domain_error("run: measuring an annihilated branch");
    State normalized = result.state;
    normalized.normalize();
    auto m = measure_qubit(normalized, g.qubits[0], *rng);
    m.state.amplitudes() *= weight;
    result.state = std::move(m.state);
    result.outcomes.push_back(m.outcome);
  }
  return result;
}

RunResult run(const Circuit& circuit, Rng* rng) { return run(circuit, State(circuit.n_qubits), rng); }

double probability_of_one(const State& state, int q) {
  check_qubit(state, q);
  const Basis mask = bit(q);
  double p = 0.0;
  for (Index b = 0; b < state.dim(); ++b)
    if (static_cast<Basis>(b) & mask) p += std::norm(state[b]);
  return p;
}

MeasureResult measure_qubit(const State& state, int q, Rng& rng) {
  const double total = state.amplitudes().squaredNorm();
  const double p1 = probability_of_one(state, q) / total;
  const double p0 = 1.0 - p1;
  if (p1 < 1e-14 && p0 < 1e-14) throw std::domain_error("measure_qubit: corrupt state");
  const int outcome = rng.uniform() < p1 ? 1 : 0;
  Branch br = project(state, q, outcome);
  if (br.zero()) throw std::domain_error("measure_qubit: sampled a vanishing branch");
  return {outcome, std::move(*br.state), outcome == 1 ? p1 : p0};
}

Branch project(const State& state, int q, int outcome) {
  State out = apply(state, gates::project(q, outcome));
  const double n = out.norm();
  if (n < kZeroBranchNorm) return {std::nullopt, n};
  out.amplitudes() /= n;
  return {std::move(out), n};
}

std::complex<double> expectation(const State& state, const PauliSum& obs) {
  if (obs.n_qubits() != state.n_qubits()) throw std::invalid_argument("expectation: qubit-count mismatch");
  return obs.expectation(state.amplitudes());
}

State evolve(const State& state, const PauliSum& h, double t) {
  if (h.n_qubits() > state.n_qubits()) throw std::invalid_argument("evolve: Hamiltonian larger than register");
  if (t == 0.0) return state;
  return Propagator(h).evolve(state, t);
}

std::map<Basis, std::uint64_t> sample(const State& state, std::uint64_t shots, Rng& rng) {
  std::vector<double> cdf(static_cast<std::size_t>(state.dim()));
  double acc = 0.0;
  for (Index b = 0; b < state.dim(); ++b) {
    acc += std::norm(state[b]);
    cdf[static_cast<std::size_t>(b)] = acc;
  }
  std::map<Basis, std::uint64_t> counts;
  for (std::uint64_t i = 0; i < shots; ++i) {
    const double u = rng.uniform() * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    // Skip zero-probability entries that share the same cumulative value.
    ++counts[static_cast<Basis>(it - cdf.begin())];
  }
  return counts;
}

std::vector<Gate> compile_gate(const Gate& gate) {
  using std::numbers::pi;
  if (gate.kind == GateKind::ZZ) {
    const int a = gate.qubits[0];
    const int b = gate.qubits[1];
    return {gates::cnot(a, b), gates::rz(b, gate.param), gates::cnot(a, b)};
  }
  if (gate.kind == GateKind::Givens) {
    // Givens(t) = exp(i t (X_a Y_b - Y_a X_b) / 2). Conjugating by S_b maps the
    // generator to -(XX + YY)/2, Rx(pi/2) on both qubits maps YY to ZZ, and
    // exp(-i t (XX + ZZ)/2) = CNOT (Rx_a(t) Rz_b(t)) CNOT. Rx = H Rz H.
    const int a = gate.qubits[0];
    const int b = gate.qubits[1];
    const double t = gate.param;
    auto rx = [](int q, double phi, std::vector<Gate>& out) {
      out.push_back(gates::h(q));
      out.push_back(gates::rz(q, phi));
      out.push_back(gates::h(q));
    };
    std::vector<Gate> out;
    out.push_back(gates::rz(b, pi / 2));
    rx(a, pi / 2, out);
    rx(b, pi / 2, out);
    out.push_back(gates::cnot(a, b));
    rx(a, t, out);
    out.push_back(gates::rz(b, t));
    out.push_back(gates::cnot(a, b));
    rx(a, -pi / 2, out);
    rx(b, -pi / 2, out);
    out.push_back(gates::rz(b, -pi / 2));
    return out;
  }
  throw std::invalid_argument("compile_gate: only Givens and ZZ are compiled");
}

Eigen::MatrixXcd unitary(const Circuit& circuit) {
  const Index dim = Index{1} << circuit.n_qubits;
  Eigen::MatrixXcd u(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    State s = State::basis(circuit.n_qubits, static_cast<Basis>(j));
    for (const auto& g : circuit.gates) {
      if (!g.is_unitary()) throw std::invalid_argument("unitary: circuit has non-unitary gates");
      apply_in_place(s, g);
    }
    u.col(j) = s.amplitudes();
  }
  return u;
}

}  // namespace aim
