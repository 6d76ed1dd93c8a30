#include "aim/ansatz.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace aim {

namespace {

Edge make_edge(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

/// Multiplies by the anti-Hermitian generator A of a gate with U = exp(theta A).
void apply_generator(State& s, const Gate& g) {
  auto& v = s.amplitudes();
  const cplx minus_half_i{0.0, -0.5};
  switch (g.kind) {
    case GateKind::Rz: {
      const Basis m = Basis{1} << g.qubits[0];
      for (Eigen::Index b = 0; b < v.size(); ++b) v[b] *= (static_cast<Basis>(b) & m) ? -minus_half_i : minus_half_i;
      return;
    }
    case GateKind::ZZ: {
      const Basis ma = Basis{1} << g.qubits[0];
      const Basis mb = Basis{1} << g.qubits[1];
      for (Eigen::Index b = 0; b < v.size(); ++b) {
        const bool same = static_cast<bool>(static_cast<Basis>(b) & ma) == static_cast<bool>(static_cast<Basis>(b) & mb);
        v[b] *= same ? minus_half_i : -minus_half_i;
      }
      return;
    }
    case GateKind::Givens: {
      const Basis ma = Basis{1} << g.qubits[0];
      const Basis mb = Basis{1} << g.qubits[1];
      for (Basis idx = 0; idx < static_cast<Basis>(v.size()); ++idx) {
        if (!(idx & ma) && !(idx & mb)) v[static_cast<Eigen::Index>(idx)] = 0.0;
        if ((idx & ma) && (idx & mb)) v[static_cast<Eigen::Index>(idx)] = 0.0;
      }
      for (Basis idx = 0; idx < static_cast<Basis>(v.size()); ++idx) {
        if ((idx & ma) || !(idx & mb)) continue;
        const auto i01 = static_cast<Eigen::Index>(idx);
        const auto i10 = static_cast<Eigen::Index>(idx ^ ma ^ mb);
        const cplx v01 = v[i01];
        v[i01] = -v[i10];
        v[i10] = v01;
      }
      return;
    }
    default:
      throw std::invalid_argument("apply_generator: gate is not parameterized");
  }
}

}  // namespace

std::string to_string(Connectivity mode) { return mode == Connectivity::square_nn ? "square_nn" : "square_nnn"; }

Connectivity connectivity_from_string(const std::string& name) {
  if (name == "square_nn") return Connectivity::square_nn;
  if (name == "square_nnn") return Connectivity::square_nnn;
  throw std::invalid_argument("unknown connectivity '" + name + "'");
}

Connectivity default_connectivity(int n_imp, int n_bath) {
  return (n_imp == 1 && n_bath <= 3) ? Connectivity::square_nn : Connectivity::square_nnn;
}

void Topology::validate() const {
  const int ns = n_sites();
  auto spin_of = [ns](int q) { return q < ns ? 0 : 1; };
  std::set<Edge> seen;
  for (const auto& e : givens) {
    if (e.a >= e.b || e.b >= n_qubits()) throw std::logic_error("Topology: malformed Givens edge");
    if (spin_of(e.a) != spin_of(e.b)) throw std::logic_error("Topology: Givens edge joins opposite spins");
    if (!seen.insert(e).second) throw std::logic_error("Topology: duplicate edge");
  }
  for (const auto& e : zz) {
    if (e.a >= e.b || e.b >= n_qubits()) throw std::logic_error("Topology: malformed ZZ edge");
    if (spin_of(e.a) == spin_of(e.b)) throw std::logic_error("Topology: ZZ edge within one register");
    if (!seen.insert(e).second) throw std::logic_error("Topology: duplicate edge");
  }
}

Topology build_topology(int n_imp, int n_bath, Connectivity mode) {
  if (n_imp < 1 || n_bath < 0) throw std::invalid_argument("build_topology: bad site counts");
  if (mode == Connectivity::square_nn && (n_imp != 1 || n_bath > 3))
    throw std::invalid_argument("build_topology: square_nn supports one impurity and up to three baths");
  if (mode == Connectivity::square_nnn && (n_imp > 2 || n_bath > 6))
    throw std::invalid_argument("build_topology: square_nnn supports up to two impurities and six baths");
  if (2 * (n_imp + n_bath) > kMaxEdQubits) throw std::invalid_argument("build_topology: more than 16 qubits");

  Topology t;
  t.n_imp = n_imp;
  t.n_bath = n_bath;
  t.mode = mode;
  const int ns = t.n_sites();
  for (int spin = 0; spin < 2; ++spin)
    for (int s = 0; s < ns; ++s) t.nodes.push_back({spin * ns + s, s, spin, s < n_imp});

  for (int spin = 0; spin < 2; ++spin) {
    const int off = spin * ns;
    for (int i = 0; i < n_imp; ++i) {
      for (int j = i + 1; j < n_imp; ++j) t.givens.push_back(make_edge(off + i, off + j));
      for (int b = 0; b < n_bath; ++b) t.givens.push_back(make_edge(off + i, off + n_imp + b));
    }
  }
  for (int s = 0; s < ns; ++s) t.zz.push_back(make_edge(s, ns + s));
  std::sort(t.givens.begin(), t.givens.end());
  std::sort(t.zz.begin(), t.zz.end());
  t.validate();
  return t;
}

std::vector<int> excitation_positions(int k, int register_size) {
  if (k < 0 || k > register_size) throw std::invalid_argument("excitation count exceeds register");
  std::vector<int> pos;
  for (int i = 0; i < k; ++i) pos.push_back(((2 * i + 1) * register_size) / (2 * k));
  return pos;
}

Excitations initial_excitations(const Sector& sector, int register_size) {
  sector.validate(2 * register_size);
  return {excitation_positions(sector.n_up(), register_size), excitation_positions(sector.n_down(), register_size)};
}

SpaCircuit build_spa(const Topology& topology, int depth, const Sector& sector) {
  if (depth < 1) throw std::invalid_argument("build_spa: depth must be at least 1");
  return {topology, depth, sector, initial_excitations(sector, topology.n_sites())};
}

Circuit bind(const SpaCircuit& spa, const Eigen::VectorXd& theta) {
  if (theta.size() != spa.n_params())
    throw std::invalid_argument("bind: expected " + std::to_string(spa.n_params()) + " parameters, got " +
                                std::to_string(theta.size()));
  const int ns = spa.topology.n_sites();
  Circuit c;
  c.n_qubits = spa.n_qubits();
  for (int p : spa.excitations.up) c.add(gates::x(p));
  for (int p : spa.excitations.down) c.add(gates::x(ns + p));
  int k = 0;
  for (int layer = 0; layer < spa.depth; ++layer) {
    for (const auto& e : spa.topology.givens) {
      Gate g = gates::givens(e.a, e.b, theta[k]);
      g.param_index = k++;
      c.add(std::move(g));
    }
    for (const auto& e : spa.topology.zz) {
      Gate g = gates::zz(e.a, e.b, theta[k]);
      g.param_index = k++;
      c.add(std::move(g));
    }
    for (int q = 0; q < c.n_qubits; ++q) {
      Gate g = gates::rz(q, theta[k]);
      g.param_index = k++;
      c.add(std::move(g));
    }
  }
  return c;
}

State prepare(const SpaCircuit& spa, const Eigen::VectorXd& theta) { return run(bind(spa, theta)).state; }

CostGradient adjoint_gradient(const Circuit& circuit, int n_params, const StateCost& cost) {
  CostGradient out;
  out.state = run(circuit).state;
  Eigen::VectorXcd g;
  out.value = cost(out.state, g);
  out.gradient = Eigen::VectorXd::Zero(n_params);

  State phi = out.state;
  State lambda(circuit.n_qubits, std::move(g));
  State scratch;
  for (auto it = circuit.gates.rbegin(); it != circuit.gates.rend(); ++it) {
    if (it->param_index >= 0) {
      if (it->param_index >= n_params) throw std::out_of_range("adjoint_gradient: parameter index out of range");
      scratch = phi;
      apply_generator(scratch, *it);
      out.gradient[it->param_index] += 2.0 * lambda.inner(scratch).real();
    }
    const Gate inv = inverse(*it);
    apply_in_place(phi, inv);
    apply_in_place(lambda, inv);
  }
  return out;
}

}  // namespace aim
