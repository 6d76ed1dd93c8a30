#include "aim/measure.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>

namespace aim {

namespace {

double parity(Basis b, Basis mask) { return (std::popcount(b & mask) & 1) ? -1.0 : 1.0; }

double term_value(const MeasTerm& t, Basis b) {
  double v = t.coeff * parity(b, t.z_mask);
  if (t.hopping) {
    const double zm = (b >> t.pair.a) & 1 ? -1.0 : 1.0;
    const double zn = (b >> t.pair.b) & 1 ? -1.0 : 1.0;
    v *= (zm - zn) / 2;
  }
  return v;
}

Basis between_mask(int mu, int nu) {
  Basis m = 0;
  for (int r = mu + 1; r < nu; ++r) m |= Basis{1} << r;
  return m;
}

std::string diagonal_label(Basis z) {
  std::string s;
  for (int q = 0; q < 64; ++q) {
    if (!((z >> q) & 1)) continue;
    if (!s.empty()) s += ' ';
    s += "Z" + std::to_string(q);
  }
  return s;
}

/// Proper edge coloring of K_n by the circle method: n colors for odd n,
/// n - 1 for even n.
int circle_color(int i, int j, int n) {
  if (n % 2 == 1) return (i + j) % n;
  const int m = n - 1;
  if (j == m) return (2 * i) % m;
  if (i == m) return (2 * j) % m;
  return (i + j) % m;
}

bool register_ok(Basis b, int ns, const Sector& s) {
  const Basis up_mask = (Basis{1} << ns) - 1;
  return std::popcount(b & up_mask) == s.n_up() && std::popcount(b & ~up_mask) == s.n_down();
}

}  // namespace

Circuit MeasPlan::rotation(int circuit) const {
  Circuit c;
  c.n_qubits = n_qubits;
  for (const auto& e : circuits.at(static_cast<std::size_t>(circuit)).rotated_pairs)
    c.add(gates::givens(e.a, e.b, -std::numbers::pi / 4));
  return c;
}

std::size_t unparallelized_circuit_count(int n_imp, int n_bath) {
  return static_cast<std::size_t>(1 + 2 * n_imp * n_bath + n_imp * (n_imp - 1));
}

MeasPlan plan_measurements(const AimParams& params, bool parallel) {
  const PauliSum h = build_hamiltonian(params);
  const int nq = params.n_qubits();
  const int ns = params.n_sites();
  MeasPlan plan;
  plan.n_qubits = nq;
  plan.constant = h.constant().real();
  plan.circuits.emplace_back();

  std::set<PauliString> covered;
  covered.insert(PauliString{});
  for (const auto& [s, c] : h.map()) {
    if (s.is_identity() || !s.is_diagonal()) continue;
    plan.circuits[0].terms.push_back(static_cast<int>(plan.terms.size()));
    plan.terms.push_back({diagonal_label(s.z), c.real(), 0, false, {}, s.z});
    covered.insert(s);
  }

  // Site pairs with their color; each expands to its two spin copies.
  struct Group {
    int color;
    int site_a;
    int site_b;
  };
  std::vector<Group> groups;
  const int nb_colors = std::max(params.n_imp, params.n_bath);
  const int ii_colors = params.n_imp % 2 == 1 ? params.n_imp : params.n_imp - 1;
  for (int i = 0; i < params.n_imp; ++i)
    for (int j = i + 1; j < params.n_imp; ++j) groups.push_back({circle_color(i, j, params.n_imp), i, j});
  for (int i = 0; i < params.n_imp; ++i)
    for (int b = 0; b < params.n_bath; ++b) groups.push_back({ii_colors + (i + b) % nb_colors, i, params.n_imp + b});

  std::map<int, std::vector<Edge>> by_color;
  std::vector<std::vector<Edge>> layers;
  for (const auto& g : groups) {
    for (int spin = 0; spin < 2; ++spin) {
      const Edge e{spin * ns + g.site_a, spin * ns + g.site_b};
      if (parallel) by_color[g.color].push_back(e);
      else layers.push_back({e});
    }
  }

  // A layer is usable when no rotated pair's Z-string touches another rotated
  // pair; otherwise it is split greedily.
  auto compatible = [](const std::vector<Edge>& layer, const Edge& e) {
    const Basis e_qubits = (Basis{1} << e.a) | (Basis{1} << e.b);
    for (const auto& f : layer) {
      const Basis f_qubits = (Basis{1} << f.a) | (Basis{1} << f.b);
      if (e_qubits & f_qubits) return false;
      if (between_mask(e.a, e.b) & f_qubits) return false;
      if (between_mask(f.a, f.b) & e_qubits) return false;
    }
    return true;
  };
  for (auto& [color, edges] : by_color) {
    std::vector<std::vector<Edge>> split;
    for (const auto& e : edges) {
      bool placed = false;
      for (auto& l : split) {
        if (compatible(l, e)) {
          l.push_back(e);
          placed = true;
          break;
        }
      }
      if (!placed) split.push_back({e});
    }
    for (auto& l : split) layers.push_back(std::move(l));
  }

  for (const auto& layer : layers) {
    const int ci = static_cast<int>(plan.circuits.size());
    MeasCircuit circuit;
    circuit.rotated_pairs = layer;
    for (const auto& e : layer) {
      const Basis pair_x = (Basis{1} << e.a) | (Basis{1} << e.b);
      const Basis zs = between_mask(e.a, e.b);
      const PauliString xx{pair_x, zs};
      const PauliString yy{pair_x, zs | pair_x};
      const cplx cx = h.coefficient(xx);
      const cplx cy = h.coefficient(yy);
      if (std::abs(cx - cy) > 1e-12 || std::abs(cx.imag()) > 1e-12)
        throw std::logic_error("plan_measurements: hopping term is not of the XX + YY form");
      covered.insert(xx);
      covered.insert(yy);
      circuit.terms.push_back(static_cast<int>(plan.terms.size()));
      plan.terms.push_back({"hop(" + std::to_string(e.a) + "," + std::to_string(e.b) + ")", 2.0 * cx.real(), ci, true,
                            e, zs});
    }
    plan.circuits.push_back(std::move(circuit));
  }

  for (const auto& [s, c] : h.map())
    if (!covered.count(s)) throw std::logic_error("plan_measurements: term not covered by any circuit");
  return plan;
}

PauliSum rotated_operator(int mu, int nu, int n_qubits) {
  if (!(0 <= mu && mu < nu && nu < n_qubits)) throw std::invalid_argument("rotated_operator: need mu < nu in range");
  const Basis all = (n_qubits == 64) ? ~Basis{0} : (Basis{1} << n_qubits) - 1;
  const Basis pair = (Basis{1} << mu) | (Basis{1} << nu);
  const Basis rest = all & ~pair;
  PauliSum out(n_qubits);
  out += PauliSum::from_string(n_qubits, {pair, rest}, 0.5);
  out += PauliSum::from_string(n_qubits, {pair, rest | pair}, 0.5);
  return out;
}

EnergyEstimate estimate_energy(const State& state, const MeasPlan& plan, const EstimateOptions& options, Rng& rng) {
  if (state.n_qubits() != plan.n_qubits) throw std::invalid_argument("estimate_energy: register mismatch");
  if (options.post_select && !options.sector) throw std::invalid_argument("estimate_energy: post-selection needs a sector");
  const int ns = plan.n_qubits / 2;

  EnergyEstimate out;
  out.energy = plan.constant;
  out.terms.resize(plan.terms.size());
  double kept_total = 0.0;

  for (std::size_t ci = 0; ci < plan.circuits.size(); ++ci) {
    const auto& circuit = plan.circuits[ci];
    const State rotated = run(plan.rotation(static_cast<int>(ci)), state).state;

    // Weighted outcome list: (bitstring, weight); weights are probabilities in
    // exact mode and counts otherwise.
    std::vector<std::pair<Basis, double>> outcomes;
    if (options.shots == 0) {
      for (Eigen::Index b = 0; b < rotated.dim(); ++b) {
        const double p = std::norm(rotated[b]);
        if (p > 0.0) outcomes.emplace_back(static_cast<Basis>(b), p);
      }
    } else {
      Rng local = Rng::stream(rng.bits(), ci);
      for (const auto& [b, n] : sample(rotated, options.shots, local)) outcomes.emplace_back(b, static_cast<double>(n));
    }

    double total = 0.0;
    double kept = 0.0;
    for (const auto& [b, w] : outcomes) {
      total += w;
      if (!options.post_select || register_ok(b, ns, *options.sector)) kept += w;
    }
    if (kept <= 0.0) throw std::runtime_error("estimate_energy: post-selection discarded every shot");
    const double fraction = kept / total;
    kept_total += fraction;

    // Means and second moments of each term and of the circuit's per-shot sum.
    std::vector<double> mean(circuit.terms.size(), 0.0), second(circuit.terms.size(), 0.0);
    double sum_mean = 0.0, sum_second = 0.0;
    for (const auto& [b, w] : outcomes) {
      if (options.post_select && !register_ok(b, ns, *options.sector)) continue;
      const double p = w / kept;
      double shot_sum = 0.0;
      for (std::size_t k = 0; k < circuit.terms.size(); ++k) {
        const double v = term_value(plan.terms[static_cast<std::size_t>(circuit.terms[k])], b);
        mean[k] += p * v;
        second[k] += p * v * v;
        shot_sum += v;
      }
      sum_mean += p * shot_sum;
      sum_second += p * shot_sum * shot_sum;
    }
    const double shot_var = std::max(0.0, sum_second - sum_mean * sum_mean);
    out.per_shot_variance += shot_var;
    if (options.shots > 0) out.variance += shot_var / kept;
    for (std::size_t k = 0; k < circuit.terms.size(); ++k) {
      const auto idx = static_cast<std::size_t>(circuit.terms[k]);
      const MeasTerm& t = plan.terms[idx];
      TermEstimate& te = out.terms[idx];
      te.label = t.label;
      te.coeff = t.coeff;
      te.estimate = mean[k];
      te.variance = options.shots > 0 ? std::max(0.0, second[k] - mean[k] * mean[k]) / kept : 0.0;
      te.kept_fraction = fraction;
      out.energy += mean[k];
    }
  }
  out.kept_fraction = kept_total / static_cast<double>(plan.circuits.size());
  return out;
}

EnergyEstimate estimate_energy(const Circuit& prep, const MeasPlan& plan, const EstimateOptions& options, Rng& rng) {
  return estimate_energy(run(prep).state, plan, options, rng);
}

}  // namespace aim
