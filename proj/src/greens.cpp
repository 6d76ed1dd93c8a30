#include "aim/greens.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Sparse>

#include "aim/sim.hpp"

namespace aim {

namespace {

using SparseH = Eigen::SparseMatrix<cplx>;

SparseH shifted_sparse(const PauliSum& h, double e) {
  return (h - PauliSum::identity(h.n_qubits(), e)).to_sparse();
}

}  // namespace

std::string to_string(Termination t) {
  switch (t) {
    case Termination::b_tolerance: return "b_tolerance";
    case Termination::max_dim: return "max_dim";
    case Termination::max_iter: return "max_iter";
  }
  return "?";
}

Eigen::MatrixXd LanczosChain::tridiagonal() const {
  const auto n = static_cast<Eigen::Index>(a.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    t(i, i) = a[static_cast<std::size_t>(i)];
    if (i > 0) t(i, i - 1) = t(i - 1, i) = b[static_cast<std::size_t>(i)];
  }
  return t;
}

LanczosChain classical_lanczos(const PauliSum& h_tilde, const State& phi, std::size_t max_n, double b_tol) {
  if (h_tilde.n_qubits() != phi.n_qubits()) throw std::invalid_argument("classical_lanczos: register mismatch");
  if (!phi.is_normalized()) throw std::invalid_argument("classical_lanczos: start vector not normalized");
  const SparseH h = h_tilde.to_sparse();
  if (max_n == 0) max_n = static_cast<std::size_t>(phi.dim());

  LanczosChain chain;
  std::vector<Eigen::VectorXcd> basis{phi.amplitudes()};
  Eigen::VectorXcd hv = h * basis[0];
  chain.a.push_back(basis[0].dot(hv).real());
  chain.b.push_back(0.0);

  while (true) {
    if (chain.a.size() >= max_n) {
      chain.termination = Termination::max_dim;
      break;
    }
    const std::size_t n = chain.a.size();
    const Eigen::VectorXcd& prev = basis[n - 1];
    const double a_prev = chain.a[n - 1];
    const double b_prev = chain.b[n - 1];
    const double b2_closed = hv.squaredNorm() - a_prev * a_prev - b_prev * b_prev;
    if (b2_closed < -1e-10 * std::max(1.0, hv.squaredNorm()))
      throw std::runtime_error("classical_lanczos: negative b^2, numerical breakdown");

    Eigen::VectorXcd w = hv - a_prev * prev;
    if (n >= 2) w -= b_prev * basis[n - 2];
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& v : basis) w -= v.dot(w) * v;
    const double b = w.norm();
    if (b < b_tol) {
      chain.termination = Termination::b_tolerance;
      break;
    }
    basis.push_back(w / b);
    hv = h * basis.back();
    chain.a.push_back(basis.back().dot(hv).real());
    chain.b.push_back(b);
  }
  return chain;
}

std::complex<double> continued_fraction(const LanczosChain& chain, std::complex<double> z) {
  if (chain.a.empty() || chain.a.size() != chain.b.size()) throw std::invalid_argument("continued_fraction: bad chain");
  const std::size_t n = chain.a.size();
  cplx f = z - chain.a[n - 1];
  for (std::size_t k = n - 1; k-- > 0;) {
    if (std::abs(f) < 1e-300) throw std::domain_error("continued_fraction: pole hit");
    f = z - chain.a[k] - chain.b[k + 1] * chain.b[k + 1] / f;
  }
  if (std::abs(f) < 1e-300) throw std::domain_error("continued_fraction: pole hit");
  return 1.0 / f;
}

KrylovStart initial_krylov(const State& gs, int orbital, GfBranch branch) {
  if (orbital < 0 || orbital >= gs.n_qubits()) throw std::out_of_range("initial_krylov: orbital out of range");
  const double z = probability_of_one(gs, orbital);
  // <Z> = 1 - 2 p1, so (1 + <Z>)/2 = 1 - p1
  KrylovStart out;
  out.norm_sq = branch == GfBranch::particle ? 1.0 - z : z;
  const auto proj = project(gs, orbital, branch == GfBranch::particle ? 0 : 1);
  if (proj.zero()) {
    out.norm_sq = 0.0;
    return out;
  }
  PauliString f = PauliString::single(orbital, Pauli::X);
  for (int nu = 0; nu < orbital; ++nu) f.z |= Basis{1} << nu;
  out.state = apply(*proj.state, gates::controlled_pauli({}, f));
  return out;
}

Sector shifted_sector(const Sector& gs_sector, int orbital, int n_qubits, GfBranch branch) {
  const int sign = branch == GfBranch::particle ? 1 : -1;
  const int spin = orbital < n_qubits / 2 ? 1 : -1;
  const Sector s{gs_sector.n_total + sign, gs_sector.s_z + sign * spin};
  s.validate(n_qubits);
  return s;
}

std::vector<double> frequency_grid(double lo, double hi, double step) {
  if (!(hi > lo) || !(step > 0)) throw std::invalid_argument("frequency_grid: need lo < hi and step > 0");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = lo + step * static_cast<double>(i);
  return w;
}

GfSamples assemble_gf(const LanczosChain& plus, double norm_plus, const LanczosChain& minus, double norm_minus,
                      const std::vector<double>& omega, double eta, std::string provenance) {
  GfSamples g;
  g.omega = omega;
  g.eta = eta;
  g.norm_plus = norm_plus;
  g.norm_minus = norm_minus;
  g.chain_plus = plus;
  g.chain_minus = minus;
  g.provenance = std::move(provenance);
  g.values.reserve(omega.size());
  for (double w : omega) {
    const cplx z{w, eta};
    cplx v = 0.0;
    if (norm_plus > 0.0 && !plus.a.empty()) v += norm_plus * continued_fraction(plus, z);
    if (norm_minus > 0.0 && !minus.a.empty()) v -= norm_minus * continued_fraction(minus, -z);
    g.values.push_back(v);
  }
  return g;
}

GfSamples retarded_gf_exact(const AimParams& params, int orbital, const std::vector<double>& omega, double eta) {
  if (!(eta > 0)) throw std::invalid_argument("retarded_gf_exact: eta must be positive");
  const EdResult ed = exact_diagonalize(params);
  const PauliSum h = build_hamiltonian(params);
  const PauliSum h_tilde = h - PauliSum::identity(h.n_qubits(), ed.ground_energy);
  LanczosChain chains[2];
  double norms[2] = {0.0, 0.0};
  for (GfBranch br : {GfBranch::particle, GfBranch::hole}) {
    const auto start = initial_krylov(ed.ground_state, orbital, br);
    const int k = br == GfBranch::particle ? 0 : 1;
    norms[k] = start.norm_sq;
    if (!start.zero()) chains[k] = classical_lanczos(h_tilde, *start.state);
  }
  return assemble_gf(chains[0], norms[0], chains[1], norms[1], omega, eta, "exact");
}

VariationalLanczosResult variational_lanczos(const AimParams& params, const State& gs, double e_gs,
                                             const Sector& gs_sector, int orbital, GfBranch branch,
                                             const VariationalLanczosOptions& options, Rng& rng) {
  VariationalLanczosResult res;
  const int nq = params.n_qubits();
  const auto start = initial_krylov(gs, orbital, branch);
  res.norm_sq = start.norm_sq;
  if (start.zero()) return res;
  res.sector = shifted_sector(gs_sector, orbital, nq, branch);

  const SparseH h = shifted_sparse(build_hamiltonian(params), e_gs);
  const Connectivity mode = options.connectivity.value_or(default_connectivity(params.n_imp, params.n_bath));
  const SpaCircuit spa = build_spa(build_topology(params.n_imp, params.n_bath, mode), options.depth, res.sector);
  const std::size_t max_n =
      options.max_n > 0 ? options.max_n : static_cast<std::size_t>(sector_dimension(res.sector, nq));

  res.states.push_back(*start.state);
  res.chain.a.push_back(res.states[0].amplitudes().dot(h * res.states[0].amplitudes()).real());
  res.chain.b.push_back(0.0);
  res.chain.termination = Termination::max_dim;

  std::optional<Eigen::VectorXd> theta_prev;
  while (res.chain.a.size() < max_n) {
    const std::size_t n = res.chain.a.size();
    const Eigen::VectorXcd& prev = res.states[n - 1].amplitudes();
    const Eigen::VectorXcd w = h * prev;
    const double b2 = w.squaredNorm() - res.chain.a[n - 1] * res.chain.a[n - 1] - res.chain.b[n - 1] * res.chain.b[n - 1];
    if (b2 < options.b_tol * options.b_tol) {
      res.chain.termination = Termination::b_tolerance;
      break;
    }
    const double b_target = std::sqrt(b2);
    const Eigen::VectorXcd* prev2 = n >= 2 ? &res.states[n - 2].amplitudes() : nullptr;

    const StateCost cost = [&](const State& psi, Eigen::VectorXcd& g) {
      const Eigen::VectorXcd& v = psi.amplitudes();
      const cplx o = w.dot(v);
      const double mag = std::abs(o);
      const cplx unit = mag > 1e-300 ? o / mag : cplx{0.0, 0.0};
      double c = options.lambda1 * (mag - b_target) * (mag - b_target);
      g = options.lambda1 * (mag - b_target) * unit * w;
      const cplx o1 = prev.dot(v);
      c += options.lambda2 * std::norm(o1);
      g += options.lambda2 * o1 * prev;
      if (prev2 != nullptr) {
        const cplx o2 = prev2->dot(v);
        c += options.lambda3 * std::norm(o2);
        g += options.lambda3 * o2 * *prev2;
      }
      return c;
    };
    const Objective f = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
      const Circuit c = bind(spa, x);
      if (grad == nullptr) {
        Eigen::VectorXcd unused;
        return cost(run(c).state, unused);
      }
      CostGradient cg = adjoint_gradient(c, spa.n_params(), cost);
      *grad = std::move(cg.gradient);
      return cg.value;
    };

    MinimizeResult best;
    best.value = std::numeric_limits<double>::infinity();
    const int n_starts = options.restarts + (theta_prev ? 1 : 0);
    for (int r = 0; r < n_starts; ++r) {
      Eigen::VectorXd x0(spa.n_params());
      if (r == 0 && theta_prev) {
        x0 = *theta_prev;
      } else {
        for (auto& x : x0) x = rng.uniform(-options.init_scale, options.init_scale);
      }
      MinimizeResult m = minimize_bfgs(f, std::move(x0), options.minimizer);
      if (m.value < best.value) best = std::move(m);
      if (best.value < 1e-12) break;
    }
    theta_prev = best.x;
    res.costs.push_back(best.value);
    res.failed.push_back(!(best.value <= options.failure_cost));

    State chi = prepare(spa, best.x);
    res.chain.a.push_back(chi.amplitudes().dot(h * chi.amplitudes()).real());
    res.chain.b.push_back(b_target);
    res.states.push_back(std::move(chi));
  }

  for (std::size_t i = 0; i < res.states.size(); ++i)
    for (std::size_t j = i + 3; j < res.states.size(); ++j)
      res.drift = std::max(res.drift, std::abs(res.states[i].inner(res.states[j])));
  return res;
}

GfSamples retarded_gf_variational(const AimParams& params, const State& gs, double e_gs, const Sector& gs_sector,
                                  int orbital, const std::vector<double>& omega, double eta,
                                  const VariationalLanczosOptions& options, Rng& rng) {
  const auto plus = variational_lanczos(params, gs, e_gs, gs_sector, orbital, GfBranch::particle, options, rng);
  const auto minus = variational_lanczos(params, gs, e_gs, gs_sector, orbital, GfBranch::hole, options, rng);
  return assemble_gf(plus.chain, plus.norm_sq, minus.chain, minus.norm_sq, omega, eta, "variational");
}

double relative_error(const GfSamples& g_var, const GfSamples& g_exact) {
  if (g_var.omega != g_exact.omega || g_var.eta != g_exact.eta || g_var.values.size() != g_exact.values.size())
    throw std::invalid_argument("relative_error: grids differ");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < g_var.values.size(); ++i) {
    num += std::norm(g_var.values[i] - g_exact.values[i]);
    den += std::norm(g_exact.values[i]);
  }
  if (den == 0.0) throw std::domain_error("relative_error: exact function vanishes");
  return std::sqrt(num / den);
}

double spectral_weight(const GfSamples& g) {
  double s = 0.0;
  for (std::size_t i = 1; i < g.omega.size(); ++i)
    s += 0.5 * (g.omega[i] - g.omega[i - 1]) * (g.values[i].imag() + g.values[i - 1].imag());
  return -s / std::numbers::pi;
}

}  // namespace aim
