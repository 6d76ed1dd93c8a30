// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "aim/correlator.hpp"
#include "aim/greens.hpp"
#include "aim/measure.hpp"
#include "aim/vqe.hpp"
#include "oracles.hpp"

using namespace aim;
using cplx = std::complex<double>;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

/// First `count` seeds from 0 whose ED ground state is non-degenerate.
std::vector<std::uint64_t> clean_seeds(int n_imp, int n_bath, int count) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = 0; static_cast<int>(out.size()) < count; ++s)
    if (!exact_diagonalize(sample_params(s, n_imp, n_bath)).degenerate) out.push_back(s);
  return out;
}

Outcome ground_state_equivalence() {
  Outcome o{true, ""};
  for (int nb : {1, 2}) {
    const int sites = 1 + nb;
    int ok = 0;
    const auto seeds = clean_seeds(1, nb, 50);
    for (auto seed : seeds) {
      const auto r = ground_search(sample_params(seed, 1, nb), 1e-3, sites + 2, seed);
      if (r.converged() && r.d_star <= sites + 2 && r.winning_sector == r.ed_sector) ++ok;
    }
    const double rate = static_cast<double>(ok) / static_cast<double>(seeds.size());
    o.pass = o.pass && rate >= 0.9;
    o.detail += fmt("sites=%d %d/%zu; ", sites, ok, seeds.size());
  }
  o.detail += "need >= 90% at delta 1e-3, d <= sites+2, sector = ED";
  return o;
}

Outcome depth_scaling() {
  int worst = 0, missed = 0;
  for (auto seed : clean_seeds(1, 2, 20)) {
    const auto r = ground_search(sample_params(seed, 1, 2), 1e-5, 6, seed);
    if (!r.converged()) ++missed;
    worst = std::max(worst, r.d_star);
  }
  return {missed == 0 && worst <= 6, fmt("sites=3, 20 seeds: max d* = %d, unconverged %d; need d* <= 6", worst, missed)};
}

/// Relative error of the variational GF built on the VQE ground state.
double gf_error(std::uint64_t seed, int n_bath) {
  const int sites = 1 + n_bath;
  const AimParams p = sample_params(seed, 1, n_bath);
  const auto gs = ground_search(p, 1e-5, 2 * sites, seed);
  const VqeResult& w = gs.winner();
  VariationalLanczosOptions opt;
  opt.depth = sites;
  Rng rng = Rng::stream(seed, 0x6f);
  const auto omega = frequency_grid();
  const GfSamples var = retarded_gf_variational(p, w.state, w.energy, w.sector, 0, omega, 0.1, opt, rng);
  return relative_error(var, retarded_gf_exact(p, 0, omega, 0.1));
}

Outcome gf_accuracy() {
  Outcome o{true, ""};
  for (int nb : {1, 2}) {
    int ok = 0;
    double worst = 0.0;
    for (auto seed : clean_seeds(1, nb, 10)) {
      const double e = gf_error(seed, nb);
      worst = std::max(worst, e);
      if (e <= 0.1) ++ok;
    }
    o.pass = o.pass && ok >= 7;
    o.detail += fmt("sites=%d %d/10 (worst %.2e); ", 1 + nb, ok, worst);
  }
  o.detail += "need eps_rel <= 10% on >= 70%";
  return o;
}

void gf_extended() {
  int ok = 0;
  double worst = 0.0;
  const auto seeds = clean_seeds(1, 3, 2);
  for (auto seed : seeds) {
    const double e = gf_error(seed, 3);
    worst = std::max(worst, e);
    if (e <= 0.1) ++ok;
  }
  std::printf("INFO extended (non-gating) Green's function at sites=4: %d/%zu within 10%% (worst %.2e)\n", ok,
              seeds.size(), worst);
}

Outcome continued_fraction_vs_resolvent() {
  double worst = 0.0;
  int cases = 0;
  const auto omega = frequency_grid();
  const std::vector<std::tuple<int, int, int>> shapes{{1, 1, 5}, {1, 2, 5}, {2, 1, 5}, {1, 3, 2}, {2, 2, 2}};
  for (auto [ni, nb, n_seeds] : shapes) {
    for (auto seed : clean_seeds(ni, nb, n_seeds)) {
      const AimParams p = sample_params(seed, ni, nb);
      const EdResult ed = exact_diagonalize(p);
      const PauliSum ht = build_hamiltonian(p) - PauliSum::identity(p.n_qubits(), ed.ground_energy);
      for (GfBranch br : {GfBranch::particle, GfBranch::hole}) {
        const auto start = initial_krylov(ed.ground_state, 0, br);
        if (start.zero()) continue;
        const LanczosChain chain = classical_lanczos(ht, *start.state);
        ++cases;
        for (double w : omega) {
          const cplx z{w, 0.1};
          worst = std::max(worst, std::abs(continued_fraction(chain, z) - resolvent_reference(ht, *start.state, z)));
        }
      }
    }
  }
  return {worst <= 1e-8, fmt("%d chains up to Nq=8 on the default grid: max deviation %.2e; need <= 1e-8", cases, worst)};
}

cplx heisenberg(const oracle::Matrix& h, const State& psi, const CorrelatorSpec& spec, int nq) {
  oracle::Matrix m = oracle::Matrix::Identity(h.rows(), h.cols());
  for (const auto& op : spec.ops) {
    const oracle::Matrix u = oracle::propagator(h, op.t);
    m = u.adjoint() * oracle::ladder(op.orbital, op.dagger, nq) * u * m;
  }
  return psi.amplitudes().dot(m * psi.amplitudes());
}

Outcome correlator_equivalence() {
  Rng rng(20240);
  double dev_oracle = 0.0, dev_gate = 0.0;
  int aborted = 0;
  for (int k = 0; k < 20; ++k) {
    const std::uint64_t seed = rng.bits() % 1000;
    const AimParams p = sample_params(seed, 1, 1);
    const PauliSum h = build_hamiltonian(p);
    const EdResult ed = exact_diagonalize(p);
    const int m = 2 + k % 3;
    CorrelatorSpec spec;
    for (int j = 0; j < m; ++j)
      spec.ops.push_back({static_cast<int>(rng.bits() % 4), rng.uniform() < 0.5, rng.uniform(-3.0, 3.0)});
    const auto fast = correlator_fast(ed.ground_state, spec, h);
    if (fast.aborted_at) ++aborted;
    dev_oracle = std::max(dev_oracle, std::abs(fast.value - heisenberg(oracle::hamiltonian(p), ed.ground_state, spec, 4)));
    dev_gate = std::max(dev_gate, std::abs(fast.value - correlator_gate_level(ed.ground_state, spec, h).value));
  }
  return {dev_oracle <= 1e-10 && dev_gate <= 1e-10,
          fmt("20 pairs at Nq=4 (%d aborted): fast vs oracle %.2e, gate-level vs fast %.2e; need <= 1e-10", aborted,
              dev_oracle, dev_gate)};
}

Outcome time_frequency() {
  double worst = 0.0;
  const auto times = time_grid(400.0, 0.02);
  const auto omega = frequency_grid();
  for (auto seed : clean_seeds(1, 1, 5)) {
    const AimParams p = sample_params(seed, 1, 1);
    const EdResult ed = exact_diagonalize(p);
    const auto s = greater_lesser_retarded(ed.ground_state, build_hamiltonian(p), 0, times);
    GfSamples ft;
    ft.omega = omega;
    ft.eta = 0.1;
    ft.values = damped_fourier(times, s.retarded, omega, 0.1);
    worst = std::max(worst, relative_error(ft, retarded_gf_exact(p, 0, omega, 0.1)));
  }
  return {worst <= 0.02, fmt("5 seeds at Nq=4: max L2 deviation %.2e; need <= 2%%", worst)};
}

Outcome measurement_plan() {
  double worst = 0.0;
  bool counts = true;
  Rng rng(77);
  for (auto [ni, nb] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {1, 3}, {2, 1}, {2, 2}, {3, 1}}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const AimParams p = sample_params(seed, ni, nb);
      const oracle::Matrix hd = oracle::hamiltonian(p);
      const MeasPlan plan = plan_measurements(p, true);
      const EdResult ed = exact_diagonalize(p);
      for (const State& psi : {ed.ground_state, oracle::random_state(p.n_qubits(), rng)}) {
        const double exact = psi.amplitudes().dot(hd * psi.amplitudes()).real();
        worst = std::max(worst, std::abs(estimate_energy(psi, plan, {}, rng).energy - exact));
      }
    }
    const AimParams p = sample_params(0, ni, nb);
    counts = counts && plan_measurements(p, false).circuits.size() ==
                           static_cast<std::size_t>(1 + 2 * ni * nb + ni * (ni - 1));
  }
  for (int nb = 1; nb <= 7; ++nb)
    counts = counts && plan_measurements(sample_params(0, 1, nb), true).circuits.size() ==
                           static_cast<std::size_t>(1 + std::max(1, nb));
  return {worst <= 1e-10 && counts,
          fmt("60 seeds, Nq <= 8: max |estimate - <H>| %.2e (need <= 1e-10); circuit counts %s", worst,
              counts ? "match" : "MISMATCH")};
}

Outcome symmetry_suite() {
  Rng rng(88);
  double leak = 0.0, kept = 1.0, z2 = 0.0;
  const std::vector<std::tuple<int, int, Connectivity>> shapes{
      {1, 1, Connectivity::square_nn},  {1, 2, Connectivity::square_nn},  {1, 3, Connectivity::square_nn},
      {1, 1, Connectivity::square_nnn}, {1, 2, Connectivity::square_nnn}, {1, 3, Connectivity::square_nnn},
      {2, 1, Connectivity::square_nnn}, {2, 2, Connectivity::square_nnn}};
  for (auto [ni, nb, mode] : shapes) {
    const Topology topo = build_topology(ni, nb, mode);
    const AimParams p = sample_params(1, ni, nb);
    const MeasPlan plan = plan_measurements(p, true);
    for (const Sector& s : enumerate_sectors(topo.n_qubits(), false)) {
      const SpaCircuit spa = build_spa(topo, 2, s);
      for (int k = 0; k < 100; ++k) {
        Eigen::VectorXd theta(spa.n_params());
        for (auto& x : theta) x = rng.uniform(-std::numbers::pi, std::numbers::pi);
        const State psi = prepare(spa, theta);
        leak = std::max(leak, sector_leakage(psi, s));
        if (k == 0) {
          EstimateOptions eo;
          eo.shots = 500;
          eo.post_select = true;
          eo.sector = s;
          kept = std::min(kept, estimate_energy(psi, plan, eo, rng).kept_fraction);
        }
      }
    }
  }
  for (auto [ni, nb] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {1, 3}, {2, 1}, {2, 2}}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const PauliSum h = build_hamiltonian(sample_params(seed, ni, nb));
      for (const Sector& s : enumerate_sectors(h.n_qubits(), true)) {
        if (s.s_z == 0) continue;
        z2 = std::max(z2, std::abs(diagonalize_sector(h, s).energies[0] -
                                   diagonalize_sector(h, Sector{s.n_total, -s.s_z}).energies[0]));
      }
    }
  }
  return {leak < 1e-12 && kept == 1.0 && z2 <= 1e-10,
          fmt("leakage %.2e (need < 1e-12), post-selection keeps %.4f (need 1), Z2 splitting %.2e (need <= 1e-10)",
              leak, kept, z2)};
}

Outcome sum_rule() {
  double worst = 0.0;
  const auto omega = frequency_grid(-60.0, 60.0, 0.01);
  for (int nb : {1, 2})
    for (auto seed : clean_seeds(1, nb, 10))
      worst = std::max(worst, std::abs(spectral_weight(retarded_gf_exact(sample_params(seed, 1, nb), 0, omega, 0.05)) - 1.0));
  return {worst <= 0.05, fmt("20 seeds at Nq=4,6: max |weight - 1| %.2e; need <= 0.05", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 oracle ground-state equivalence", ground_state_equivalence},
      {"2 depth-scaling spot check", depth_scaling},
      {"3 Green's-function accuracy", gf_accuracy},
      {"4 continued fraction vs resolvent", continued_fraction_vs_resolvent},
      {"5 norm-chain correlator equivalence", correlator_equivalence},
      {"6 time/frequency consistency", time_frequency},
      {"7 measurement-plan exactness", measurement_plan},
      {"8 symmetry suite", symmetry_suite},
      {"9 spectral sum rule", sum_rule},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  gf_extended();
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed == 0 ? 0 : 1;
}
