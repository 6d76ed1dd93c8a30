#include "aim/vqe.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace aim {

namespace {

std::uint64_t stream_key(const Sector& s, int depth) {
  return (static_cast<std::uint64_t>(depth) << 32) | (static_cast<std::uint64_t>(s.n_total) << 16) |
         static_cast<std::uint64_t>(s.s_z + 128);
}

/// Lower energy wins; near-ties go to the smaller (N, |Sz|).
bool better(const VqeResult& a, const VqeResult& b) {
  if (std::abs(a.energy - b.energy) > 1e-10) return a.energy < b.energy;
  if (a.sector.n_total != b.sector.n_total) return a.sector.n_total < b.sector.n_total;
  return std::abs(a.sector.s_z) < std::abs(b.sector.s_z);
}

}  // namespace

SectorObjective::SectorObjective(const PauliSum& h, SpaCircuit spa) : h_(h.to_sparse()), spa_(std::move(spa)) {
  if (h.n_qubits() != spa_.n_qubits()) throw std::invalid_argument("SectorObjective: register mismatch");
}

double SectorObjective::energy(const Eigen::VectorXd& theta) const {
  const State psi = prepare(spa_, theta);
  return psi.amplitudes().dot(h_ * psi.amplitudes()).real();
}

double SectorObjective::operator()(const Eigen::VectorXd& theta, Eigen::VectorXd* grad) const {
  if (grad == nullptr) return energy(theta);
  const auto cost = [this](const State& psi, Eigen::VectorXcd& g) {
    g = h_ * psi.amplitudes();
    return psi.amplitudes().dot(g).real();
  };
  CostGradient cg = adjoint_gradient(bind(spa_, theta), spa_.n_params(), cost);
  *grad = std::move(cg.gradient);
  return cg.value;
}

VqeResult minimize_sector(const AimParams& params, const Sector& sector, int depth, int restarts, Rng& rng,
                          const VqeOptions& options, const Eigen::VectorXd* warm_start) {
  if (restarts < 1) throw std::invalid_argument("minimize_sector: restarts must be positive");
  sector.validate(params.n_qubits());
  const Connectivity mode = options.connectivity.value_or(default_connectivity(params.n_imp, params.n_bath));
  const SectorObjective objective(build_hamiltonian(params),
                                  build_spa(build_topology(params.n_imp, params.n_bath, mode), depth, sector));
  const int n = objective.spa().n_params();
  if (warm_start != nullptr && warm_start->size() != n) throw std::invalid_argument("minimize_sector: warm start length");

  const Objective f = [&objective](const Eigen::VectorXd& x, Eigen::VectorXd* g) { return objective(x, g); };
  VqeResult best;
  best.sector = sector;
  best.depth = depth;
  best.energy = std::numeric_limits<double>::infinity();
  best.overlap_error = std::numeric_limits<double>::quiet_NaN();
  for (int r = 0; r < restarts; ++r) {
    Eigen::VectorXd x0(n);
    if (r == 0 && warm_start != nullptr) {
      x0 = *warm_start;
    } else {
      for (int i = 0; i < n; ++i) x0[i] = rng.uniform(-options.init_scale, options.init_scale);
    }
    const MinimizeResult m = minimize_bfgs(f, std::move(x0), options.minimizer);
    best.nit += m.iterations;
    best.n_fev += m.evaluations;
    ++best.restarts_used;
    if (std::isfinite(m.value) && m.value < best.energy) {
      best.energy = m.value;
      best.theta = m.x;
      best.converged = m.converged;
    }
  }
  if (!std::isfinite(best.energy)) throw std::runtime_error("minimize_sector: every restart failed");
  best.state = prepare(objective.spa(), best.theta);
  return best;
}

const VqeResult& GroundSearchReport::winner() const {
  for (const auto& s : sectors)
    if (s.sector == winning_sector) return s;
  throw std::logic_error("GroundSearchReport: no winning sector");
}

double overlap_error(const State& candidate, const State& reference) {
  if (candidate.n_qubits() != reference.n_qubits()) throw std::invalid_argument("overlap_error: register mismatch");
  return 1.0 - std::abs(reference.inner(candidate));
}

GroundSearchReport ground_search(const AimParams& params, double delta_target, int d_max, std::uint64_t seed,
                                 const VqeOptions& options) {
  if (d_max < 1) throw std::invalid_argument("ground_search: d_max must be positive");
  const EdResult ed = exact_diagonalize(params);
  GroundSearchReport report;
  report.ed_energy = ed.ground_energy;
  report.ed_sector = ed.ground_sector;
  report.degenerate = ed.degenerate;

  const auto sectors = enumerate_sectors(params.n_qubits(), true);
  // the empty and filled sectors hold one product state each
  std::vector<VqeResult> trivial;
  {
    const PauliSum h = build_hamiltonian(params);
    const int nq = params.n_qubits();
    for (const Sector s : {Sector{0, 0}, Sector{nq, 0}}) {
      VqeResult r;
      r.sector = s;
      r.state = State::basis(nq, s.n_total == 0 ? 0 : (Basis{1} << nq) - 1);
      r.energy = expectation(r.state, h).real();
      r.converged = true;
      r.overlap_error = overlap_error(r.state, ed.ground_state);
      trivial.push_back(std::move(r));
    }
  }
  std::vector<VqeResult> previous;
  for (int d = 1; d <= d_max; ++d) {
    std::vector<VqeResult> current;
    current.reserve(sectors.size());
    for (std::size_t i = 0; i < sectors.size(); ++i) {
      Rng rng = Rng::stream(seed, stream_key(sectors[i], d));
      if (previous.empty()) {
        current.push_back(minimize_sector(params, sectors[i], d, options.restarts, rng, options));
        continue;
      }
      const Eigen::VectorXd& prev = previous[i].theta;
      Eigen::VectorXd warm = Eigen::VectorXd::Zero(prev.size() / (d - 1) * d);
      warm.head(prev.size()) = prev;
      current.push_back(minimize_sector(params, sectors[i], d, options.restarts, rng, options, &warm));
    }

    for (std::size_t i = 0; i < current.size(); ++i)
      current[i].overlap_error = overlap_error(current[i].state, ed.ground_state);
    const std::size_t n_searched = current.size();
    for (VqeResult r : trivial) {
      r.depth = d;
      current.push_back(std::move(r));
    }

    DepthRecord rec;
    rec.depth = d;
    std::size_t win = 0;
    for (std::size_t i = 0; i < current.size(); ++i) {
      rec.nit += current[i].nit;
      if (better(current[i], current[win])) win = i;
    }
    rec.best_sector = current[win].sector;
    rec.energy = current[win].energy;
    rec.delta = current[win].overlap_error;
    report.trace.push_back(rec);

    report.winning_sector = rec.best_sector;
    report.energy = rec.energy;
    report.delta = rec.delta;
    report.nit = rec.nit;
    report.sectors = current;
    previous.assign(current.begin(), current.begin() + static_cast<std::ptrdiff_t>(n_searched));
    if (rec.delta <= delta_target) {
      report.d_star = d;
      break;
    }
  }
  return report;
}

int depth_for_target(const GroundSearchReport& report, double delta_target) {
  for (const auto& rec : report.trace)
    if (rec.delta <= delta_target) return rec.depth;
  return 0;
}

int nit_for_target(const GroundSearchReport& report, double delta_target) {
  for (const auto& rec : report.trace)
    if (rec.delta <= delta_target) return rec.nit;
  return 0;
}

double sector_divisor(int n_sites) { return 2.0 * (n_sites + 1) * (n_sites + 1); }

double normalized_iterations(double total_nit, int n_sites) { return total_nit / sector_divisor(n_sites); }

double normalized_iterations(const GroundSearchReport& report, int n_sites) {
  return normalized_iterations(static_cast<double>(report.nit), n_sites);
}

}  // namespace aim
