#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "aim/ansatz.hpp"
#include "aim/model.hpp"
#include "aim/optimize.hpp"
#include "aim/random.hpp"

namespace aim {

struct VqeOptions {
  int restarts = 5;
  /// Initial parameters are uniform in [-init_scale, init_scale].
  double init_scale = 0.1;
  std::optional<Connectivity> connectivity;
  MinimizeOptions minimizer;
};

struct VqeResult {
  Sector sector;
  int depth = 0;
  Eigen::VectorXd theta;
  double energy = 0.0;
  int nit = 0;
  int n_fev = 0;
  /// 1 - |<candidate|reference>|; NaN when no reference was supplied.
  double overlap_error = 0.0;
  int restarts_used = 0;
  bool converged = false;
  State state;
};

/// <psi|H|psi> and its gradient for the SPA on one sector.
class SectorObjective {
 public:
  SectorObjective(const PauliSum& h, SpaCircuit spa);

  const SpaCircuit& spa() const { return spa_; }
  double energy(const Eigen::VectorXd& theta) const;
  double operator()(const Eigen::VectorXd& theta, Eigen::VectorXd* grad) const;

 private:
  Eigen::SparseMatrix<cplx> h_;
  SpaCircuit spa_;
};

/// Best of `restarts` BFGS runs. With `warm_start` the first run starts from it
/// and the remaining ones from random points.
VqeResult minimize_sector(const AimParams& params, const Sector& sector, int depth, int restarts, Rng& rng,
                          const VqeOptions& options = {}, const Eigen::VectorXd* warm_start = nullptr);

double overlap_error(const State& candidate, const State& reference);

struct DepthRecord {
  int depth = 0;
  Sector best_sector;
  double energy = 0.0;
  double delta = 1.0;
  /// Iterations summed over every sector at this depth.
  int nit = 0;
};

struct GroundSearchReport {
  std::vector<VqeResult> sectors;  // at the final depth, sector-sorted
  Sector winning_sector;
  double energy = 0.0;
  double delta = 1.0;
  /// Smallest depth meeting the target, 0 if none did.
  int d_star = 0;
  int nit = 0;
  std::vector<DepthRecord> trace;
  double ed_energy = 0.0;
  Sector ed_sector;
  bool degenerate = false;

  bool converged() const { return d_star > 0; }
  /// Entry of `sectors` for the winning sector.
  const VqeResult& winner() const;
};

/// Runs depths 1..d_max over the unique sectors, warm-starting each sector
/// from the previous depth, and stops once delta <= delta_target. The empty
/// and filled sectors are single product states; they are evaluated directly
/// and appended to `sectors`. `nit` is the sector total at the final depth.
GroundSearchReport ground_search(const AimParams& params, double delta_target, int d_max, std::uint64_t seed,
                                 const VqeOptions& options = {});

/// Depth needed for a looser target, read off the trace of a finished search.
int depth_for_target(const GroundSearchReport& report, double delta_target);
int nit_for_target(const GroundSearchReport& report, double delta_target);

double sector_divisor(int n_sites);
double normalized_iterations(const GroundSearchReport& report, int n_sites);
double normalized_iterations(double total_nit, int n_sites);

}  // namespace aim
