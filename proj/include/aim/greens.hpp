#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aim/ansatz.hpp"
#include "aim/model.hpp"
#include "aim/optimize.hpp"
#include "aim/random.hpp"
#include "aim/state.hpp"

namespace aim {

enum class Termination { b_tolerance, max_dim, max_iter };

std::string to_string(Termination t);

/// Lanczos coefficients with b[0] = 0 and |a| = |b|. Only b_n^2 enters the
/// continued fraction, so b holds magnitudes.
struct LanczosChain {
  std::vector<double> a;
  std::vector<double> b;
  Termination termination = Termination::max_dim;

  std::size_t size() const { return a.size(); }
  /// Tridiagonal matrix of the chain.
  Eigen::MatrixXd tridiagonal() const;
};

/// Three-term recursion with full reorthogonalization. max_n caps the number
/// of Krylov vectors (0 means the register dimension). Throws
/// std::runtime_error when the closed-form b_n^2 drops below -1e-10.
LanczosChain classical_lanczos(const PauliSum& h_tilde, const State& phi, std::size_t max_n = 0, double b_tol = 1e-8);

/// 1 / (z - a0 - b1^2 / (z - a1 - ...)), evaluated from the deepest level.
std::complex<double> continued_fraction(const LanczosChain& chain, std::complex<double> z);

enum class GfBranch { particle, hole };  // + (creation) and - (annihilation)

struct KrylovStart {
  std::optional<State> state;  // empty for a zero branch
  double norm_sq = 0.0;

  bool zero() const { return !state.has_value(); }
};

/// |phi+> = c^dagger|gs>/|| || or |phi-> = c|gs>/|| || via projection of the
/// orbital followed by its Z-string and X. norm_sq = (1 +- <Z>)/2.
KrylovStart initial_krylov(const State& gs, int orbital, GfBranch branch);

/// Sector reached by adding (particle) or removing (hole) an electron.
Sector shifted_sector(const Sector& gs_sector, int orbital, int n_qubits, GfBranch branch);

struct GfSamples {
  std::vector<double> omega;
  double eta = 0.1;
  std::vector<std::complex<double>> values;
  double norm_plus = 0.0;   // ||c^dagger|GS>||^2
  double norm_minus = 0.0;  // ||c|GS>||^2
  LanczosChain chain_plus;
  LanczosChain chain_minus;
  std::string provenance;
};

/// Uniform grid lo, lo + step, ..., hi (inclusive up to rounding).
std::vector<double> frequency_grid(double lo = -20.0, double hi = 20.0, double step = 0.05);

/// G(z) = n+ g+(z) - n- g-(-z) at z = omega + i eta.
GfSamples assemble_gf(const LanczosChain& plus, double norm_plus, const LanczosChain& minus, double norm_minus,
                      const std::vector<double>& omega, double eta, std::string provenance);

/// Retarded impurity Green's function from classical Lanczos chains on the
/// exact ground state.
GfSamples retarded_gf_exact(const AimParams& params, int orbital, const std::vector<double>& omega, double eta = 0.1);

struct VariationalLanczosOptions {
  int depth = 1;
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double lambda3 = 1.0;
  /// Random starts added to the warm start at each iteration.
  int restarts = 2;
  double init_scale = 0.5;
  /// 0 means the dimension of the shifted sector.
  std::size_t max_n = 0;
  double b_tol = 1e-4;
  /// Iterations whose best cost stays above this are reported as failed.
  double failure_cost = 1e-6;
  std::optional<Connectivity> connectivity;
  MinimizeOptions minimizer;
};

struct VariationalLanczosResult {
  LanczosChain chain;
  std::vector<State> states;
  std::vector<double> costs;  // per iteration n >= 1
  std::vector<bool> failed;   // per iteration n >= 1
  /// Largest |<chi_i|chi_j>| with |i - j| > 2; not corrected.
  double drift = 0.0;
  double norm_sq = 0.0;
  Sector sector;
};

/// Lanczos vectors chi_n (n >= 1) as SPA states in the shifted sector, each
/// minimizing lambda1 (|<chi|H~|chi_{n-1}>| - |b_n|)^2 + lambda2 |<chi|chi_{n-1}>|^2
/// + lambda3 |<chi|chi_{n-2}>|^2 with b_n from the closed-form recursion on
/// the previous variational states. chi_0 is the projected start vector.
VariationalLanczosResult variational_lanczos(const AimParams& params, const State& gs, double e_gs,
                                             const Sector& gs_sector, int orbital, GfBranch branch,
                                             const VariationalLanczosOptions& options, Rng& rng);

/// Variational retarded GF on both branches.
GfSamples retarded_gf_variational(const AimParams& params, const State& gs, double e_gs, const Sector& gs_sector,
                                  int orbital, const std::vector<double>& omega, double eta,
                                  const VariationalLanczosOptions& options, Rng& rng);

/// sqrt(sum |G_var - G_exact|^2) / sqrt(sum |G_exact|^2) over the grid.
double relative_error(const GfSamples& g_var, const GfSamples& g_exact);

/// -(1/pi) * trapezoid integral of Im G over the grid.
double spectral_weight(const GfSamples& g);

}  // namespace aim
