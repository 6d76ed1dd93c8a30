#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aim/ansatz.hpp"
#include "aim/correlator.hpp"
#include "aim/io.hpp"

namespace aim {

enum class Task { gen, ed, vqe, sweep, greens, correlator, measure_plan };

std::string to_string(Task task);
/// Accepts the CLI spelling, e.g. "measure-plan".
Task task_from_string(const std::string& name);

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  Task task = Task::vqe;
  int n_imp = 1;
  int n_bath = 1;
  std::vector<std::uint64_t> seeds{0};
  /// Fixed ansatz depth; the VQE tasks otherwise sweep 1..d_max.
  std::optional<int> depth;
  /// 0 means n_sites + 2.
  int d_max = 0;
  std::vector<double> delta_targets{1e-3};
  double omega_lo = -20.0;
  double omega_hi = 20.0;
  double omega_step = 0.05;
  double eta = 0.1;
  double t_max = 40.0;
  double dt = 0.02;
  int orbital = 0;
  std::optional<CorrelatorSpec> spec;
  std::uint64_t shots = 0;
  bool post_select = false;
  bool parallel_measurement = true;
  int restarts = 5;
  std::optional<Connectivity> connectivity;
  int jobs = 1;
  std::filesystem::path out = "results";

  int n_sites() const { return n_imp + n_bath; }
  int effective_d_max() const;
  /// Throws ConfigError.
  void validate() const;
};

/// Unknown keys are rejected. Throws ConfigError.
ExperimentConfig config_from_json(const Json& j);
Json to_json(const ExperimentConfig& c);

struct SeedOutcome {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  /// Rows for summary.csv, without the header.
  std::vector<std::string> rows;
};

struct RunReport {
  std::vector<SeedOutcome> seeds;
  std::filesystem::path directory;
  int failures = 0;

  /// 0 success, 2 partial failure.
  int exit_code() const { return failures == 0 ? 0 : 2; }
};

/// Header line of summary.csv.
std::string summary_header(const ExperimentConfig& config);

/// Runs one seed; `<out>/<task>/<n_imp>_<n_bath>/<seed>.json` plus any
/// per-seed CSV. Exceptions are caught and recorded.
SeedOutcome run_seed(const ExperimentConfig& config, std::uint64_t seed);

/// Validates, runs every seed on `jobs` workers and writes summary.csv (and
/// aggregate.csv for sweeps). Output does not depend on the worker count.
RunReport run(const ExperimentConfig& config);

/// One sweep result reduced to what the aggregate needs.
struct SweepPoint {
  int n_sites = 0;
  std::uint64_t seed = 0;
  double delta = 0.0;
  int d_star = 0;  // 0 if the target was not reached
  int nit = 0;
  double nit_normalized = 0.0;
  bool degenerate = false;
  int layer_size = 0;
};

struct AggregateRow {
  int n_sites = 0;
  double delta = 0.0;
  int used = 0;
  int degenerate = 0;
  int unconverged = 0;
  double mean_depth = 0.0;
  double sem_depth = 0.0;
  int max_depth = 0;
  double mean_nit_normalized = 0.0;
  /// Ansatz parameter count at the mean depth.
  double mean_params = 0.0;
};

/// Groups by (sites, delta); degenerate seeds are counted and excluded, and
/// seeds that missed the target are counted and excluded. Throws
/// std::invalid_argument on empty input.
std::vector<AggregateRow> aggregate(const std::vector<SweepPoint>& points);
/// Reads every per-seed sweep JSON below `dir`.
std::vector<AggregateRow> aggregate(const std::filesystem::path& dir);
std::vector<SweepPoint> sweep_points(const Json& seed_document);

void write_aggregate_csv(std::ostream& os, const std::vector<AggregateRow>& rows);

struct PowerLaw {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r2 = 0.0;
};

/// Least squares of log y against log x. Needs two positive distinct x.
PowerLaw fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace aim
