#include "aim/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <iomanip>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "aim/greens.hpp"
#include "aim/measure.hpp"
#include "aim/vqe.hpp"

namespace aim {

namespace {

constexpr std::pair<Task, const char*> kTaskNames[] = {
    {Task::gen, "gen"},       {Task::ed, "ed"},
    {Task::vqe, "vqe"},       {Task::sweep, "sweep"},
    {Task::greens, "greens"}, {Task::correlator, "correlator"},
    {Task::measure_plan, "measure-plan"},
};

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

template <class... Ts>
std::string row(const Ts&... fields) {
  std::ostringstream os;
  bool first = true;
  const auto put = [&](const auto& f) {
    if (!first) os << ',';
    first = false;
    if constexpr (std::is_floating_point_v<std::decay_t<decltype(f)>>)
      os << num(f);
    else
      os << f;
  };
  (put(fields), ...);
  return os.str();
}

std::filesystem::path seed_dir(const ExperimentConfig& c) {
  return c.out / to_string(c.task) / (std::to_string(c.n_imp) + "_" + std::to_string(c.n_bath));
}

VqeOptions vqe_options(const ExperimentConfig& c) {
  VqeOptions o;
  o.restarts = c.restarts;
  o.connectivity = c.connectivity;
  return o;
}

std::string csv(const std::function<void(std::ostream&)>& write) {
  std::ostringstream os;
  write(os);
  return os.str();
}

SeedOutcome run_task(const ExperimentConfig& c, std::uint64_t seed) {
  SeedOutcome out;
  out.seed = seed;
  const std::filesystem::path dir = seed_dir(c);
  const std::string stem = std::to_string(seed);
  const AimParams params = sample_params(seed, c.n_imp, c.n_bath);
  const int sites = c.n_sites();
  Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(c.task));
  Json doc{{"task", to_string(c.task)}, {"seed", seed}, {"params", to_json(params)}};

  switch (c.task) {
    case Task::gen: {
      const Connectivity mode = c.connectivity.value_or(default_connectivity(c.n_imp, c.n_bath));
      doc["topology"] = to_json(build_topology(c.n_imp, c.n_bath, mode));
      out.rows.push_back(row(sites, seed, params.n_qubits(), build_hamiltonian(params).size()));
      break;
    }
    case Task::ed: {
      const EdResult ed = exact_diagonalize(params);
      doc["ed"] = to_json(ed);
      write_amplitudes(dir / (stem + ".amp"), ed.ground_state);
      out.rows.push_back(row(sites, seed, ed.ground_energy, ed.ground_sector.n_total, ed.ground_sector.s_z,
                             ed.degenerate ? 1 : 0, ed.gap));
      break;
    }
    case Task::vqe:
    case Task::sweep: {
      const double target = *std::min_element(c.delta_targets.begin(), c.delta_targets.end());
      // a fixed depth runs every layer count up to it
      const GroundSearchReport r = c.depth ? ground_search(params, 0.0, *c.depth, seed, vqe_options(c))
                                           : ground_search(params, target, c.effective_d_max(), seed, vqe_options(c));
      doc["report"] = to_json(r);
      const Connectivity mode = c.connectivity.value_or(default_connectivity(c.n_imp, c.n_bath));
      const int layer = build_spa(build_topology(c.n_imp, c.n_bath, mode), 1, r.winning_sector).layer_size();
      doc["layer_size"] = layer;
      if (c.task == Task::vqe) {
        write_amplitudes(dir / (stem + ".amp"), r.winner().state);
        out.rows.push_back(row(sites, seed, r.trace.back().depth, r.delta, r.energy, r.ed_energy,
                               r.winning_sector.n_total, r.winning_sector.s_z, r.nit, r.degenerate ? 1 : 0));
        break;
      }
      Json targets = Json::array();
      for (double delta : c.delta_targets) {
        const int d = depth_for_target(r, delta);
        const int nit = nit_for_target(r, delta);
        const double nn = normalized_iterations(nit, sites);
        targets.push_back({{"delta", delta}, {"d_star", d}, {"nit", nit}, {"nit_normalized", nn}});
        out.rows.push_back(row(sites, seed, delta, d, nit, nn, r.degenerate ? 1 : 0));
      }
      doc["sites"] = sites;
      doc["targets"] = targets;
      break;
    }
    case Task::greens: {
      const double target = *std::min_element(c.delta_targets.begin(), c.delta_targets.end());
      const GroundSearchReport gs = ground_search(params, target, c.effective_d_max(), seed, vqe_options(c));
      const VqeResult& ground = gs.winner();
      const auto omega = frequency_grid(c.omega_lo, c.omega_hi, c.omega_step);
      const GfSamples exact = retarded_gf_exact(params, c.orbital, omega, c.eta);
      VariationalLanczosOptions opt;
      opt.depth = c.depth.value_or(sites);
      opt.connectivity = c.connectivity;
      int failed = 0;
      double drift = 0.0;
      const GfSamples var = [&] {
        const auto plus = variational_lanczos(params, ground.state, ground.energy, ground.sector, c.orbital,
                                              GfBranch::particle, opt, rng);
        const auto minus = variational_lanczos(params, ground.state, ground.energy, ground.sector, c.orbital,
                                               GfBranch::hole, opt, rng);
        for (const auto* b : {&plus, &minus}) {
          failed += static_cast<int>(std::count(b->failed.begin(), b->failed.end(), true));
          drift = std::max(drift, b->drift);
        }
        return assemble_gf(plus.chain, plus.norm_sq, minus.chain, minus.norm_sq, omega, c.eta, "variational");
      }();
      const double err = relative_error(var, exact);
      doc["exact"] = gf_header(exact);
      doc["variational"] = gf_header(var);
      doc["relative_error"] = err;
      doc["spectral_weight"] = spectral_weight(exact);
      doc["failed_iterations"] = failed;
      doc["drift"] = drift;
      doc["ground_delta"] = gs.delta;
      doc["degenerate"] = gs.degenerate;
      write_text(dir / (stem + ".csv"), csv([&](std::ostream& os) { write_gf_pair_csv(os, exact, var); }));
      out.rows.push_back(row(sites, seed, err, spectral_weight(exact), failed, gs.delta, gs.degenerate ? 1 : 0));
      break;
    }
    case Task::correlator: {
      const EdResult ed = exact_diagonalize(params);
      const PauliSum h = build_hamiltonian(params);
      if (c.spec) {
        const CorrelatorResult fast = correlator_fast(ed.ground_state, *c.spec, h);
        doc["spec"] = to_json(*c.spec);
        doc["fast"] = to_json(fast);
        if (c.shots > 0 && !fast.aborted_at) {
          Json shots = Json::object();
          for (Part part : {Part::real, Part::imag}) {
            const auto e = hadamard_gate_level(ed.ground_state, *c.spec, h, part, c.shots, &rng);
            shots[part == Part::real ? "real" : "imag"] = {
                {"estimate", e.estimate}, {"std_error", e.std_error}, {"survival", e.survival}, {"kept", e.kept}};
          }
          doc["gate_level_shots"] = shots;
        } else {
          doc["gate_level"] = to_json(correlator_gate_level(ed.ground_state, *c.spec, h));
        }
        out.rows.push_back(
            row(sites, seed, fast.value.real(), fast.value.imag(), fast.aborted_at ? 1 : 0, fast.phase_error));
        break;
      }
      const auto times = time_grid(c.t_max, c.dt);
      const GreenSeries s = greater_lesser_retarded(ed.ground_state, h, c.orbital, times);
      for (auto [name, values] : {std::pair{"greater", &s.greater}, {"lesser", &s.lesser}, {"retarded", &s.retarded}})
        write_text(dir / (stem + "_" + name + ".csv"),
                   csv([&](std::ostream& os) { write_series_csv(os, s.t, *values); }));
      const double anti = std::abs(s.greater[0] - s.lesser[0] + std::complex<double>{0.0, 1.0});
      doc["orbital"] = c.orbital;
      doc["n_times"] = times.size();
      doc["anticommutator_error"] = anti;
      out.rows.push_back(row(sites, seed, c.orbital, times.size(), anti));
      break;
    }
    case Task::measure_plan: {
      const EdResult ed = exact_diagonalize(params);
      const MeasPlan plan = plan_measurements(params, c.parallel_measurement);
      EstimateOptions eo;
      eo.shots = c.shots;
      eo.post_select = c.post_select;
      eo.sector = ed.ground_sector;
      const EnergyEstimate e = estimate_energy(ed.ground_state, plan, eo, rng);
      doc["plan"] = to_json(plan);
      doc["estimate"] = to_json(e);
      doc["exact_energy"] = ed.ground_energy;
      write_text(dir / (stem + ".csv"), csv([&](std::ostream& os) { write_estimate_csv(os, e); }));
      out.rows.push_back(row(sites, seed, plan.circuits.size(), unparallelized_circuit_count(c.n_imp, c.n_bath),
                             ed.ground_energy, e.energy, std::sqrt(e.variance), e.kept_fraction));
      break;
    }
  }
  write_json(dir / (stem + ".json"), doc);
  out.ok = true;
  return out;
}

}  // namespace

std::string to_string(Task task) {
  for (auto [t, name] : kTaskNames)
    if (t == task) return name;
  return "?";
}

Task task_from_string(const std::string& name) {
  for (auto [t, n] : kTaskNames)
    if (name == n) return t;
  throw ConfigError("unknown task '" + name + "'");
}

int ExperimentConfig::effective_d_max() const { return d_max > 0 ? d_max : n_sites() + 2; }

void ExperimentConfig::validate() const {
  const auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  require(n_imp >= 1 && n_bath >= 0, "sites: need n_imp >= 1 and n_bath >= 0");
  require(2 * n_sites() <= kMaxEdQubits, "sites: register exceeds " + std::to_string(kMaxEdQubits) + " qubits");
  require(!seeds.empty(), "seeds: empty");
  require(std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() == seeds.size(), "seeds: duplicates");
  require(!depth || *depth >= 1, "depth: must be positive");
  require(d_max >= 0, "d_max: negative");
  require(!delta_targets.empty(), "delta: no targets");
  for (double d : delta_targets) require(d > 0.0 && d < 1.0, "delta: targets must lie in (0, 1)");
  require(omega_lo < omega_hi && omega_step > 0.0, "omega: need lo < hi and step > 0");
  require(eta > 0.0, "eta: must be positive");
  require(t_max > 0.0 && dt > 0.0, "times: need t_max > 0 and dt > 0");
  require(orbital >= 0 && orbital < 2 * n_sites(), "orbital: out of range");
  require(restarts >= 1, "restarts: must be positive");
  require(jobs >= 1, "jobs: must be positive");
  require(!(post_select && shots == 0), "post_select: needs shots");
  if (spec) {
    try {
      spec->validate(2 * n_sites());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("spec: ") + e.what());
    }
  }
  if (task == Task::vqe || task == Task::sweep || task == Task::greens || task == Task::gen) {
    try {
      build_topology(n_imp, n_bath, connectivity.value_or(default_connectivity(n_imp, n_bath)));
    } catch (const std::exception& e) {
      throw ConfigError(std::string("topology: ") + e.what());
    }
  }
}

ExperimentConfig config_from_json(const Json& j) {
  static const std::set<std::string> known{"task",  "sites",    "seeds",       "depth",   "d_max",
                                           "delta", "omega",    "eta",         "times",   "orbital",
                                           "spec",  "shots",    "post_select", "restarts", "connectivity",
                                           "jobs",  "out",      "parallel_measurement"};
  if (!j.is_object()) throw ConfigError("config: expected an object");
  ExperimentConfig c;
  try {
    for (const auto& [key, _] : j.items())
      if (!known.contains(key)) throw ConfigError("config: unknown key '" + key + "'");
    if (j.contains("task")) c.task = task_from_string(j["task"].get<std::string>());
    if (j.contains("sites")) {
      const auto& s = j["sites"];
      if (!s.is_array() || s.size() != 2) throw ConfigError("sites: expected [n_imp, n_bath]");
      c.n_imp = s[0].get<int>();
      c.n_bath = s[1].get<int>();
    }
    if (j.contains("seeds")) {
      const auto& s = j["seeds"];
      c.seeds.clear();
      if (s.is_object()) {
        const auto first = s.value("first", std::uint64_t{0});
        const auto count = s.at("count").get<std::uint64_t>();
        for (std::uint64_t i = 0; i < count; ++i) c.seeds.push_back(first + i);
      } else {
        c.seeds = s.get<std::vector<std::uint64_t>>();
      }
    }
    if (j.contains("depth")) c.depth = j["depth"].get<int>();
    if (j.contains("d_max")) c.d_max = j["d_max"].get<int>();
    if (j.contains("delta")) {
      c.delta_targets = j["delta"].is_array() ? j["delta"].get<std::vector<double>>()
                                              : std::vector<double>{j["delta"].get<double>()};
    }
    if (j.contains("omega")) {
      const auto& w = j["omega"];
      c.omega_lo = w.value("lo", c.omega_lo);
      c.omega_hi = w.value("hi", c.omega_hi);
      c.omega_step = w.value("step", c.omega_step);
    }
    if (j.contains("eta")) c.eta = j["eta"].get<double>();
    if (j.contains("times")) {
      c.t_max = j["times"].value("t_max", c.t_max);
      c.dt = j["times"].value("dt", c.dt);
    }
    if (j.contains("orbital")) c.orbital = j["orbital"].get<int>();
    if (j.contains("spec")) c.spec = spec_from_json(j["spec"]);
    if (j.contains("shots")) c.shots = j["shots"].get<std::uint64_t>();
    if (j.contains("post_select")) c.post_select = j["post_select"].get<bool>();
    if (j.contains("parallel_measurement")) c.parallel_measurement = j["parallel_measurement"].get<bool>();
    if (j.contains("restarts")) c.restarts = j["restarts"].get<int>();
    if (j.contains("connectivity")) c.connectivity = connectivity_from_string(j["connectivity"].get<std::string>());
    if (j.contains("jobs")) c.jobs = j["jobs"].get<int>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

Json to_json(const ExperimentConfig& c) {
  Json j{{"task", to_string(c.task)}, {"sites", Json::array({c.n_imp, c.n_bath})}, {"seeds", c.seeds}};
  if (c.depth) j["depth"] = *c.depth;
  j["d_max"] = c.d_max;
  j["delta"] = c.delta_targets;
  j["omega"] = {{"lo", c.omega_lo}, {"hi", c.omega_hi}, {"step", c.omega_step}};
  j["eta"] = c.eta;
  j["times"] = {{"t_max", c.t_max}, {"dt", c.dt}};
  j["orbital"] = c.orbital;
  if (c.spec) j["spec"] = to_json(*c.spec);
  j["shots"] = c.shots;
  j["post_select"] = c.post_select;
  j["parallel_measurement"] = c.parallel_measurement;
  j["restarts"] = c.restarts;
  if (c.connectivity) j["connectivity"] = to_string(*c.connectivity);
  j["jobs"] = c.jobs;
  j["out"] = c.out.string();
  return j;
}

std::string summary_header(const ExperimentConfig& c) {
  switch (c.task) {
    case Task::gen: return "sites,seed,n_qubits,n_terms";
    case Task::ed: return "sites,seed,ground_energy,N,Sz,degenerate,gap";
    case Task::vqe: return "sites,seed,depth,delta,energy,ed_energy,N,Sz,nit,degenerate";
    case Task::sweep: return "sites,seed,delta,d_star,nit,nit_normalized,degenerate";
    case Task::greens: return "sites,seed,rel_error,spectral_weight,failed_iterations,ground_delta,degenerate";
    case Task::correlator:
      return c.spec ? "sites,seed,re,im,aborted,phase_error" : "sites,seed,orbital,n_times,anticommutator_error";
    case Task::measure_plan:
      return "sites,seed,circuits,unparallelized,exact_energy,estimate,std_error,kept_fraction";
  }
  return "";
}

SeedOutcome run_seed(const ExperimentConfig& config, std::uint64_t seed) {
  try {
    return run_task(config, seed);
  } catch (const std::exception& e) {
    SeedOutcome out;
    out.seed = seed;
    out.error = e.what();
    try {
      write_json(seed_dir(config) / (std::to_string(seed) + ".json"),
                 {{"task", to_string(config.task)}, {"seed", seed}, {"error", out.error}});
    } catch (const std::exception&) {
    }
    return out;
  }
}

RunReport run(const ExperimentConfig& config) {
  config.validate();
  RunReport report;
  report.directory = config.out / to_string(config.task);
  report.seeds.resize(config.seeds.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < config.seeds.size(); i = next++) report.seeds[i] = run_seed(config, config.seeds[i]);
  };
  const auto n_workers = std::min<std::size_t>(static_cast<std::size_t>(config.jobs), config.seeds.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::ostringstream summary;
  summary << summary_header(config) << '\n';
  for (const auto& s : report.seeds) {
    if (!s.ok) ++report.failures;
    for (const auto& r : s.rows) summary << r << '\n';
  }
  write_text(report.directory / "summary.csv", summary.str());

  if (config.task == Task::sweep) {
    std::vector<SweepPoint> points;
    for (const auto& s : report.seeds) {
      if (!s.ok) continue;
      const auto p = sweep_points(read_json(seed_dir(config) / (std::to_string(s.seed) + ".json")));
      points.insert(points.end(), p.begin(), p.end());
    }
    if (!points.empty())
      write_text(report.directory / "aggregate.csv",
                 csv([&](std::ostream& os) { write_aggregate_csv(os, aggregate(points)); }));
  }
  return report;
}

std::vector<SweepPoint> sweep_points(const Json& doc) {
  std::vector<SweepPoint> out;
  if (!doc.contains("targets")) return out;
  const bool degenerate = doc.at("report").at("degenerate").get<bool>();
  for (const auto& t : doc["targets"]) {
    SweepPoint p;
    p.n_sites = doc.at("sites").get<int>();
    p.seed = doc.at("seed").get<std::uint64_t>();
    p.delta = t.at("delta").get<double>();
    p.d_star = t.at("d_star").get<int>();
    p.nit = t.at("nit").get<int>();
    p.nit_normalized = t.at("nit_normalized").get<double>();
    p.degenerate = degenerate;
    p.layer_size = doc.at("layer_size").get<int>();
    out.push_back(p);
  }
  return out;
}

std::vector<AggregateRow> aggregate(const std::vector<SweepPoint>& points) {
  if (points.empty()) throw std::invalid_argument("aggregate: no results");
  std::map<std::pair<int, double>, std::vector<const SweepPoint*>> groups;
  for (const auto& p : points) groups[{p.n_sites, -p.delta}].push_back(&p);
  std::vector<AggregateRow> rows;
  for (const auto& [key, members] : groups) {
    AggregateRow r;
    r.n_sites = key.first;
    r.delta = -key.second;
    std::vector<double> d, nn, np;
    for (const SweepPoint* p : members) {
      if (p->degenerate) {
        ++r.degenerate;
      } else if (p->d_star == 0) {
        ++r.unconverged;
      } else {
        d.push_back(p->d_star);
        nn.push_back(p->nit_normalized);
        np.push_back(static_cast<double>(p->d_star * p->layer_size));
        r.max_depth = std::max(r.max_depth, p->d_star);
      }
    }
    r.used = static_cast<int>(d.size());
    if (r.used > 0) {
      const auto mean = [](const std::vector<double>& v) {
        return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
      };
      r.mean_depth = mean(d);
      r.mean_nit_normalized = mean(nn);
      r.mean_params = mean(np);
      if (r.used > 1) {
        double ss = 0.0;
        for (double x : d) ss += (x - r.mean_depth) * (x - r.mean_depth);
        r.sem_depth = std::sqrt(ss / (r.used - 1) / r.used);
      }
    }
    rows.push_back(r);
  }
  return rows;
}

std::vector<AggregateRow> aggregate(const std::filesystem::path& dir) {
  std::vector<SweepPoint> points;
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    const auto p = sweep_points(read_json(f));
    points.insert(points.end(), p.begin(), p.end());
  }
  return aggregate(points);
}

void write_aggregate_csv(std::ostream& os, const std::vector<AggregateRow>& rows) {
  os << "sites,delta,used,degenerate,unconverged,mean_depth,sem_depth,max_depth,mean_nit_normalized,mean_params\n";
  for (const auto& r : rows)
    os << row(r.n_sites, r.delta, r.used, r.degenerate, r.unconverged, r.mean_depth, r.sem_depth, r.max_depth,
              r.mean_nit_normalized, r.mean_params)
       << '\n';
}

PowerLaw fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_power_law: need two or more points");
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw std::invalid_argument("fit_power_law: values must be positive");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
  }
  const double vx = sxx - sx * sx / n;
  if (vx <= 0) throw std::invalid_argument("fit_power_law: x values coincide");
  PowerLaw fit;
  fit.exponent = (sxy - sx * sy / n) / vx;
  fit.prefactor = std::exp((sy - fit.exponent * sx) / n);
  const double vy = syy - sy * sy / n;
  fit.r2 = vy > 0 ? fit.exponent * fit.exponent * vx / vy : 1.0;
  return fit;
}

}  // namespace aim
