#include "aim/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace aim {

namespace {

Json matrix(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::MatrixXd matrix_from(const Json& j, Eigen::Index rows, Eigen::Index cols, const char* name) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows)
    throw std::invalid_argument(std::string("AimParams: bad row count for ") + name);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw std::invalid_argument(std::string("AimParams: bad column count for ") + name);
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = row[static_cast<std::size_t>(k)].get<double>();
  }
  return m;
}

Eigen::VectorXd vector_from(const Json& j, Eigen::Index n, const char* name) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n)
    throw std::invalid_argument(std::string("AimParams: bad length for ") + name);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

Json complex(std::complex<double> z) { return Json::array({z.real(), z.imag()}); }

Json edges(const std::vector<Edge>& es) {
  Json out = Json::array();
  for (const auto& e : es) out.push_back(Json::array({e.a, e.b}));
  return out;
}

std::string pauli_label(const PauliString& p) {
  std::string s;
  const Basis bits = p.x | p.z;
  for (int q = 0; q < 64; ++q) {
    if (!((bits >> q) & 1)) continue;
    const bool x = (p.x >> q) & 1, z = (p.z >> q) & 1;
    s += x && z ? 'Y' : (x ? 'X' : 'Z');
    s += std::to_string(q);
  }
  return s.empty() ? "I" : s;
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

Json to_json(const AimParams& p) {
  Json j;
  j["n_imp"] = p.n_imp;
  j["n_bath"] = p.n_bath;
  j["h"] = matrix(p.h);
  j["U"] = vector(p.U);
  j["V"] = matrix(p.V);
  j["eps"] = vector(p.eps);
  if (p.seed) j["seed"] = *p.seed;
  return j;
}

AimParams params_from_json(const Json& j) {
  for (const char* key : {"n_imp", "n_bath", "h", "U", "V", "eps"})
    if (!j.contains(key)) throw std::invalid_argument(std::string("AimParams: missing field ") + key);
  AimParams p;
  p.n_imp = j.at("n_imp").get<int>();
  p.n_bath = j.at("n_bath").get<int>();
  if (p.n_imp < 1 || p.n_bath < 0) throw std::invalid_argument("AimParams: bad site counts");
  p.h = matrix_from(j.at("h"), p.n_imp, p.n_imp, "h");
  p.U = vector_from(j.at("U"), p.n_imp, "U");
  // an empty V has no rows to carry its column count
  p.V = p.n_bath == 0 ? Eigen::MatrixXd::Zero(p.n_imp, 0) : matrix_from(j.at("V"), p.n_imp, p.n_bath, "V");
  p.eps = vector_from(j.at("eps"), p.n_bath, "eps");
  if (j.contains("seed")) p.seed = j.at("seed").get<std::uint64_t>();
  p.validate();
  return p;
}

Json to_json(const Sector& s) { return {{"N", s.n_total}, {"Sz", s.s_z}}; }

Sector sector_from_json(const Json& j) { return {j.at("N").get<int>(), j.at("Sz").get<int>()}; }

Json to_json(const Topology& t) {
  Json nodes = Json::array();
  for (const auto& n : t.nodes)
    nodes.push_back({{"qubit", n.qubit},
                     {"site", n.site},
                     {"spin", n.spin == 0 ? "up" : "down"},
                     {"role", n.impurity ? "impurity" : "bath"}});
  Json es = Json::array();
  for (const auto& e : t.givens) es.push_back({{"a", e.a}, {"b", e.b}, {"gate", "givens"}});
  for (const auto& e : t.zz) es.push_back({{"a", e.a}, {"b", e.b}, {"gate", "zz"}});
  return {{"n_imp", t.n_imp}, {"n_bath", t.n_bath}, {"mode", to_string(t.mode)}, {"nodes", nodes}, {"edges", es}};
}

Json to_json(const Gate& g) {
  Json j{{"kind", to_string(g.kind)}, {"qubits", g.qubits}};
  switch (g.kind) {
    case GateKind::Rz:
    case GateKind::Givens:
    case GateKind::ZZ:
    case GateKind::Evolve: j["param"] = g.param; break;
    case GateKind::Project: j["outcome"] = g.outcome; break;
    case GateKind::ControlledPauliString: {
      Json controls = Json::array();
      for (auto [q, v] : g.controls) controls.push_back(Json::array({q, v}));
      j["controls"] = controls;
      j["pauli"] = pauli_label(g.pauli);
      break;
    }
    default: break;
  }
  if (g.param_index >= 0) j["param_index"] = g.param_index;
  return j;
}

Json to_json(const Circuit& c) {
  Json gs = Json::array();
  for (const auto& g : c.gates) gs.push_back(to_json(g));
  return {{"n_qubits", c.n_qubits}, {"gates", gs}};
}

Json to_json(const MeasPlan& plan) {
  Json circuits = Json::array();
  for (const auto& c : plan.circuits) circuits.push_back({{"rotated_pairs", edges(c.rotated_pairs)}, {"terms", c.terms}});
  Json terms = Json::array();
  for (const auto& t : plan.terms) {
    Json tj{{"label", t.label}, {"coeff", t.coeff}, {"circuit", t.circuit}, {"hopping", t.hopping}};
    if (t.hopping) tj["pair"] = Json::array({t.pair.a, t.pair.b});
    tj["z_mask"] = t.z_mask;
    terms.push_back(std::move(tj));
  }
  return {{"n_qubits", plan.n_qubits}, {"constant", plan.constant}, {"circuits", circuits}, {"terms", terms}};
}

Json to_json(const EnergyEstimate& e) {
  Json terms = Json::array();
  for (const auto& t : e.terms)
    terms.push_back({{"label", t.label},
                     {"coeff", t.coeff},
                     {"estimate", t.estimate},
                     {"variance", t.variance},
                     {"kept_fraction", t.kept_fraction}});
  return {{"energy", e.energy},
          {"variance", e.variance},
          {"per_shot_variance", e.per_shot_variance},
          {"kept_fraction", e.kept_fraction},
          {"terms", terms}};
}

Json to_json(const EdResult& ed) {
  Json sectors = Json::array();
  for (const auto& s : ed.spectra)
    if (s.energies.size() > 0)
      sectors.push_back({{"sector", to_json(s.sector)}, {"dim", s.basis.size()}, {"lowest", s.energies[0]}});
  return {{"ground_energy", ed.ground_energy},
          {"ground_sector", to_json(ed.ground_sector)},
          {"degenerate", ed.degenerate},
          {"gap", ed.gap},
          {"sectors", sectors}};
}

Json to_json(const VqeResult& r) {
  Json j{{"sector", to_json(r.sector)}, {"depth", r.depth}, {"energy", r.energy}};
  j["theta"] = std::vector<double>(r.theta.data(), r.theta.data() + r.theta.size());
  j["nit"] = r.nit;
  j["n_fev"] = r.n_fev;
  j["overlap_error"] = std::isfinite(r.overlap_error) ? Json(r.overlap_error) : Json();
  j["restarts_used"] = r.restarts_used;
  j["converged"] = r.converged;
  return j;
}

Json to_json(const GroundSearchReport& r) {
  Json sectors = Json::array();
  for (const auto& s : r.sectors) sectors.push_back(to_json(s));
  Json trace = Json::array();
  for (const auto& d : r.trace)
    trace.push_back({{"depth", d.depth},
                     {"best_sector", to_json(d.best_sector)},
                     {"energy", d.energy},
                     {"delta", d.delta},
                     {"nit", d.nit}});
  return {{"winning_sector", to_json(r.winning_sector)},
          {"energy", r.energy},
          {"delta", r.delta},
          {"d_star", r.d_star},
          {"nit", r.nit},
          {"ed_energy", r.ed_energy},
          {"ed_sector", to_json(r.ed_sector)},
          {"degenerate", r.degenerate},
          {"trace", trace},
          {"sectors", sectors}};
}

Json to_json(const LanczosChain& c) {
  return {{"a", c.a}, {"b", c.b}, {"termination", to_string(c.termination)}};
}

Json gf_header(const GfSamples& g) {
  return {{"eta", g.eta},
          {"norm_plus", g.norm_plus},
          {"norm_minus", g.norm_minus},
          {"chain_plus", to_json(g.chain_plus)},
          {"chain_minus", to_json(g.chain_minus)},
          {"provenance", g.provenance},
          {"n_omega", g.omega.size()}};
}

Json to_json(const CorrelatorSpec& spec) {
  Json ops = Json::array();
  for (const auto& op : spec.ops) ops.push_back({{"orbital", op.orbital}, {"dagger", op.dagger}, {"t", op.t}});
  return {{"ops", ops}};
}

CorrelatorSpec spec_from_json(const Json& j) {
  CorrelatorSpec s;
  for (const auto& op : j.at("ops"))
    s.ops.push_back({op.at("orbital").get<int>(), op.at("dagger").get<bool>(), op.at("t").get<double>()});
  return s;
}

Json to_json(const CorrelatorResult& r) {
  Json j{{"value", complex(r.value)}, {"g_tilde", complex(r.g_tilde)}, {"norms", r.norms}};
  j["aborted_at"] = r.aborted_at ? Json(*r.aborted_at) : Json();
  j["mode"] = to_string(r.mode);
  j["phase_error"] = r.phase_error;
  return j;
}

void write_gf_csv(std::ostream& os, const GfSamples& g) {
  os << "omega,re,im\n";
  for (std::size_t i = 0; i < g.omega.size(); ++i)
    os << num(g.omega[i]) << ',' << num(g.values[i].real()) << ',' << num(g.values[i].imag()) << '\n';
}

void write_gf_pair_csv(std::ostream& os, const GfSamples& exact, const GfSamples& var) {
  if (exact.omega != var.omega) throw std::invalid_argument("write_gf_pair_csv: grids differ");
  os << "omega,exact_re,exact_im,var_re,var_im\n";
  for (std::size_t i = 0; i < exact.omega.size(); ++i)
    os << num(exact.omega[i]) << ',' << num(exact.values[i].real()) << ',' << num(exact.values[i].imag()) << ','
       << num(var.values[i].real()) << ',' << num(var.values[i].imag()) << '\n';
}

void write_series_csv(std::ostream& os, const std::vector<double>& t, const std::vector<std::complex<double>>& values) {
  if (t.size() != values.size()) throw std::invalid_argument("write_series_csv: length mismatch");
  os << "t,re,im\n";
  for (std::size_t i = 0; i < t.size(); ++i)
    os << num(t[i]) << ',' << num(values[i].real()) << ',' << num(values[i].imag()) << '\n';
}

void write_estimate_csv(std::ostream& os, const EnergyEstimate& e) {
  os << "term,coefficient,estimate,variance,kept_fraction\n";
  for (const auto& t : e.terms)
    os << t.label << ',' << num(t.coeff) << ',' << num(t.estimate) << ',' << num(t.variance) << ','
       << num(t.kept_fraction) << '\n';
}

void write_amplitudes(const std::filesystem::path& path, const State& state) {
  static_assert(std::endian::native == std::endian::little, "amplitude export assumes a little-endian host");
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_amplitudes: cannot open " + path.string());
  for (const auto& a : state.amplitudes()) {
    const double pair[2] = {a.real(), a.imag()};
    os.write(reinterpret_cast<const char*>(pair), sizeof pair);
  }
}

State read_amplitudes(const std::filesystem::path& path, int n_qubits) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_amplitudes: cannot open " + path.string());
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  Eigen::VectorXcd amps(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    double pair[2];
    if (!is.read(reinterpret_cast<char*>(pair), sizeof pair)) throw std::runtime_error("read_amplitudes: short file");
    amps[i] = {pair[0], pair[1]};
  }
  if (is.peek() != std::char_traits<char>::eof()) throw std::runtime_error("read_amplitudes: trailing data");
  return State(n_qubits, std::move(amps));
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return Json::parse(is);
}

void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

}  // namespace aim
