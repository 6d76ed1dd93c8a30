#pragma once

#include <complex>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "aim/ansatz.hpp"
#include "aim/correlator.hpp"
#include "aim/greens.hpp"
#include "aim/measure.hpp"
#include "aim/model.hpp"
#include "aim/sim.hpp"
#include "aim/vqe.hpp"

namespace aim {

using Json = nlohmann::ordered_json;

Json to_json(const AimParams& p);
/// Throws std::invalid_argument for missing fields or inconsistent shapes.
AimParams params_from_json(const Json& j);

Json to_json(const Sector& s);
Sector sector_from_json(const Json& j);

Json to_json(const Topology& t);
Json to_json(const Gate& g);
Json to_json(const Circuit& c);
Json to_json(const MeasPlan& plan);
Json to_json(const EnergyEstimate& e);
Json to_json(const EdResult& ed);
Json to_json(const VqeResult& r);
Json to_json(const GroundSearchReport& r);
Json to_json(const LanczosChain& c);
/// Header of a frequency series: eta, norms, chains and provenance.
Json gf_header(const GfSamples& g);

Json to_json(const CorrelatorSpec& spec);
CorrelatorSpec spec_from_json(const Json& j);
Json to_json(const CorrelatorResult& r);

/// omega,re,im
void write_gf_csv(std::ostream& os, const GfSamples& g);
/// omega,exact_re,exact_im,var_re,var_im on a shared grid.
void write_gf_pair_csv(std::ostream& os, const GfSamples& exact, const GfSamples& var);
/// t,re,im
void write_series_csv(std::ostream& os, const std::vector<double>& t, const std::vector<std::complex<double>>& values);
/// term,coefficient,estimate,variance,kept_fraction
void write_estimate_csv(std::ostream& os, const EnergyEstimate& e);

/// Little-endian (re, im) double pairs, no header.
void write_amplitudes(const std::filesystem::path& path, const State& state);
State read_amplitudes(const std::filesystem::path& path, int n_qubits);

Json read_json(const std::filesystem::path& path);
/// Creates parent directories as needed.
void write_json(const std::filesystem::path& path, const Json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace aim
