#pragma once

// Serialization: JSON for signals, frequency sets, models and reports;
// CSV for series; flat little-endian binary plus a JSON sidecar for field
// snapshots.  All output is deterministic (fixed key order, fixed float
// formatting, no timestamps).

#include <bit>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "apde/ap_signal.hpp"
#include "apde/grid.hpp"
#include "apde/model.hpp"
#include "apde/solver.hpp"

namespace apde::io {

using ordered_json = nlohmann::ordered_json;

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// APSignal / FrequencySet
// ---------------------------------------------------------------------------

inline ordered_json to_json(const APSignal& sig) {
  ordered_json j;
  j["dims"] = sig.dims();
  ordered_json terms = ordered_json::array();
  for (const auto& [key, term] : sig.terms()) {
    ordered_json t;
    t["freq"] = term.freq;
    t["re"] = term.amp.real();
    t["im"] = term.amp.imag();
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  return j;
}

inline APSignal signal_from_json(const nlohmann::json& j, bool require_real = false) {
  if (!j.contains("dims") || !j.contains("terms"))
    throw std::invalid_argument("signal JSON needs \"dims\" and \"terms\"");
  std::vector<std::pair<std::vector<double>, std::complex<double>>> terms;
  for (const auto& t : j.at("terms")) {
    std::vector<double> f = t.at("freq").get<std::vector<double>>();
    terms.emplace_back(std::move(f),
                       std::complex<double>(t.at("re").get<double>(),
                                            t.value("im", 0.0)));
  }
  return APSignal::from_terms(j.at("dims").get<int>(), terms, require_real);
}

inline ordered_json to_json(const FrequencySet& fs) {
  ordered_json j;
  j["dims"] = fs.dims();
  ordered_json members = ordered_json::array();
  for (const auto& [key, rep] : fs.members()) members.push_back(rep);
  j["members"] = std::move(members);
  return j;
}

inline FrequencySet frequency_set_from_json(const nlohmann::json& j) {
  FrequencySet fs(j.at("dims").get<int>());
  for (const auto& m : j.at("members")) fs.insert(m.get<std::vector<double>>());
  return fs;
}

// ---------------------------------------------------------------------------
// ModelSpec
// ---------------------------------------------------------------------------

inline ordered_json to_json(const ModelSpec& spec) {
  ordered_json j;
  j["dims"] = spec.dims;
  ordered_json flux = ordered_json::array();
  for (const auto& p : spec.flux) flux.push_back(p.coeffs());
  j["flux"] = std::move(flux);
  auto matrix = [](const std::vector<std::vector<Polynomial>>& m) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : m) {
      ordered_json r = ordered_json::array();
      for (const auto& p : row) r.push_back(p.coeffs());
      rows.push_back(std::move(r));
    }
    return rows;
  };
  j["A"] = matrix(spec.diffusion_primitive);
  j["sigma"] = matrix(spec.sqrt_factors);
  j["M"] = spec.state_bound;
  j["name"] = spec.name;
  return j;
}

inline ModelSpec model_spec_from_json(const nlohmann::json& j) {
  ModelSpec spec;
  spec.dims = j.at("dims").get<int>();
  for (const auto& c : j.at("flux"))
    spec.flux.emplace_back(c.get<std::vector<double>>());
  auto matrix = [](const nlohmann::json& rows) {
    std::vector<std::vector<Polynomial>> m;
    for (const auto& row : rows) {
      std::vector<Polynomial> r;
      for (const auto& c : row) r.emplace_back(c.get<std::vector<double>>());
      m.push_back(std::move(r));
    }
    return m;
  };
  spec.diffusion_primitive = matrix(j.at("A"));
  spec.sqrt_factors = matrix(j.at("sigma"));
  spec.state_bound = j.at("M").get<double>();
  spec.name = j.value("name", std::string());
  return spec;
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

inline nlohmann::json read_json(const std::filesystem::path& path) {
  return nlohmann::json::parse(read_text(path));
}

inline void write_json(const std::filesystem::path& path, const ordered_json& j) {
  write_text(path, j.dump(1) + "\n");
}

/// Trajectory series as CSV: time,mean,l1_to_mean,l2,maxabs,dissipation_step
/// with l2 the normalized grid L2 norm sqrt(mean u^2).
inline void write_trajectory_csv(const std::filesystem::path& path,
                                 const Trajectory& traj) {
  std::string csv = "time,mean,l1_to_mean,l2,maxabs,dissipation_step\n";
  for (std::size_t n = 0; n < traj.times.size(); ++n) {
    csv += format_double(traj.times[n]);
    csv += ',';
    csv += format_double(traj.means[n]);
    csv += ',';
    csv += format_double(traj.l1_to_mean[n]);
    csv += ',';
    csv += format_double(std::sqrt(traj.second_moments[n]));
    csv += ',';
    csv += format_double(traj.max_abs[n]);
    csv += ',';
    csv += format_double(traj.dissipation_steps[n]);
    csv += '\n';
  }
  write_text(path, csv);
}

/// Field snapshots as one flat binary file (64-bit little-endian floats,
/// row-major, frames concatenated) plus a JSON sidecar describing the grid
/// and the frame times.
inline void write_field_snapshots(const std::filesystem::path& bin_path,
                                  const std::filesystem::path& sidecar_path,
                                  const Trajectory& traj) {
  static_assert(std::endian::native == std::endian::little,
                "little-endian host required for the snapshot format");
  std::ofstream out(bin_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + bin_path.string());
  for (const Field& f : traj.snapshots)
    out.write(reinterpret_cast<const char*>(f.values.data()),
              static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (!out) throw std::runtime_error("write failed for " + bin_path.string());

  ordered_json side;
  side["dims"] = traj.config.grid.dims;
  side["lengths"] = traj.config.grid.lengths;
  side["cells"] = traj.config.grid.cells;
  side["layout"] = "row-major";
  side["dtype"] = "float64";
  side["byte_order"] = "little-endian";
  side["file"] = bin_path.filename().string();
  side["times"] = traj.snapshot_times;
  write_json(sidecar_path, side);
}

}  // namespace apde::io
