#include "slowlight/io.hpp"

#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <stdexcept>

#include "slowlight/version.hpp"

namespace slowlight {

using nlohmann::json;

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::vector<std::string>& header)
    : out_(path), columns_(header.size()) {
  if (!out_) throw std::runtime_error("could not open '" + path.string() + "' for writing");
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out_ << ",";
    out_ << header[i];
  }
  out_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_)
    throw std::invalid_argument("CsvWriter: column count mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ",";
    out_ << format_double(values[i]);
  }
  out_ << "\n";
}

void CsvWriter::row_mixed(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw std::invalid_argument("CsvWriter: column count mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ",";
    out_ << cells[i];
  }
  out_ << "\n";
}

namespace {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json profile_to_json(const ProfileSpec& p) {
  json j;
  j["kind"] = to_string(p.kind);
  switch (p.kind) {
    case ProfileKind::uniform:
      j["value"] = p.value;
      break;
    case ProfileKind::step:
    case ProfileKind::tanh_ramp:
    case ProfileKind::linear_ramp:
      j["left"] = p.left;
      j["right"] = p.right;
      j["center"] = p.center;
      j["width"] = p.width;
      break;
    case ProfileKind::table:
      j["table_z"] = p.table_z;
      j["table_value"] = p.table_value;
      break;
  }
  return j;
}

json config_to_json(const RunConfig& cfg) {
  json j;
  j["run"] = {{"scenario", to_string(cfg.scenario)},
              {"out", cfg.out_dir},
              {"check", cfg.check}};
  j["medium"] = {{"omega0", cfg.medium.omega0},
                 {"epsilon", cfg.medium.epsilon},
                 {"c", cfg.medium.constants.c},
                 {"hbar", cfg.medium.constants.hbar}};
  j["flow"] = profile_to_json(cfg.flow);
  j["group_velocity"] = profile_to_json(cfg.group_velocity);
  j["grid"] = {{"z_min", cfg.grid.z_min},
               {"z_max", cfg.grid.z_max},
               {"n", cfg.grid.n}};
  j["packet"] = {{"center", cfg.packet.center},
                 {"sigma", cfg.packet.sigma},
                 {"branch", to_string(cfg.packet.branch)},
                 {"detuning_mode", to_string(cfg.packet.mode)},
                 {"detuning", cfg.packet.detuning},
                 {"detuning_scale", cfg.packet.detuning_scale}};
  j["ray"] = {{"dt", cfg.ray.dt},
              {"rel_tol", cfg.ray.rel_tol},
              {"adaptive", cfg.ray.adaptive},
              {"max_steps", cfg.ray.max_steps},
              {"event_refine_tol", cfg.ray.event_refine_tol},
              {"max_turning_events", cfg.ray.max_turning_events},
              {"t_end",
               std::isfinite(cfg.ray.t_end) ? json(cfg.ray.t_end) : json(nullptr)},
              {"max_dt", cfg.ray.max_dt}};
  j["wave"] = {{"dt", cfg.wave.dt},
               {"t_end", cfg.wave.t_end},
               {"sample_every", cfg.wave.sample_every},
               {"stepper", to_string(cfg.wave.stepper)},
               {"boundary", to_string(cfg.wave.boundary)},
               {"mask_width", cfg.wave.mask_width},
               {"snapshot_every", cfg.wave.snapshot_every}};
  json branches = json::array();
  for (Branch b : cfg.dispersion.branches) branches.push_back(to_string(b));
  j["dispersion"] = {{"u_min", cfg.dispersion.u_min},
                     {"u_max", cfg.dispersion.u_max},
                     {"u_count", cfg.dispersion.u_count},
                     {"deltas", cfg.dispersion.deltas},
                     {"branches", branches}};
  j["sweep"] = {{"axis", to_string(cfg.sweep.axis)},
                {"from", cfg.sweep.from},
                {"to", cfg.sweep.to},
                {"count", cfg.sweep.count}};
  j["scenario_extras"] = {{"bounce_scale", cfg.extras.bounce_scale}};
  return j;
}

void dump_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("could not open '" + path.string() + "' for writing");
  out << j.dump(2) << "\n";
}

}  // namespace

void write_manifest(const std::filesystem::path& path, const RunConfig& config,
                    const ManifestDerived& derived) {
  json j;
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  j["timestamp_utc"] = utc_timestamp();
  j["config"] = config_to_json(config);
  j["config_text"] = serialize_config(config);
  j["derived"] = {{"k0", derived.k0},
                  {"kappa", derived.kappa},
                  {"mass_report", derived.mass_report},
                  {"detuning", derived.detuning},
                  {"packet_k_carrier", derived.packet_k_carrier},
                  {"realized_bandwidth_hz", derived.realized_bandwidth_hz},
                  {"wave_dt", derived.wave_dt}};
  dump_json(path, j);
}

void write_ray_csv(const std::filesystem::path& path,
                   const RayTrajectory& trajectory) {
  CsvWriter csv(path, {"t", "z", "k", "omega_drift"});
  for (const RaySample& s : trajectory.samples)
    csv.row({s.t, s.z, s.k, s.omega_drift});
}

void write_ray_events_json(const std::filesystem::path& path,
                           const RayTrajectory& trajectory) {
  json events = json::array();
  for (const RayEvent& e : trajectory.events)
    events.push_back({{"kind", to_string(e.kind)},
                      {"t", e.t},
                      {"z", e.z},
                      {"k", e.k}});
  json j;
  j["omega"] = trajectory.omega;
  j["max_omega_drift"] = trajectory.max_omega_drift;
  j["stop_reason"] = to_string(trajectory.stop);
  j["events"] = events;
  dump_json(path, j);
}

void write_observables_csv(const std::filesystem::path& path,
                           const ObservableSeries& series) {
  CsvWriter csv(path, {"t", "norm", "centroid", "rms_width",
                       "reflected_fraction", "transmitted_fraction"});
  for (const ObservableRow& r : series.rows)
    csv.row({r.t, r.norm, r.centroid, r.rms_width, r.reflected_fraction,
             r.transmitted_fraction});
}

SnapshotWriter::SnapshotWriter(const std::filesystem::path& path,
                               const Grid1D& grid)
    : out_(path), z_(grid.points()) {
  if (!out_) throw std::runtime_error("could not open '" + path.string() + "' for writing");
  out_ << "[";
}

void SnapshotWriter::add(const FieldState& state) {
  if (!first_) out_ << ",";
  first_ = false;
  out_ << "\n  {\"t\": " << format_double(state.t) << ", \"z\": [";
  for (Eigen::Index j = 0; j < z_.size(); ++j) {
    if (j) out_ << ",";
    out_ << format_double(z_[j]);
  }
  out_ << "], \"re\": [";
  for (Eigen::Index j = 0; j < state.psi.size(); ++j) {
    if (j) out_ << ",";
    out_ << format_double(state.psi[j].real());
  }
  out_ << "], \"im\": [";
  for (Eigen::Index j = 0; j < state.psi.size(); ++j) {
    if (j) out_ << ",";
    out_ << format_double(state.psi[j].imag());
  }
  out_ << "]}";
}

SnapshotWriter::~SnapshotWriter() {
  out_ << "\n]\n";
}

}  // namespace slowlight
