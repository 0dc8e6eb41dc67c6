#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "slowlight/config.hpp"
#include "slowlight/format.hpp"
#include "slowlight/ray.hpp"
#include "slowlight/wave.hpp"

namespace slowlight {

/// Minimal CSV writer: header fixed at construction, one row per call.
/// Numeric cells use format_double, so identical inputs produce byte-
/// identical files.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path,
            const std::vector<std::string>& header);

  void row(const std::vector<double>& values);
  void row_mixed(const std::vector<std::string>& cells);

 private:
  std::ofstream out_;
  std::size_t columns_;
};

/// Derived quantities reported in the run manifest.
struct ManifestDerived {
  double k0 = 0.0;
  double kappa = 0.0;
  double mass_report = 0.0;
  double detuning = 0.0;
  double packet_k_carrier = 0.0;
  double realized_bandwidth_hz = 0.0;
  double wave_dt = 0.0;
};

/// Write manifest.json: tool name/version, UTC timestamp, the resolved
/// configuration, and derived quantities. Written before any data file so a
/// crashed run still identifies itself.
void write_manifest(const std::filesystem::path& path, const RunConfig& config,
                    const ManifestDerived& derived);

void write_ray_csv(const std::filesystem::path& path,
                   const RayTrajectory& trajectory);
void write_ray_events_json(const std::filesystem::path& path,
                           const RayTrajectory& trajectory);
void write_observables_csv(const std::filesystem::path& path,
                           const ObservableSeries& series);

/// Streaming JSON sink for wave snapshots {t, z[], re[], im[]}; the file is
/// finalized on destruction.
class SnapshotWriter {
 public:
  SnapshotWriter(const std::filesystem::path& path, const Grid1D& grid);
  ~SnapshotWriter();

  void add(const FieldState& state);

 private:
  std::ofstream out_;
  Eigen::ArrayXd z_;
  bool first_ = true;
};

}  // namespace slowlight
