#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "slowlight/config.hpp"
#include "slowlight/io.hpp"
#include "slowlight/ray.hpp"
#include "slowlight/wave.hpp"

namespace slowlight {

/// One reported scenario quantity with its provenance layer.
struct ReportQuantity {
  std::string name;
  double value = 0.0;
  std::string unit;
  std::string provenance;  ///< "analytic" | "ray" | "wave"
};

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ScenarioReport {
  ScenarioName scenario = ScenarioName::none;
  std::vector<ReportQuantity> quantities;
  std::vector<CheckResult> checks;   ///< populated when config.check is set
  std::vector<std::string> files;    ///< data files written to the run dir
  bool all_checks_passed() const;
};

void write_report_json(const std::filesystem::path& path,
                       const ScenarioReport& report);

/// Least-squares slope of centroid(t) over the rows whose centroid lies in
/// [z_lo, z_hi]. Returns nullopt when fewer than two rows qualify.
std::optional<double> fit_centroid_velocity(const ObservableSeries& series,
                                            double z_lo, double z_hi);

/// First z (scanning from z_hi toward z_lo) where profile(z) crosses
/// `target`, refined by bisection. Returns nullopt if no crossing exists in
/// the scan range.
std::optional<double> profile_crossing(const Profile& profile, double target,
                                       double z_lo, double z_hi);

/// Run a scenario into out_dir (created if needed): writes manifest.json
/// first, then the data CSV/JSON files, then report.json. When config.check
/// is set the report's checks are evaluated; failures are recorded, not
/// thrown.
ScenarioReport run_scenario(const RunConfig& config,
                            const std::filesystem::path& out_dir);

ScenarioReport run_figure1(const RunConfig& config,
                           const std::filesystem::path& out_dir);
ScenarioReport run_figure2a(const RunConfig& config,
                            const std::filesystem::path& out_dir);
ScenarioReport run_figure2b(const RunConfig& config,
                            const std::filesystem::path& out_dir);
ScenarioReport run_figure3(const RunConfig& config,
                           const std::filesystem::path& out_dir);
ScenarioReport run_sonar(const RunConfig& config,
                         const std::filesystem::path& out_dir);

/// Derived-quantities block of the run manifest (launch carrier, effective
/// operator scales, resolved detuning, realized bandwidth, wave time step).
ManifestDerived compute_derived(const RunConfig& config);

}  // namespace slowlight
