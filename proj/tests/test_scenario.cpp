#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "slowlight/config.hpp"
#include "slowlight/errors.hpp"
#include "slowlight/scenario.hpp"
#include "test_util.hpp"

using namespace slowlight;
using nlohmann::json;
using testutil::close_abs;
using testutil::close_rel;
using testutil::TempDir;

namespace {

RunConfig checked_config(ScenarioName name, double resolution_scale) {
  RunConfig cfg = default_run_config(name);
  cfg.check = true;
  if (resolution_scale != 1.0) apply_resolution_scale(cfg, resolution_scale);
  return cfg;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void require_all_checks(const ScenarioReport& report) {
  for (const CheckResult& c : report.checks) {
    INFO(c.name, ": ", c.detail);
    CHECK(c.pass);
  }
  CHECK(report.all_checks_passed());
}

}  // namespace

TEST_CASE("centroid velocity fit recovers a linear drift") {
  ObservableSeries series;
  for (int i = 0; i <= 10; ++i) {
    ObservableRow row;
    row.t = 1.0e-4 * i;
    row.centroid = 3.0e-3 - 1.5 * row.t;
    series.rows.push_back(row);
  }
  const auto v = fit_centroid_velocity(series, 0.0, 1.0);
  REQUIRE(v.has_value());
  CHECK(close_rel(*v, -1.5, 1e-12));

  // Window with fewer than two qualifying rows.
  CHECK_FALSE(fit_centroid_velocity(series, 2.9e-3, 2.905e-3).has_value());
}

TEST_CASE("profile crossing finds the level set nearest the scan start") {
  const Profile ramp = Profile::tanh_ramp(298.48, 298.5, 2.0e-3, 1.0e-4);
  const double target = 298.496231131986;  // turning flow speed
  const auto z = profile_crossing(ramp, target, 0.0, 4.0e-3);
  REQUIRE(z.has_value());
  // Analytic inverse of the tanh ramp.
  const double expected =
      2.0e-3 + 1.0e-4 * std::atanh((target - 298.49) / 0.01);
  CHECK(close_abs(*z, expected, 1e-9));
  CHECK_FALSE(profile_crossing(ramp, 299.0, 0.0, 4.0e-3).has_value());
}

TEST_CASE("figure1 dispersion landscape passes its checks") {
  TempDir dir{"fig1"};
  const ScenarioReport report =
      run_scenario(checked_config(ScenarioName::figure1, 1.0), dir.path());
  require_all_checks(report);
  CHECK(std::filesystem::exists(dir.path() / "figure1.csv"));
}

TEST_CASE("figure2a counterpropagating speed-up passes its checks") {
  TempDir dir{"fig2a"};
  const ScenarioReport report =
      run_scenario(checked_config(ScenarioName::figure2a, 0.25), dir.path());
  require_all_checks(report);
}

TEST_CASE("figure2b bounce passes its checks") {
  TempDir dir{"fig2b"};
  const ScenarioReport report =
      run_scenario(checked_config(ScenarioName::figure2b, 0.25), dir.path());
  require_all_checks(report);
}

TEST_CASE("figure3 freeze and bounce pass their checks") {
  TempDir dir{"fig3"};
  const ScenarioReport report =
      run_scenario(checked_config(ScenarioName::figure3, 0.125), dir.path());
  require_all_checks(report);
}

TEST_CASE("sonar sweep passes its checks and steps at the analytic threshold") {
  TempDir dir{"sonar"};
  const ScenarioReport report =
      run_scenario(checked_config(ScenarioName::sonar, 1.0), dir.path());
  require_all_checks(report);

  // sweep.csv: header + one row per amplitude; reflection switches on once.
  std::ifstream in(dir.path() / "sweep.csv");
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);  // header
  int transitions = 0;
  bool prev = false, first = true;
  double first_reflecting = -1.0;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string amp_s, has_s;
    std::getline(row, amp_s, ',');
    std::getline(row, has_s, ',');
    const bool has = has_s.find('1') != std::string::npos;
    if (!first && has != prev) ++transitions;
    if (has && first_reflecting < 0.0) first_reflecting = std::stod(amp_s);
    prev = has;
    first = false;
  }
  CHECK(transitions == 1);
  // Closed form puts the threshold at 3.769e-3 m/s: the 1e-3-spaced sweep
  // first reflects at 4e-3.
  CHECK(close_rel(first_reflecting, 4.0e-3, 1e-12));
}

TEST_CASE("report json carries quantities, checks and the file list") {
  TempDir dir{"report"};
  const ScenarioReport report =
      run_scenario(checked_config(ScenarioName::figure1, 1.0), dir.path());

  const json doc = json::parse(read_file(dir.path() / "report.json"));
  CHECK(doc.at("scenario") == "figure1");
  CHECK(doc.at("quantities").size() == report.quantities.size());
  CHECK(doc.at("checks").size() == report.checks.size());
  for (const auto& q : doc.at("quantities")) {
    CHECK(q.contains("name"));
    CHECK(q.contains("value"));
    CHECK(q.contains("unit"));
    CHECK(q.contains("provenance"));
  }
  for (const auto& c : doc.at("checks")) {
    CHECK(c.contains("name"));
    CHECK(c.at("pass").is_boolean());
  }
  // Every listed file exists; the manifest leads and the report closes.
  const auto& files = doc.at("files");
  REQUIRE(files.size() >= 2);
  CHECK(files.front() == "manifest.json");
  CHECK(files.back() == "report.json");
  for (const auto& f : files)
    CHECK(std::filesystem::exists(dir.path() / f.get<std::string>()));
}

TEST_CASE("scenario runs are deterministic byte for byte") {
  RunConfig cfg = checked_config(ScenarioName::figure2b, 0.125);
  TempDir a{"det-a"}, b{"det-b"};
  run_scenario(cfg, a.path());
  run_scenario(cfg, b.path());
  int compared = 0;
  for (const auto& entry : std::filesystem::directory_iterator(a.path())) {
    if (entry.path().extension() != ".csv") continue;
    ++compared;
    CHECK(read_file(entry.path()) ==
          read_file(b.path() / entry.path().filename()));
  }
  CHECK(compared >= 2);
}

TEST_CASE("running the null scenario is a config error") {
  TempDir dir{"none-scenario"};
  const RunConfig cfg = default_run_config(ScenarioName::none);
  CHECK_THROWS_AS((void)run_scenario(cfg, dir.path()), ConfigError);
}
