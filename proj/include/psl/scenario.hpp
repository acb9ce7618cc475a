#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "psl/phase_grid.hpp"

namespace psl {

struct GridSpec {
  std::size_t n = 512;
  double dt = 1.0 / 16;
  std::size_t xi_oversample = 1;
  /// Stored window; derived from the mask's bounding box when absent.
  std::optional<Window> window;
};

struct MaskSpec {
  std::string shape = "disk";  ///< disk, annulus, rectangle, almost-full or file
  PhasePoint center{};
  double radius = 1.0;        ///< disk radius, annulus outer radius
  double inner_radius = 0.0;  ///< annulus
  Window box{-1.0, 1.0, -1.0, 1.0};
  std::string file;  ///< PBM mask with its JSON sidecar; the sidecar fixes the grid
};

struct ScenarioConfig {
  std::string scenario;
  GridSpec grid;
  MaskSpec mask;
  double p = 2.0;
  std::vector<double> p_list;
  FieldKind kind = FieldKind::Wigner;
  std::optional<double> tau;
  std::vector<double> r_list, xi_list, sigma_list;
  std::uint64_t seed = 1;
  /// Number of seeded cases: signals (lieb-check), pairs (covariance-check)
  /// or trajectory families (chain-graph).
  std::size_t samples = 0;
  std::size_t restarts = 10;
  std::size_t max_iter = 2000;
  std::string output;
};

const std::vector<std::string>& scenario_names();

/// Every schema violation in `j`; empty when the config is valid. Never
/// runs any computation.
std::vector<std::string> validate_config(const nlohmann::json& j);
/// Config with the scenario's defaults filled in. Throws ConfigError.
ScenarioConfig parse_config(const nlohmann::json& j);
/// Throws FormatError when the file is unreadable or not JSON.
nlohmann::json read_config_file(const std::string& path);
/// Echo of the effective config (without the output path).
nlohmann::ordered_json config_to_json(const ScenarioConfig& c);

enum class Check {
  Info,     ///< reported only
  Match,    ///< defect <= tol
  AtMost,   ///< measured <= predicted + tol
  AtLeast,  ///< measured >= predicted - tol
  Below,    ///< measured < predicted strictly
};

struct ResultRow {
  std::string series;
  std::optional<double> value;  ///< sweep parameter, when the series is swept
  double measured = 0.0;
  double predicted = 0.0;
  double defect = 0.0;
  Check check = Check::Info;
  double tol = 0.0;
  bool pass = true;

  std::string param() const;
};

/// |measured - predicted| / max(|predicted|, 1e-12).
double relative_defect(double measured, double predicted);

struct Artifact {
  std::string name;  ///< file name inside the output directory
  std::string bytes;
};

struct RunResult {
  ScenarioConfig config;
  std::vector<ResultRow> rows;  ///< sorted by (series, value)
  bool passed = true;
  double wall_seconds = 0.0;
  std::vector<Artifact> artifacts;
};

/// Runs one scenario. Errors from the numerical modules are rethrown with
/// the scenario name prefixed, keeping their type.
RunResult run(const ScenarioConfig& config);

/// `param,measured,predicted,defect` with shortest round-trip numbers.
std::string result_csv(const RunResult& r);
/// Config echo, rows with their checks and the overall verdict. The wall
/// time is left out so that reruns are byte-identical.
nlohmann::ordered_json result_json(const RunResult& r);
/// Writes <scenario>.csv, <scenario>.json and the artifacts into `dir`;
/// returns the paths written.
std::vector<std::string> write_outputs(const RunResult& r, const std::string& dir);

}  // namespace psl
