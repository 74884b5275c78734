#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "telent/estimators.hpp"

namespace telent {

enum class Scenario { Fig1, Fig2, Fig3, Fig4, Custom };
enum class OutputFormat { Csv, Json };

Scenario parse_scenario(const std::string& name);
std::string to_string(Scenario s);

/// start:stop:step, inclusive of stop up to rounding.
struct Grid {
  double start = 0.0;
  double stop = 1.0;
  double step = 0.1;

  static Grid parse(const std::string& text);
  std::vector<double> values() const;
};

struct SweepConfig {
  Scenario scenario = Scenario::Custom;
  /// flag | isotropic | horodecki; presets fix their own family.
  std::optional<std::string> state;
  std::optional<Grid> grid;
  /// bsm | partial-bsm
  std::optional<std::string> measurement;
  /// pauli6 | pauli4-xz | random:d:seed
  std::optional<std::string> inputs;
  /// ppt | symK; default depends on the local dimensions.
  std::optional<std::string> relaxation;
  double tol = 1e-8;
  std::uint64_t seed = 1;
  /// Empty: CSV to the stream given to run_sweep, no sidecar.
  std::filesystem::path out;
  OutputFormat format = OutputFormat::Csv;
  int jobs = 1;
};

struct SweepRow {
  double parameter = 0.0;
  std::map<std::string, double> values;
  std::string status;
  nlohmann::json reports = nlohmann::json::array();
};

struct SweepResult {
  std::string parameter_name;
  std::vector<std::string> columns;  // full CSV header, parameter first and status last
  std::vector<SweepRow> rows;
  int failed_points = 0;
};

DensityMatrix make_state(const std::string& family, double parameter);
/// Local dimension of a state family.
int family_dimension(const std::string& family);
std::string family_parameter_name(const std::string& family);
Povm make_measurement(const std::string& name, int d);
InputEnsemble make_inputs(const std::string& spec, int d);

/// Fills preset defaults and validates; throws std::invalid_argument on a bad configuration.
SweepConfig resolve(const SweepConfig& cfg);

/// Evaluates every grid point; CSV rows are written (and flushed) in grid order as they complete.
/// `csv_fallback` receives the CSV when cfg.out is empty.
SweepResult run_sweep(const SweepConfig& cfg, std::ostream& csv_fallback);

nlohmann::json sweep_to_json(const SweepConfig& cfg, const SweepResult& result);

/// Classicality, negativity bound, all teleportation robustness variants and teleportation weight.
nlohmann::json certify(const TeleportationAssemblage& asm_, const std::optional<std::string>& relaxation,
                       double tol = 1e-8);

}  // namespace telent
