#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "telent/assemblage_io.hpp"
#include "telent/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitInvariant = 3;
constexpr int kExitAllFailed = 4;

struct ExportArgs {
  std::string state = "flag:1";
  std::string measurement = "bsm";
  std::optional<std::string> inputs;
  std::string out;
};

telent::TeleportationAssemblage build_export(const ExportArgs& a) {
  const auto colon = a.state.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("--state must look like family:parameter");
  const std::string family = a.state.substr(0, colon);
  double param = 0.0;
  try {
    std::size_t used = 0;
    param = std::stod(a.state.substr(colon + 1), &used);
    if (used != a.state.size() - colon - 1) throw std::invalid_argument("trailing text");
  } catch (const std::exception&) {
    throw std::invalid_argument("--state parameter is not a number: '" + a.state + "'");
  }
  const int d = telent::family_dimension(family);
  const std::string inputs = a.inputs ? *a.inputs : (d == 2 ? "pauli6" : "random:3:1");
  return telent::generate_assemblage(telent::make_state(family, param), telent::make_measurement(a.measurement, d),
                                     telent::make_inputs(inputs, d));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement quantifiers from teleportation data"};
  app.require_subcommand(1);

  telent::SweepConfig cfg;
  std::string scenario = "custom", grid, format = "csv", state, measurement, inputs, relaxation, out;
  auto* sweep = app.add_subcommand("sweep", "Parameter sweep written as CSV with a JSON sidecar");
  sweep->add_option("--scenario", scenario, "fig1|fig2|fig3|fig4|custom")->capture_default_str();
  sweep->add_option("--grid", grid, "start:stop:step");
  sweep->add_option("--state", state, "flag|isotropic|horodecki (custom scenario)");
  sweep->add_option("--measurement", measurement, "bsm|partial-bsm");
  sweep->add_option("--inputs", inputs, "pauli6|pauli4-xz|random:d:seed");
  sweep->add_option("--relaxation", relaxation, "ppt|sym2|sym3|...");
  sweep->add_option("--tol", cfg.tol, "Solver tolerance")->capture_default_str();
  sweep->add_option("--seed", cfg.seed, "Seed for random input ensembles")->capture_default_str();
  sweep->add_option("--out", out, "Output path (CSV to stdout when omitted)");
  sweep->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  sweep->add_option("--jobs", cfg.jobs, "Grid points evaluated concurrently")->capture_default_str();

  std::string cert_file, cert_relaxation;
  double cert_tol = 1e-8;
  auto* cert = app.add_subcommand("certify", "Run every assemblage quantifier on a JSON assemblage");
  cert->add_option("file", cert_file, "Assemblage JSON")->required();
  cert->add_option("--relaxation", cert_relaxation, "ppt|sym2|sym3|...");
  cert->add_option("--tol", cert_tol, "Solver tolerance")->capture_default_str();

  ExportArgs ex;
  std::string ex_inputs;
  auto* exp = app.add_subcommand("export", "Write a simulated assemblage as JSON");
  exp->add_option("--state", ex.state, "family:parameter, e.g. flag:0.5")->capture_default_str();
  exp->add_option("--measurement", ex.measurement, "bsm|partial-bsm")->capture_default_str();
  exp->add_option("--inputs", ex_inputs, "pauli6|pauli4-xz|random:d:seed");
  exp->add_option("--out", ex.out, "Output path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (sweep->parsed()) {
      cfg.scenario = telent::parse_scenario(scenario);
      if (!grid.empty()) cfg.grid = telent::Grid::parse(grid);
      if (!state.empty()) cfg.state = state;
      if (!measurement.empty()) cfg.measurement = measurement;
      if (!inputs.empty()) cfg.inputs = inputs;
      if (!relaxation.empty()) cfg.relaxation = relaxation;
      cfg.out = out;
      cfg.format = format == "json" ? telent::OutputFormat::Json : telent::OutputFormat::Csv;
      if (cfg.format == telent::OutputFormat::Json && out.empty())
        throw std::invalid_argument("--format json needs --out");
      const auto result = telent::run_sweep(cfg, std::cout);
      if (!result.rows.empty() && result.failed_points == static_cast<int>(result.rows.size())) {
        std::cerr << "error: every grid point failed\n";
        return kExitAllFailed;
      }
      return kExitOk;
    }
    if (cert->parsed()) {
      const auto asm_ = telent::read_assemblage_file(cert_file);
      std::optional<std::string> rel;
      if (!cert_relaxation.empty()) rel = cert_relaxation;
      std::cout << telent::certify(asm_, rel, cert_tol).dump(2) << "\n";
      return kExitOk;
    }
    if (exp->parsed()) {
      if (!ex_inputs.empty()) ex.inputs = ex_inputs;
      const auto asm_ = build_export(ex);
      if (ex.out.empty())
        std::cout << telent::assemblage_to_json(asm_).dump(2) << "\n";
      else
        telent::write_assemblage_file(ex.out, asm_);
      return kExitOk;
    }
  } catch (const telent::InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const telent::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
