#include "telent/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "telent/report_io.hpp"

namespace telent {

using nlohmann::json;

Scenario parse_scenario(const std::string& name) {
  if (name == "fig1") return Scenario::Fig1;
  if (name == "fig2") return Scenario::Fig2;
  if (name == "fig3") return Scenario::Fig3;
  if (name == "fig4") return Scenario::Fig4;
  if (name == "custom") return Scenario::Custom;
  throw std::invalid_argument("unknown scenario '" + name + "' (expected fig1|fig2|fig3|fig4|custom)");
}

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::Fig1: return "fig1";
    case Scenario::Fig2: return "fig2";
    case Scenario::Fig3: return "fig3";
    case Scenario::Fig4: return "fig4";
    case Scenario::Custom: return "custom";
  }
  return "custom";
}

Grid Grid::parse(const std::string& text) {
  Grid g;
  std::istringstream in(text);
  char c1 = 0, c2 = 0;
  if (!(in >> g.start >> c1 >> g.stop >> c2 >> g.step) || c1 != ':' || c2 != ':' || !(in >> std::ws).eof())
    throw std::invalid_argument("grid must look like start:stop:step, got '" + text + "'");
  if (!(g.step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (g.stop < g.start) throw std::invalid_argument("grid stop must not be below start");
  return g;
}

std::vector<double> Grid::values() const {
  const long n = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> v;
  for (long i = 0; i < n; ++i) v.push_back(start + static_cast<double>(i) * step);
  return v;
}

int family_dimension(const std::string& family) {
  if (family == "flag" || family == "isotropic") return 2;
  if (family == "horodecki") return 3;
  throw std::invalid_argument("unknown state family '" + family + "' (expected flag|isotropic|horodecki)");
}

std::string family_parameter_name(const std::string& family) {
  family_dimension(family);
  return family == "horodecki" ? "a" : "p";
}

DensityMatrix make_state(const std::string& family, double parameter) {
  family_dimension(family);
  if (!(parameter >= 0.0 && parameter <= 1.0))
    throw std::invalid_argument(family + " parameter must lie in [0, 1]");
  if (family == "flag") return flag_state(parameter);
  if (family == "isotropic") return isotropic_state(parameter);
  return horodecki_state(parameter);
}

Povm make_measurement(const std::string& name, int d) {
  if (name == "bsm") return bell_measurement(d);
  if (name == "partial-bsm") return partial_bell_measurement(d);
  throw std::invalid_argument("unknown measurement '" + name + "' (expected bsm|partial-bsm)");
}

InputEnsemble make_inputs(const std::string& spec, int d) {
  if (spec == "pauli6" || spec == "pauli4-xz") {
    if (d != 2) throw std::invalid_argument("Pauli input sets need qubit inputs");
    if (spec == "pauli6") return pauli_eigenstate_ensemble({PauliAxis::X, PauliAxis::Y, PauliAxis::Z});
    return pauli_eigenstate_ensemble({PauliAxis::X, PauliAxis::Z});
  }
  if (spec.rfind("random:", 0) == 0) {
    const auto second = spec.find(':', 7);
    if (second == std::string::npos) throw std::invalid_argument("inputs must look like random:d:seed");
    int rd = 0;
    unsigned long long seed = 0;
    try {
      std::size_t used = 0;
      rd = std::stoi(spec.substr(7, second - 7), &used);
      if (used != second - 7) throw std::invalid_argument("d");
      seed = std::stoull(spec.substr(second + 1), &used);
      if (used != spec.size() - second - 1) throw std::invalid_argument("seed");
    } catch (const std::exception&) {
      throw std::invalid_argument("inputs must look like random:d:seed, got '" + spec + "'");
    }
    if (rd != d) throw std::invalid_argument("random input dimension does not match the state");
    return random_tomo_complete_ensemble(d, seed);
  }
  throw std::invalid_argument("unknown inputs '" + spec + "' (expected pauli6|pauli4-xz|random:d:seed)");
}

SweepConfig resolve(const SweepConfig& in) {
  SweepConfig cfg = in;
  auto fixed = [&](const std::optional<std::string>& opt, const char* flag) {
    if (opt) throw std::invalid_argument(std::string(flag) + " is fixed by the " + to_string(cfg.scenario) + " preset");
  };
  switch (cfg.scenario) {
    case Scenario::Fig1:
    case Scenario::Fig2:
      fixed(cfg.state, "--state");
      cfg.state = "flag";
      if (!cfg.grid) cfg.grid = Grid{0.0, 1.0, cfg.scenario == Scenario::Fig1 ? 0.1 : 0.05};
      if (!cfg.measurement) cfg.measurement = "bsm";
      if (!cfg.inputs) cfg.inputs = "pauli6";
      break;
    case Scenario::Fig3:
      fixed(cfg.state, "--state");
      fixed(cfg.measurement, "--measurement");
      fixed(cfg.inputs, "--inputs");
      cfg.state = "isotropic";
      if (!cfg.grid) cfg.grid = Grid{0.0, 1.0, 0.02};
      break;
    case Scenario::Fig4:
      fixed(cfg.state, "--state");
      cfg.state = "horodecki";
      if (!cfg.grid) cfg.grid = Grid{0.1, 0.9, 0.1};
      if (!cfg.measurement) cfg.measurement = "partial-bsm";
      if (!cfg.inputs) cfg.inputs = "random:3:" + std::to_string(cfg.seed);
      if (!cfg.relaxation) cfg.relaxation = "sym2";
      break;
    case Scenario::Custom:
      if (!cfg.state) cfg.state = "flag";
      if (!cfg.grid) cfg.grid = *cfg.state == "horodecki" ? Grid{0.1, 0.9, 0.1} : Grid{0.0, 1.0, 0.1};
      if (!cfg.measurement) cfg.measurement = "bsm";
      if (!cfg.inputs) cfg.inputs = family_dimension(*cfg.state) == 2 ? "pauli6" : "random:3:" + std::to_string(cfg.seed);
      break;
  }
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (cfg.jobs < 1) throw std::invalid_argument("jobs must be at least 1");
  const int d = family_dimension(*cfg.state);
  const auto grid = cfg.grid->values();
  if (grid.empty()) throw std::invalid_argument("grid is empty");
  for (double v : grid) make_state(*cfg.state, v);
  if (cfg.measurement) make_measurement(*cfg.measurement, d);
  if (cfg.inputs) make_inputs(*cfg.inputs, d);
  if (cfg.relaxation) SeparabilityRelaxation::parse(*cfg.relaxation, {d, d});
  return cfg;
}

namespace {

std::vector<std::string> value_columns(Scenario s) {
  switch (s) {
    case Scenario::Fig1: return {"neg_exact", "neg_bound"};
    case Scenario::Fig2:
      return {"avg_fidelity", "tau_gen", "tau_cl", "tau_r", "eps_gen", "eps_sep", "eps_r"};
    case Scenario::Fig3: return {"tw_bsm_pauli6", "tw_pbsm_pauli6", "tw_bsm_xz", "tw_pbsm_xz"};
    case Scenario::Fig4: return {"nonclassical", "witness_value", "neg_bound", "tw", "tau_r"};
    case Scenario::Custom:
      return {"neg_exact", "neg_bound", "avg_fidelity", "tau_gen", "tau_cl", "tau_r", "eps_gen",
              "eps_sep", "eps_r", "tw", "bsa", "nonclassical", "witness_value"};
  }
  return {};
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class PointEvaluator {
 public:
  PointEvaluator(const SweepConfig& cfg, double param) : cfg_(cfg), rho_(make_state(*cfg.state, param)) {
    row_.parameter = param;
    d_ = family_dimension(*cfg.state);
    opt_.tol = cfg.tol;
  }

  SweepRow run() {
    const auto cols = value_columns(cfg_.scenario);
    auto wants = [&](const char* c) { return std::find(cols.begin(), cols.end(), c) != cols.end(); };
    for (const auto& c : cols) row_.values[c] = kNaN;

    if (cfg_.scenario == Scenario::Fig3) {
      const char* meas[] = {"bsm", "partial-bsm"};
      const char* ins[] = {"pauli6", "pauli4-xz"};
      const char* names[2][2] = {{"tw_bsm_pauli6", "tw_bsm_xz"}, {"tw_pbsm_pauli6", "tw_pbsm_xz"}};
      for (int m = 0; m < 2; ++m)
        for (int i = 0; i < 2; ++i)
          quantity(names[m][i], [&] {
            const auto a = generate_assemblage(rho_, make_measurement(meas[m], d_), make_inputs(ins[i], d_));
            return teleportation_weight(a, channel_relaxation(), opt_);
          });
      return finish();
    }

    std::optional<TeleportationAssemblage> asm_;
    std::optional<Povm> meas;
    try {
      meas.emplace(make_measurement(*cfg_.measurement, d_));
      asm_.emplace(generate_assemblage(rho_, *meas, make_inputs(*cfg_.inputs, d_)));
    } catch (const std::exception& e) {
      failures_.push_back(std::string("assemblage=") + e.what());
      return finish();
    }
    const auto& a = *asm_;

    if (wants("neg_exact"))
      value("neg_exact", [&] { return negative_part_trace(partial_transpose(rho_.mat(), rho_.dims(), 0)); });
    if (wants("avg_fidelity")) value("avg_fidelity", [&] { return average_fidelity(a, meas->corrections()); });
    if (wants("nonclassical")) classicality_columns(a);
    if (wants("neg_bound")) quantity("neg_bound", [&] { return negativity_from_teleportation(a, opt_); });
    const std::pair<const char*, TelVariant> tel[] = {
        {"tau_gen", TelVariant::Generalized}, {"tau_cl", TelVariant::Classical}, {"tau_r", TelVariant::Random}};
    for (const auto& [name, v] : tel)
      if (wants(name)) quantity(name, [&, v = v] { return tel_robustness(a, v, channel_relaxation(), opt_); });
    const std::pair<const char*, EntVariant> ent[] = {
        {"eps_gen", EntVariant::Generalized}, {"eps_sep", EntVariant::Separable}, {"eps_r", EntVariant::Random}};
    for (const auto& [name, v] : ent)
      if (wants(name)) quantity(name, [&, v = v] { return ent_robustness(rho_, v, state_relaxation(), opt_); });
    if (wants("tw")) quantity("tw", [&] { return teleportation_weight(a, channel_relaxation(), opt_); });
    if (wants("bsa")) quantity("bsa", [&] { return best_separable_approx(rho_, state_relaxation(), opt_); });
    return finish();
  }

 private:
  SeparabilityRelaxation relaxation_for(Bipartition cut) const {
    return cfg_.relaxation ? SeparabilityRelaxation::parse(*cfg_.relaxation, cut)
                           : SeparabilityRelaxation::default_for(cut);
  }
  SeparabilityRelaxation channel_relaxation() const { return relaxation_for({d_, d_}); }
  SeparabilityRelaxation state_relaxation() const { return relaxation_for({rho_.dims()[0], rho_.dims()[1]}); }

  void value(const std::string& col, const std::function<double()>& f) {
    try {
      row_.values[col] = f();
    } catch (const std::exception& e) {
      failures_.push_back(col + "=" + e.what());
    }
  }

  void quantity(const std::string& col, const std::function<QuantifierReport()>& f) {
    try {
      QuantifierReport r = f();
      row_.values[col] = r.value;
      json j = report_to_json(r);
      j["column"] = col;
      row_.reports.push_back(std::move(j));
      if (r.status != sdp::SolveStatus::Optimal) failures_.push_back(col + "=" + sdp::to_string(r.status));
    } catch (const std::exception& e) {
      failures_.push_back(col + "=" + e.what());
    }
  }

  void classicality_columns(const TeleportationAssemblage& a) {
    try {
      const auto res = classicality(a, channel_relaxation(), opt_);
      row_.values["nonclassical"] = is_nonclassical(res) ? 1.0 : 0.0;
      if (const auto* w = std::get_if<Witness>(&res)) row_.values["witness_value"] = w->value(a);
      json j = classicality_to_json(res);
      j["column"] = "nonclassical";
      row_.reports.push_back(std::move(j));
    } catch (const std::exception& e) {
      failures_.push_back(std::string("nonclassical=") + e.what());
    }
  }

  SweepRow finish() {
    if (failures_.empty()) {
      row_.status = "ok";
    } else {
      std::string s = "failed:";
      for (std::size_t i = 0; i < failures_.size(); ++i) s += (i ? ";" : "") + failures_[i];
      for (char& c : s)
        if (c == ',' || c == '\n' || c == '"') c = ' ';
      row_.status = s;
    }
    return std::move(row_);
  }

  const SweepConfig& cfg_;
  DensityMatrix rho_;
  int d_ = 2;
  EstimatorOptions opt_;
  SweepRow row_;
  std::vector<std::string> failures_;
};

std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::filesystem::path sidecar_path(const std::filesystem::path& out) {
  std::filesystem::path p = out;
  p.replace_extension(".json");
  if (p == out) p += ".json";
  return p;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& raw, std::ostream& csv_fallback) {
  const SweepConfig cfg = resolve(raw);
  SweepResult result;
  result.parameter_name = family_parameter_name(*cfg.state);
  result.columns.push_back(result.parameter_name);
  for (const auto& c : value_columns(cfg.scenario)) result.columns.push_back(c);
  result.columns.push_back("status");

  std::ofstream file;
  std::ostream* csv = nullptr;
  if (cfg.format == OutputFormat::Csv) {
    if (cfg.out.empty()) {
      csv = &csv_fallback;
    } else {
      file.open(cfg.out);
      if (!file) throw std::runtime_error("cannot write " + cfg.out.string());
      csv = &file;
    }
    *csv << "# generated " << timestamp() << "\n";
    for (std::size_t i = 0; i < result.columns.size(); ++i) *csv << (i ? "," : "") << result.columns[i];
    *csv << "\n" << std::flush;
  }

  const auto grid = cfg.grid->values();
  auto emit = [&](SweepRow row) {
    if (row.status != "ok") ++result.failed_points;
    if (csv) {
      *csv << format_value(row.parameter);
      for (std::size_t i = 1; i + 1 < result.columns.size(); ++i) *csv << "," << format_value(row.values.at(result.columns[i]));
      *csv << "," << row.status << "\n" << std::flush;
    }
    result.rows.push_back(std::move(row));
  };
  for (std::size_t begin = 0; begin < grid.size(); begin += static_cast<std::size_t>(cfg.jobs)) {
    const std::size_t end = std::min(grid.size(), begin + static_cast<std::size_t>(cfg.jobs));
    if (cfg.jobs == 1) {
      emit(PointEvaluator(cfg, grid[begin]).run());
      continue;
    }
    std::vector<std::future<SweepRow>> batch;
    for (std::size_t i = begin; i < end; ++i)
      batch.push_back(std::async(std::launch::async, [&cfg, v = grid[i]] { return PointEvaluator(cfg, v).run(); }));
    for (auto& f : batch) emit(f.get());
  }

  if (!cfg.out.empty()) {
    const auto path = cfg.format == OutputFormat::Csv ? sidecar_path(cfg.out) : cfg.out;
    std::ofstream js(path);
    if (!js) throw std::runtime_error("cannot write " + path.string());
    js << sweep_to_json(cfg, result).dump(1) << "\n";
  }
  return result;
}

json sweep_to_json(const SweepConfig& raw, const SweepResult& result) {
  const SweepConfig cfg = resolve(raw);
  json j;
  j["scenario"] = to_string(cfg.scenario);
  json c;
  c["state"] = *cfg.state;
  c["grid"] = {{"start", cfg.grid->start}, {"stop", cfg.grid->stop}, {"step", cfg.grid->step}};
  c["measurement"] = cfg.measurement ? json(*cfg.measurement) : json(nullptr);
  c["inputs"] = cfg.inputs ? json(*cfg.inputs) : json(nullptr);
  c["relaxation"] = cfg.relaxation ? json(*cfg.relaxation) : json("default");
  c["tol"] = cfg.tol;
  c["seed"] = cfg.seed;
  j["config"] = std::move(c);
  j["columns"] = result.columns;
  json rows = json::array();
  for (const auto& r : result.rows) {
    json row;
    row[result.parameter_name] = r.parameter;
    for (const auto& [k, v] : r.values) row[k] = std::isfinite(v) ? json(v) : json(nullptr);
    row["status"] = r.status;
    row["reports"] = r.reports;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

json certify(const TeleportationAssemblage& asm_, const std::optional<std::string>& relaxation, double tol) {
  const Bipartition cut{asm_.d_v(), asm_.d_b()};
  const SeparabilityRelaxation r =
      relaxation ? SeparabilityRelaxation::parse(*relaxation, cut) : SeparabilityRelaxation::default_for(cut);
  EstimatorOptions opt;
  opt.tol = tol;
  json j;
  j["relaxation"] = r.name();
  j["tomographically_complete"] = is_tomographically_complete(asm_.ensemble());
  const auto cls = classicality(asm_, r, opt);
  json cj = classicality_to_json(cls);
  if (const auto* w = std::get_if<Witness>(&cls)) cj["witness_value"] = w->value(asm_);
  j["classicality"] = std::move(cj);
  json reports = json::array();
  reports.push_back(report_to_json(negativity_from_teleportation(asm_, opt)));
  for (auto v : {TelVariant::Generalized, TelVariant::Classical, TelVariant::Random})
    reports.push_back(report_to_json(tel_robustness(asm_, v, r, opt)));
  reports.push_back(report_to_json(teleportation_weight(asm_, r, opt)));
  j["reports"] = std::move(reports);
  return j;
}

}  // namespace telent
