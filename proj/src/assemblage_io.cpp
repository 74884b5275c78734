#include "telent/assemblage_io.hpp"

#include <fstream>
#include <string>

namespace telent {

using nlohmann::json;

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix must be a nonempty array of rows");
  const auto n_rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) throw ParseError("matrix rows must be nonempty arrays");
  const auto n_cols = static_cast<Eigen::Index>(j[0].size());
  CMatrix m(n_rows, n_cols);
  for (Eigen::Index r = 0; r < n_rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n_cols) throw ParseError("matrix rows differ in length");
    for (Eigen::Index c = 0; c < n_cols; ++c) {
      const json& e = row[c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw ParseError("matrix entries must be [re, im] number pairs");
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

json assemblage_to_json(const TeleportationAssemblage& asm_) {
  json j;
  j["d_B"] = asm_.d_b();
  j["n_outcomes"] = asm_.n_outcomes();
  json ens = json::array();
  for (const auto& w : asm_.ensemble().states()) ens.push_back(matrix_to_json(w.mat()));
  j["ensemble"] = std::move(ens);
  json sigma = json::array();
  for (const auto& row : asm_.sigma()) {
    json per_x = json::array();
    for (const auto& s : row) per_x.push_back(matrix_to_json(s));
    sigma.push_back(std::move(per_x));
  }
  j["sigma"] = std::move(sigma);
  return j;
}

TeleportationAssemblage assemblage_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("assemblage document must be a JSON object");
  for (const char* key : {"d_B", "n_outcomes", "ensemble", "sigma"})
    if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  if (!j["d_B"].is_number_integer() || !j["n_outcomes"].is_number_integer())
    throw ParseError("d_B and n_outcomes must be integers");
  const int d_b = j["d_B"].get<int>();
  const int n_out = j["n_outcomes"].get<int>();
  if (d_b <= 0 || n_out <= 0) throw ParseError("d_B and n_outcomes must be positive");
  if (!j["ensemble"].is_array() || j["ensemble"].empty()) throw ParseError("ensemble must be a nonempty array");
  if (!j["sigma"].is_array() || static_cast<int>(j["sigma"].size()) != n_out)
    throw ParseError("sigma must hold one entry per outcome");

  std::vector<DensityMatrix> states;
  for (const auto& w : j["ensemble"]) {
    const CMatrix m = matrix_from_json(w);
    if (m.rows() != m.cols()) throw ParseError("ensemble members must be square");
    states.emplace_back(m);
  }
  InputEnsemble ensemble(std::move(states));

  std::vector<std::vector<CMatrix>> sigma;
  for (const auto& per_x : j["sigma"]) {
    if (!per_x.is_array() || static_cast<int>(per_x.size()) != ensemble.size())
      throw ParseError("sigma[a] must hold one matrix per input state");
    std::vector<CMatrix> row;
    for (const auto& s : per_x) {
      CMatrix m = matrix_from_json(s);
      if (m.rows() != d_b || m.cols() != d_b) throw ParseError("sigma matrices must be d_B x d_B");
      row.push_back(std::move(m));
    }
    sigma.push_back(std::move(row));
  }
  return TeleportationAssemblage(std::move(sigma), std::move(ensemble));
}

TeleportationAssemblage read_assemblage_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return assemblage_from_json(j);
}

void write_assemblage_file(const std::filesystem::path& path, const TeleportationAssemblage& asm_) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << assemblage_to_json(asm_).dump(2) << '\n';
}

}  // namespace telent
