#include "telent/report_io.hpp"

#include <cmath>

#include "telent/assemblage_io.hpp"

namespace telent {

using nlohmann::json;

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json matrices(const std::vector<CMatrix>& ms) {
  json out = json::array();
  for (const auto& m : ms) out.push_back(matrix_to_json(m));
  return out;
}

}  // namespace

json witness_to_json(const Witness& w) {
  json f = json::array();
  for (const auto& row : w.f) f.push_back(matrices(row));
  return {{"f", std::move(f)}, {"offset", w.offset}};
}

json report_to_json(const QuantifierReport& r, bool with_certificate) {
  json j;
  j["quantifier"] = r.quantifier;
  j["value"] = number(r.value);
  j["status"] = sdp::to_string(r.status);
  j["relaxation"] = r.relaxation.name();
  j["bound_direction"] = to_string(r.bound_direction);
  json params = json::object();
  for (const auto& [k, v] : r.parameters) params[k] = number(v);
  j["parameters"] = std::move(params);
  if (with_certificate && r.certificate) {
    json c = json::object();
    if (!r.certificate->channel_operators.empty()) c["channel_operators"] = matrices(r.certificate->channel_operators);
    if (!r.certificate->decomposition.empty()) c["decomposition"] = matrices(r.certificate->decomposition);
    if (r.certificate->witness) c["witness"] = witness_to_json(*r.certificate->witness);
    j["certificate"] = std::move(c);
  }
  return j;
}

json classicality_to_json(const ClassicalityResult& r, bool with_certificate) {
  json j;
  if (const auto* m = std::get_if<ClassicalModel>(&r)) {
    j["result"] = "Classical";
    if (with_certificate) j["channel_operators"] = matrices(m->ops.ops());
  } else {
    j["result"] = "Nonclassical";
    if (with_certificate) j["witness"] = witness_to_json(std::get<Witness>(r));
  }
  return j;
}

}  // namespace telent
