#pragma once

#include <json.hpp>

#include "telent/estimators.hpp"

namespace telent {

nlohmann::json witness_to_json(const Witness& w);
/// {quantifier, value, status, relaxation, bound_direction, parameters, certificate?}; NaN values become null.
nlohmann::json report_to_json(const QuantifierReport& r, bool with_certificate = true);
/// {result: "Classical" | "Nonclassical", channel_operators | witness}
nlohmann::json classicality_to_json(const ClassicalityResult& r, bool with_certificate = true);

}  // namespace telent
