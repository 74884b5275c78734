#pragma once

#include <filesystem>
#include <stdexcept>

#include <json.hpp>

#include "telent/teleport.hpp"

namespace telent {

/// Malformed or schema-violating input document.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrix as rows of [re, im] pairs.
nlohmann::json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const nlohmann::json& j);

/// {d_B, n_outcomes, ensemble: [matrix], sigma: [[matrix per x] per a]}
nlohmann::json assemblage_to_json(const TeleportationAssemblage& asm_);
/// Throws ParseError on schema problems and InvariantError when the data violate assemblage invariants.
TeleportationAssemblage assemblage_from_json(const nlohmann::json& j);

TeleportationAssemblage read_assemblage_file(const std::filesystem::path& path);
void write_assemblage_file(const std::filesystem::path& path, const TeleportationAssemblage& asm_);

}  // namespace telent
