#pragma once

#include <string>

#include "telent/sdp/problem.hpp"

namespace telent {

/// Two-party split of an operator space: left factor of dimension `left`, right of `right`.
struct Bipartition {
  int left = 0;
  int right = 0;
  bool operator==(const Bipartition&) const = default;
};

/// Outer approximation of the separable cone.
struct SeparabilityRelaxation {
  enum class Kind { Ppt, SymmetricExtension };

  Kind kind = Kind::Ppt;
  int k = 1;
  bool with_ppt = true;
  Bipartition cut;

  static SeparabilityRelaxation ppt(Bipartition cut);
  /// k copies of the right factor, optionally with every partial-transpose cut.
  static SeparabilityRelaxation symmetric_extension(Bipartition cut, int k, bool with_ppt = true);
  /// PPT when left * right <= 6, otherwise a 2-copy extension with PPT.
  static SeparabilityRelaxation default_for(Bipartition cut);
  /// "ppt", "sym2", "sym3", ... ; sym-k implies PPT cuts.
  static SeparabilityRelaxation parse(const std::string& name, Bipartition cut);

  std::string name() const;
};

/// Adds constraints forcing `var` (an expression on left x right) into the relaxed cone.
void constrain_in_relaxed_cone(sdp::SdpProblem& p, const sdp::Expr& var, const SeparabilityRelaxation& r);

}  // namespace telent
