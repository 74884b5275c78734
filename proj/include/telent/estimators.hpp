#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "telent/sepcone.hpp"
#include "telent/teleport.hpp"

namespace telent {

/// Linear functional on assemblages: w = sum_{a,x} tr(f[a][x] sigma[a][x]) + offset.
/// Nonnegative on every classical assemblage; w < 0 certifies nonclassical teleportation.
struct Witness {
  std::vector<std::vector<CMatrix>> f;
  double offset = 0.0;

  double value(const TeleportationAssemblage& asm_) const;
};

enum class BoundDirection { LowerBoundOnEntanglement, ExactAtRelaxation };
std::string to_string(BoundDirection d);

struct Certificate {
  std::vector<CMatrix> channel_operators;
  std::vector<CMatrix> decomposition;
  std::optional<Witness> witness;
};

struct QuantifierReport {
  std::string quantifier;
  double value = 0.0;
  sdp::SolveStatus status = sdp::SolveStatus::NumericalFailure;
  std::optional<Certificate> certificate;
  SeparabilityRelaxation relaxation;
  BoundDirection bound_direction = BoundDirection::ExactAtRelaxation;
  std::map<std::string, double> parameters;
};

struct EstimatorOptions {
  double tol = 1e-8;
  /// Shift the witness constant so its minimum over the relaxed classical set is exactly 0.
  bool tighten_witness = true;
  /// When nonempty, every assembled problem is also written as <prefix><quantifier>.dat-s.
  std::string sdpa_dump_prefix;
};

struct ClassicalModel {
  ChannelOperators ops;
};

using ClassicalityResult = std::variant<ClassicalModel, Witness>;

/// Thrown when the solver cannot decide a problem even after a retry at 10x looser tolerance.
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ClassicalityResult classicality(const TeleportationAssemblage& asm_, const SeparabilityRelaxation& r,
                                const EstimatorOptions& opt = {});
inline bool is_nonclassical(const ClassicalityResult& r) { return std::holds_alternative<Witness>(r); }

QuantifierReport negativity(const DensityMatrix& rho, const EstimatorOptions& opt = {});
QuantifierReport negativity_from_teleportation(const TeleportationAssemblage& asm_, const EstimatorOptions& opt = {});
/// Least negativity compatible with observing witness value w; d_b is read from the witness.
QuantifierReport negativity_from_witness(const Witness& wit, double w, const InputEnsemble& e, int n_outcomes,
                                         const EstimatorOptions& opt = {});

enum class EntVariant { Generalized, Separable, Random };
enum class TelVariant { Generalized, Classical, Random };

QuantifierReport ent_robustness(const DensityMatrix& rho, EntVariant variant, const SeparabilityRelaxation& r,
                                const EstimatorOptions& opt = {});
QuantifierReport tel_robustness(const TeleportationAssemblage& asm_, TelVariant variant,
                                const SeparabilityRelaxation& r, const EstimatorOptions& opt = {});
QuantifierReport teleportation_weight(const TeleportationAssemblage& asm_, const SeparabilityRelaxation& r,
                                      const EstimatorOptions& opt = {});
QuantifierReport best_separable_approx(const DensityMatrix& rho, const SeparabilityRelaxation& r,
                                       const EstimatorOptions& opt = {});

}  // namespace telent
