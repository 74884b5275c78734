#pragma once

#include <optional>
#include <vector>

#include "telent/states.hpp"

namespace telent {

/// Bob's unnormalized conditional states sigma[a][x]; tr sigma[a][x] = p(a|w_x).
class TeleportationAssemblage {
 public:
  /// Validates positivity, no-signalling and normalization, each within 1e-8.
  TeleportationAssemblage(std::vector<std::vector<CMatrix>> sigma, InputEnsemble ensemble);

  const CMatrix& operator()(int a, int x) const { return sigma_.at(a).at(x); }
  const std::vector<std::vector<CMatrix>>& sigma() const { return sigma_; }
  const InputEnsemble& ensemble() const { return ensemble_; }
  int n_outcomes() const { return static_cast<int>(sigma_.size()); }
  int n_inputs() const { return ensemble_.size(); }
  int d_b() const { return d_b_; }
  int d_v() const { return ensemble_.d(); }

  /// sum_a sigma[a][x], averaged over x.
  CMatrix bob_marginal() const;

 private:
  std::vector<std::vector<CMatrix>> sigma_;
  InputEnsemble ensemble_;
  int d_b_;
};

/// Operators M_a on V x B reproducing an assemblage through tr_V[M_a (w x I)].
class ChannelOperators {
 public:
  /// Checks Hermiticity and sum_a M_a = I_V x rho_B with tr rho_B = 1, within `tol`.
  ChannelOperators(std::vector<CMatrix> ops, int d_v, int d_b, double tol = 1e-8);

  const std::vector<CMatrix>& ops() const { return ops_; }
  int d_v() const { return d_v_; }
  int d_b() const { return d_b_; }
  int size() const { return static_cast<int>(ops_.size()); }

 private:
  std::vector<CMatrix> ops_;
  int d_v_;
  int d_b_;
};

/// tr_V[X (w x I_B)] for X on V x B.
CMatrix contract_input(const CMatrix& x, const CMatrix& omega, int d_b);

TeleportationAssemblage generate_assemblage(const DensityMatrix& rho, const Povm& m, const InputEnsemble& e);

ChannelOperators channel_operators(const DensityMatrix& rho, const Povm& m);

/// sigma[a][x] = tr_V[M_a (w_x x I)]; no invariant checks beyond those of the assemblage itself.
TeleportationAssemblage assemblage_from_channel_operators(const std::vector<CMatrix>& ops,
                                                          const InputEnsemble& e, int d_b);

/// Mean over inputs of sum_a p(a|x) F^2(U_a rho_ax U_a^dag, w_x), F the root fidelity.
/// Missing corrections mean identity on every outcome.
double average_fidelity(const TeleportationAssemblage& asm_,
                        const std::optional<std::vector<CMatrix>>& corrections = std::nullopt);

struct NormalFormEntry {
  double probability = 0.0;
  /// Empty when the outcome has (numerically) zero probability.
  std::optional<DensityMatrix> state;
};

/// Rewrites (rho, m) as post-selected states on V x B that feed a Bell projection.
std::vector<NormalFormEntry> bsm_normal_form(const DensityMatrix& rho, const Povm& m);

/// d^2 p(a) tr_VA[(Phi+ x I)(w_x x rho'_a)] for every (a, x).
std::vector<std::vector<CMatrix>> reconstruct_from_normal_form(const std::vector<NormalFormEntry>& nf,
                                                               const InputEnsemble& e, int d_b);

}  // namespace telent
