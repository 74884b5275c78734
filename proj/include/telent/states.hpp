#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "telent/linalg.hpp"
#include "telent/rng.hpp"

namespace telent {

/// Unit-trace PSD operator on a tensor-product space.
class DensityMatrix {
 public:
  /// Validates Hermiticity, positivity and unit trace; stores the Hermitian part.
  DensityMatrix(const CMatrix& mat, SubsystemDims dims);
  /// Single-system state.
  explicit DensityMatrix(const CMatrix& mat);

  const CMatrix& mat() const { return mat_; }
  const SubsystemDims& dims() const { return dims_; }
  int dim() const { return static_cast<int>(mat_.rows()); }

 private:
  CMatrix mat_;
  SubsystemDims dims_;
};

/// Measurement on a (possibly composite) space, with optional correction unitaries per outcome.
class Povm {
 public:
  Povm(std::vector<CMatrix> elements, SubsystemDims dims,
       std::optional<std::vector<CMatrix>> corrections = std::nullopt);

  const std::vector<CMatrix>& elements() const { return elements_; }
  const SubsystemDims& dims() const { return dims_; }
  const std::optional<std::vector<CMatrix>>& corrections() const { return corrections_; }
  int size() const { return static_cast<int>(elements_.size()); }

 private:
  std::vector<CMatrix> elements_;
  SubsystemDims dims_;
  std::optional<std::vector<CMatrix>> corrections_;
};

class InputEnsemble {
 public:
  explicit InputEnsemble(std::vector<DensityMatrix> states);

  const std::vector<DensityMatrix>& states() const { return states_; }
  int d() const { return d_; }
  int size() const { return static_cast<int>(states_.size()); }
  const CMatrix& operator[](std::size_t x) const { return states_.at(x).mat(); }

 private:
  std::vector<DensityMatrix> states_;
  int d_;
};

enum class PauliAxis { X, Y, Z };

CMatrix pure_projector(const CVector& psi);

/// X^j Z^k with X|i> = |i+1 mod d>, Z|i> = exp(2 pi i i/d)|i>.
CMatrix weyl_unitary(int d, int j, int k);

DensityMatrix max_entangled(int d);

/// d^2 Bell projectors (U_a x I) Phi+ (U_a x I)^dag with U_a = X^j Z^k, a = j d + k; corrections U_a.
Povm bell_measurement(int d);

/// {Phi+, I - Phi+} on V x A, without corrections.
Povm partial_bell_measurement(int d);

/// +1 then -1 eigenstate of each axis, in the order given.
InputEnsemble pauli_eigenstate_ensemble(const std::vector<PauliAxis>& axes);

/// d^2 Haar-random pure states forming a tomographically complete set.
InputEnsemble random_tomo_complete_ensemble(int d, std::uint64_t seed);

/// p Phi+ + (1-p) |01><01|
DensityMatrix flag_state(double p);
/// p Phi+ + (1-p) I/4
DensityMatrix isotropic_state(double p);
DensityMatrix horodecki_state(double a);
DensityMatrix upb_pyramid_state();

/// Rank of the Gram matrix tr(w_x w_y) at tolerance 1e-8.
int gram_rank(const InputEnsemble& e);
bool is_tomographically_complete(const InputEnsemble& e);

CVector random_pure_state(int d, CounterRng& rng);
/// Ginibre-induced random state of the given rank (full rank when rank <= 0).
DensityMatrix random_density_matrix(const SubsystemDims& dims, CounterRng& rng, int rank = 0);
/// Convex mixture of `terms` random product states.
DensityMatrix random_separable_state(int d_a, int d_b, int terms, CounterRng& rng);
/// Random n-outcome POVM, M_a = S^{-1/2} G_a S^{-1/2} with Wishart G_a.
Povm random_povm(const SubsystemDims& dims, int n_outcomes, CounterRng& rng);

}  // namespace telent
