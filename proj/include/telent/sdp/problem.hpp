#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "telent/sdp/cone.hpp"
#include "telent/sdp/expr.hpp"

namespace telent::sdp {

enum class Sense { Minimize, Maximize };
enum class SolveStatus { Optimal, Infeasible, Unbounded, NumericalFailure };
std::string to_string(SolveStatus s);

struct ConstraintId {
  int index = -1;
};

enum class ConstraintKind { Equality, Psd };

struct Constraint {
  ConstraintKind kind;
  Expr expr;
};

/// Conic program over complex Hermitian matrix variables.
class SdpProblem {
 public:
  VarId declare_hermitian(int dim);
  int var_dim(VarId v) const;
  int num_vars() const { return static_cast<int>(var_dims_.size()); }
  const std::vector<int>& var_dims() const { return var_dims_; }
  Expr var(VarId v) const { return Expr::variable(v, var_dim(v)); }

  /// e == 0
  ConstraintId add_equality(const Expr& e);
  ConstraintId add_equality(const Expr& lhs, const Expr& rhs) { return add_equality(lhs - rhs); }
  /// e >= 0 (a 1x1 expression is a nonnegativity constraint)
  ConstraintId add_psd(const Expr& e);

  /// Objective must be a 1x1 expression, real on Hermitian arguments. Default: minimize 0.
  void set_objective(const Expr& scalar, Sense sense);

  const std::vector<Constraint>& constraints() const { return constraints_; }
  const Expr& objective() const { return objective_; }
  Sense sense() const { return sense_; }

 private:
  void check(const Expr& e) const;

  std::vector<int> var_dims_;
  std::vector<Constraint> constraints_;
  Expr objective_ = Expr::zero(1);
  Sense sense_ = Sense::Minimize;
};

struct SolveOptions {
  double tol = 1e-8;
  int max_iterations = 120;
  bool verbose = false;
};

/// Duals: with L = f(x) + sum <Y_eq, E(x)> - sum <Y_psd, F(x)>, where f is the
/// objective to minimize (negated when maximizing), Y_psd >= 0 and L is stationary.
/// On Infeasible the duals form a certificate: sum <Y_eq, E(x)> - sum <Y_psd, F(x)> = 1
/// for every x, which no feasible point can satisfy.
struct SdpSolution {
  SolveStatus status = SolveStatus::NumericalFailure;
  std::vector<CMatrix> primal;
  std::vector<CMatrix> duals;
  double objective_value = 0.0;
  double dual_objective = 0.0;
  /// max(requested tol, accuracy actually reached)
  double solver_tolerance = 0.0;
  int iterations = 0;

  const CMatrix& value(VarId v) const { return primal.at(v.index); }
  bool has_duals() const { return !duals.empty(); }
};

class MissingDualsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Real conic form plus the bookkeeping needed to map solutions back.
struct RealifiedProblem {
  struct ConstraintMap {
    ConstraintKind kind;
    int dim = 0;
    int first_row = -1;  // equality rows, ordered (r <= c): Re then Im when r < c
    int lp_row = -1;     // 1x1 PSD constraint
    int block = -1;      // realified 2*dim PSD block
  };
  ConeProblem cone;
  std::vector<int> var_offset;
  std::vector<ConstraintMap> constraint_maps;
  double objective_sign = 1.0;
};

/// Number of real parameters of a dim x dim Hermitian matrix.
inline int hermitian_params(int dim) { return dim * dim; }

RealifiedProblem realify(const SdpProblem& p);
SdpSolution solve(const SdpProblem& p, const SolveOptions& options = {});
std::vector<CMatrix> dual_witness(const SdpSolution& sol, std::span<const ConstraintId> ids);

}  // namespace telent::sdp
