#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace telent::sdp {

using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using SparseRows = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// One coefficient of a symmetric matrix; row <= col, the mirrored entry is implied.
struct SymEntry {
  int row;
  int col;
  double value;
};

/// Semidefinite cone constraint h - sum_j x_{vars[k]} G_k >= 0 on size x size real symmetric matrices.
struct PsdBlock {
  int size = 0;
  RMatrix h;
  std::vector<int> vars;
  std::vector<std::vector<SymEntry>> coeffs;
};

/// Real conic program
///   minimize    c'x + c0
///   subject to  A x = b,  h_lp - G_lp x >= 0,  every PSD block >= 0.
struct ConeProblem {
  int n = 0;
  RVector c;
  double c0 = 0.0;
  SparseRows a;
  RVector b;
  SparseRows g_lp;
  RVector h_lp;
  std::vector<PsdBlock> blocks;

  /// Resizes empty members so every matrix agrees with n.
  void normalize_shapes();
};

enum class ConeStatus { Optimal, PrimalInfeasible, DualInfeasible, NumericalFailure };

struct ConeOptions {
  double tol = 1e-8;
  /// Accepted for the best iterate when progress stalls (problems without a strictly feasible point).
  double near_optimal_tol = 1e-5;
  int max_iterations = 120;
  bool verbose = false;
};

/// Primal/dual pair. On PrimalInfeasible, (y, z) is a Farkas certificate with
/// A'y + G'z = 0 and b'y + h'z = -1. On DualInfeasible, (x, s) is a ray with
/// Ax = 0, Gx + s = 0 and c'x = -1.
/// Dual sign convention: c + A'y + G'z = 0 at optimality, z in the cone.
struct ConeSolution {
  ConeStatus status = ConeStatus::NumericalFailure;
  RVector x;
  RVector y;
  RVector z_lp;
  RVector s_lp;
  std::vector<RMatrix> z_psd;
  std::vector<RMatrix> s_psd;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  /// max(primal residual, dual residual, min(gap, relative gap)) of the returned iterate.
  double accuracy = 0.0;
  int iterations = 0;
};

/// Presolve, interior-point solve and postsolve.
ConeSolution solve_cone(const ConeProblem& problem, const ConeOptions& options = {});

/// Interior-point solve without presolve; A must have full row rank.
ConeSolution solve_cone_ipm(const ConeProblem& problem, const ConeOptions& options = {});

}  // namespace telent::sdp
