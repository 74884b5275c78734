#pragma once

#include <functional>
#include <vector>

#include "telent/linalg.hpp"

namespace telent::sdp {

struct VarId {
  int index = -1;
  auto operator<=>(const VarId&) const = default;
};

/// out(out_row, out_col) += coeff * in(in_row, in_col)
struct MapEntry {
  int out_row;
  int out_col;
  int in_row;
  int in_col;
  Complex coeff;
};

/// Complex-linear map between square matrices, stored entrywise.
class LinearMap {
 public:
  LinearMap(int in_dim, int out_dim, std::vector<MapEntry> entries);

  static LinearMap identity(int dim);
  /// Samples f on every matrix unit; f must be linear.
  static LinearMap from_function(int in_dim, int out_dim, const std::function<CMatrix(const CMatrix&)>& f);

  int in_dim() const { return in_dim_; }
  int out_dim() const { return out_dim_; }
  const std::vector<MapEntry>& entries() const { return entries_; }

  CMatrix apply(const CMatrix& x) const;
  /// outer(this(x))
  LinearMap then(const LinearMap& outer) const;
  LinearMap scaled(Complex s) const;

 private:
  int in_dim_;
  int out_dim_;
  std::vector<MapEntry> entries_;
};

struct Term {
  VarId var;
  LinearMap map;
};

/// Affine matrix expression: constant + sum_k map_k(variable_k).
class Expr {
 public:
  Expr() = default;
  static Expr constant(const CMatrix& c);
  static Expr zero(int dim);
  static Expr variable(VarId v, int dim);

  int dim() const { return static_cast<int>(constant_.rows()); }
  const CMatrix& constant_part() const { return constant_; }
  const std::vector<Term>& terms() const { return terms_; }

  Expr& operator+=(const Expr& other);
  Expr& operator-=(const Expr& other);
  Expr& operator*=(Complex s);

  /// Applies a linear map to the whole expression.
  Expr mapped(const LinearMap& m) const;

 private:
  CMatrix constant_;
  std::vector<Term> terms_;
};

Expr operator+(Expr a, const Expr& b);
Expr operator-(Expr a, const Expr& b);
Expr operator-(Expr a);
Expr operator*(Complex s, Expr a);
Expr operator+(Expr a, const CMatrix& c);
Expr operator-(Expr a, const CMatrix& c);

Expr trace(const Expr& e);
/// tr(c x) as a 1x1 expression.
Expr trace_with(const CMatrix& c, const Expr& e);
Expr partial_trace(const Expr& e, const SubsystemDims& dims, std::vector<int> keep);
Expr partial_transpose(const Expr& e, const SubsystemDims& dims, std::vector<int> systems);
Expr permute_subsystems(const Expr& e, const SubsystemDims& dims, std::vector<int> perm);
/// I_d x e
Expr embed_left_identity(int d, const Expr& e);
/// tr_V[e (w x I_B)] for e on V x B.
Expr contract_input(const Expr& e, const CMatrix& omega, int d_b);
/// e * I_d for a 1x1 expression.
Expr scalar_times_identity(const Expr& scalar, int d);

}  // namespace telent::sdp
