#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace telent {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Thrown when matrix shapes or subsystem dimensions do not fit together.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a value violates a domain invariant (Hermiticity, positivity, normalization...).
class InvariantError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr double kHermitianTol = 1e-9;
inline constexpr double kPsdTol = 1e-8;

/// Local dimensions of a tensor-product space; subsystem 0 is the leftmost factor.
class SubsystemDims {
 public:
  SubsystemDims() = default;
  SubsystemDims(std::initializer_list<int> dims);
  explicit SubsystemDims(std::vector<int> dims);

  int total() const;
  std::size_t size() const { return dims_.size(); }
  int operator[](std::size_t i) const { return dims_.at(i); }
  const std::vector<int>& values() const { return dims_; }

  bool operator==(const SubsystemDims&) const = default;

 private:
  std::vector<int> dims_;
};

CMatrix identity(int d);

CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix kron(std::initializer_list<CMatrix> factors);

/// Traces out every subsystem not listed in `keep`. Kept subsystems stay in their original order.
CMatrix partial_trace(const CMatrix& m, const SubsystemDims& dims, std::span<const int> keep);
CMatrix partial_trace(const CMatrix& m, const SubsystemDims& dims, std::initializer_list<int> keep);

CMatrix partial_transpose(const CMatrix& m, const SubsystemDims& dims, int sys);
CMatrix partial_transpose(const CMatrix& m, const SubsystemDims& dims, std::span<const int> systems);

/// Reorders tensor factors: factor i of the result is factor perm[i] of the input.
CMatrix permute_subsystems(const CMatrix& m, const SubsystemDims& dims, std::span<const int> perm);

bool all_finite(const CMatrix& m);
bool is_hermitian(const CMatrix& m, double tol = kHermitianTol);
CMatrix hermitian_part(const CMatrix& m);

/// Ascending eigenvalues of the Hermitian part; throws InvariantError if m is not Hermitian.
RVector hermitian_eigenvalues(const CMatrix& m);
double min_eigenvalue(const CMatrix& m);
bool is_psd(const CMatrix& m, double tol = kPsdTol);
bool is_unitary(const CMatrix& m, double tol = kHermitianTol);

/// Square root of a PSD matrix, negative eigenvalues clamped to zero.
CMatrix psd_sqrt(const CMatrix& m);

double trace_norm(const CMatrix& m);

/// Root fidelity ||sqrt(rho) sqrt(sigma)||_1.
double fidelity(const CMatrix& rho, const CMatrix& sigma);

/// Sum of the absolute values of the negative eigenvalues.
double negative_part_trace(const CMatrix& h);

/// [[Re h, -Im h], [Im h, Re h]]; PSD exactly when h is.
RMatrix realify_hermitian(const CMatrix& h);

}  // namespace telent
