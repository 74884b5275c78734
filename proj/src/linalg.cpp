#include "telent/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

namespace telent {

namespace {

// Digits of every basis index in the mixed-radix system given by dims.
std::vector<std::vector<int>> basis_digits(const SubsystemDims& dims) {
  const int n = dims.total();
  std::vector<std::vector<int>> out(n, std::vector<int>(dims.size()));
  for (int idx = 0; idx < n; ++idx) {
    int rem = idx;
    for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
      out[idx][k] = rem % dims[k];
      rem /= dims[k];
    }
  }
  return out;
}

int compose_index(const std::vector<int>& digits, const std::vector<int>& dims) {
  int idx = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) idx = idx * dims[k] + digits[k];
  return idx;
}

void check_square(const CMatrix& m, const SubsystemDims& dims, const char* op) {
  if (m.rows() != m.cols())
    throw DimensionError(std::string(op) + ": matrix is not square");
  if (m.rows() != dims.total())
    throw DimensionError(std::string(op) + ": matrix dimension " + std::to_string(m.rows()) +
                         " does not match subsystem product " + std::to_string(dims.total()));
}

void check_subsystem(const SubsystemDims& dims, int sys, const char* op) {
  if (sys < 0 || sys >= static_cast<int>(dims.size()))
    throw DimensionError(std::string(op) + ": subsystem index " + std::to_string(sys) + " out of range");
}

}  // namespace

SubsystemDims::SubsystemDims(std::initializer_list<int> dims) : SubsystemDims(std::vector<int>(dims)) {}

SubsystemDims::SubsystemDims(std::vector<int> dims) : dims_(std::move(dims)) {
  for (int d : dims_)
    if (d <= 0) throw DimensionError("subsystem dimensions must be positive");
}

int SubsystemDims::total() const {
  return std::accumulate(dims_.begin(), dims_.end(), 1, std::multiplies<>());
}

CMatrix identity(int d) { return CMatrix::Identity(d, d); }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix kron(std::initializer_list<CMatrix> factors) {
  if (factors.size() == 0) return CMatrix::Ones(1, 1);
  auto it = factors.begin();
  CMatrix out = *it;
  for (++it; it != factors.end(); ++it) out = kron(out, *it);
  return out;
}

CMatrix partial_trace(const CMatrix& m, const SubsystemDims& dims, std::span<const int> keep) {
  check_square(m, dims, "partial_trace");
  std::vector<bool> kept(dims.size(), false);
  for (int s : keep) {
    check_subsystem(dims, s, "partial_trace");
    kept[s] = true;
  }
  std::vector<int> kept_dims, traced_dims;
  for (std::size_t k = 0; k < dims.size(); ++k) (kept[k] ? kept_dims : traced_dims).push_back(dims[k]);

  const auto digits = basis_digits(dims);
  const int n = dims.total();
  std::vector<int> kept_idx(n), traced_idx(n);
  for (int idx = 0; idx < n; ++idx) {
    std::vector<int> kd, td;
    for (std::size_t k = 0; k < dims.size(); ++k) (kept[k] ? kd : td).push_back(digits[idx][k]);
    kept_idx[idx] = compose_index(kd, kept_dims);
    traced_idx[idx] = compose_index(td, traced_dims);
  }
  const int out_dim = std::accumulate(kept_dims.begin(), kept_dims.end(), 1, std::multiplies<>());
  CMatrix out = CMatrix::Zero(out_dim, out_dim);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r)
      if (traced_idx[r] == traced_idx[c]) out(kept_idx[r], kept_idx[c]) += m(r, c);
  return out;
}

CMatrix partial_trace(const CMatrix& m, const SubsystemDims& dims, std::initializer_list<int> keep) {
  return partial_trace(m, dims, std::span<const int>(keep.begin(), keep.size()));
}

CMatrix partial_transpose(const CMatrix& m, const SubsystemDims& dims, int sys) {
  const int systems[1] = {sys};
  return partial_transpose(m, dims, std::span<const int>(systems));
}

CMatrix partial_transpose(const CMatrix& m, const SubsystemDims& dims, std::span<const int> systems) {
  check_square(m, dims, "partial_transpose");
  std::vector<bool> flip(dims.size(), false);
  for (int s : systems) {
    check_subsystem(dims, s, "partial_transpose");
    flip[s] = true;
  }
  const auto digits = basis_digits(dims);
  const int n = dims.total();
  CMatrix out(n, n);
  std::vector<int> rd(dims.size()), cd(dims.size());
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      for (std::size_t k = 0; k < dims.size(); ++k) {
        rd[k] = flip[k] ? digits[c][k] : digits[r][k];
        cd[k] = flip[k] ? digits[r][k] : digits[c][k];
      }
      out(compose_index(rd, dims.values()), compose_index(cd, dims.values())) = m(r, c);
    }
  }
  return out;
}

CMatrix permute_subsystems(const CMatrix& m, const SubsystemDims& dims, std::span<const int> perm) {
  check_square(m, dims, "permute_subsystems");
  if (perm.size() != dims.size()) throw DimensionError("permute_subsystems: permutation length mismatch");
  std::vector<bool> seen(dims.size(), false);
  std::vector<int> new_dims(dims.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    check_subsystem(dims, perm[i], "permute_subsystems");
    if (seen[perm[i]]) throw DimensionError("permute_subsystems: not a permutation");
    seen[perm[i]] = true;
    new_dims[i] = dims[perm[i]];
  }
  const auto digits = basis_digits(dims);
  const int n = dims.total();
  std::vector<int> target(n);
  std::vector<int> nd(dims.size());
  for (int idx = 0; idx < n; ++idx) {
    for (std::size_t i = 0; i < perm.size(); ++i) nd[i] = digits[idx][perm[i]];
    target[idx] = compose_index(nd, new_dims);
  }
  CMatrix out(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) out(target[r], target[c]) = m(r, c);
  return out;
}

bool all_finite(const CMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

bool is_hermitian(const CMatrix& m, double tol) {
  if (m.rows() != m.cols() || !all_finite(m)) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

CMatrix hermitian_part(const CMatrix& m) { return (m + m.adjoint()) / 2.0; }

RVector hermitian_eigenvalues(const CMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("hermitian_eigenvalues: matrix is not square");
  if (!is_hermitian(m)) throw InvariantError("hermitian: matrix is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double min_eigenvalue(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return hermitian_eigenvalues(m).minCoeff();
}

bool is_psd(const CMatrix& m, double tol) {
  if (!is_hermitian(m)) return false;
  return m.size() == 0 || min_eigenvalue(m) >= -tol;
}

bool is_unitary(const CMatrix& m, double tol) {
  if (m.rows() != m.cols() || !all_finite(m)) return false;
  return (m.adjoint() * m - CMatrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tol;
}

CMatrix psd_sqrt(const CMatrix& m) {
  if (!is_hermitian(m)) throw InvariantError("psd_sqrt: matrix is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(m));
  RVector ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double trace_norm(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues().sum();
}

double fidelity(const CMatrix& rho, const CMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw DimensionError("fidelity: shape mismatch");
  if (!is_psd(rho) || !is_psd(sigma)) throw InvariantError("fidelity: arguments must be PSD");
  const double f = trace_norm(psd_sqrt(rho) * psd_sqrt(sigma));
  return std::clamp(f, 0.0, 1.0);
}

double negative_part_trace(const CMatrix& h) {
  const RVector ev = hermitian_eigenvalues(h);
  double neg = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev[i] < 0.0) neg -= ev[i];
  return neg;
}

RMatrix realify_hermitian(const CMatrix& h) {
  if (!is_hermitian(h)) throw InvariantError("realify_hermitian: matrix is not Hermitian within tolerance");
  const CMatrix s = hermitian_part(h);
  const Eigen::Index n = s.rows();
  RMatrix out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = s.real();
  out.bottomRightCorner(n, n) = s.real();
  out.topRightCorner(n, n) = -s.imag();
  out.bottomLeftCorner(n, n) = s.imag();
  return out;
}

}  // namespace telent
