#include "telent/states.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

namespace telent {

namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(name) + ": parameter must lie in [0,1]");
}

CVector basis_vector(int d, int i) {
  CVector v = CVector::Zero(d);
  v[i] = 1.0;
  return v;
}

CVector max_entangled_vector(int d) {
  CVector v = CVector::Zero(d * d);
  for (int i = 0; i < d; ++i) v[i * d + i] = 1.0 / std::sqrt(static_cast<double>(d));
  return v;
}

CMatrix ginibre(int rows, int cols, CounterRng& rng) {
  CMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = Complex(rng.normal(), rng.normal());
  return g;
}

}  // namespace

DensityMatrix::DensityMatrix(const CMatrix& mat, SubsystemDims dims) : dims_(std::move(dims)) {
  if (mat.rows() != mat.cols() || mat.rows() == 0) throw DimensionError("density matrix must be square and nonempty");
  if (mat.rows() != dims_.total()) throw DimensionError("density matrix dimension does not match subsystem dims");
  if (!all_finite(mat)) throw InvariantError("finite: density matrix has non-finite entries");
  if (!is_hermitian(mat)) throw InvariantError("hermitian: density matrix is not Hermitian");
  mat_ = hermitian_part(mat);
  if (min_eigenvalue(mat_) < -kPsdTol) throw InvariantError("psd: density matrix has a negative eigenvalue");
  if (std::abs(mat_.trace().real() - 1.0) > 1e-9) throw InvariantError("unit-trace: density matrix trace differs from 1");
}

DensityMatrix::DensityMatrix(const CMatrix& mat) : DensityMatrix(mat, SubsystemDims{static_cast<int>(mat.rows())}) {}

Povm::Povm(std::vector<CMatrix> elements, SubsystemDims dims, std::optional<std::vector<CMatrix>> corrections)
    : elements_(std::move(elements)), dims_(std::move(dims)), corrections_(std::move(corrections)) {
  if (elements_.empty()) throw DimensionError("povm needs at least one element");
  const int n = dims_.total();
  CMatrix sum = CMatrix::Zero(n, n);
  for (auto& m : elements_) {
    if (m.rows() != n || m.cols() != n) throw DimensionError("povm element dimension does not match subsystem dims");
    if (!is_hermitian(m)) throw InvariantError("hermitian: povm element is not Hermitian");
    m = hermitian_part(m);
    if (min_eigenvalue(m) < -kPsdTol) throw InvariantError("psd: povm element has a negative eigenvalue");
    sum += m;
  }
  if ((sum - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-9)
    throw InvariantError("completeness: povm elements do not sum to identity");
  if (corrections_) {
    if (corrections_->size() != elements_.size())
      throw DimensionError("povm corrections must match the element count");
    for (const auto& u : *corrections_)
      if (!is_unitary(u)) throw InvariantError("unitary: povm correction is not unitary");
  }
}

InputEnsemble::InputEnsemble(std::vector<DensityMatrix> states) : states_(std::move(states)) {
  if (states_.empty()) throw DimensionError("input ensemble must be nonempty");
  d_ = states_.front().dim();
  for (const auto& s : states_)
    if (s.dim() != d_) throw DimensionError("input ensemble members must share one dimension");
}

CMatrix pure_projector(const CVector& psi) { return psi * psi.adjoint(); }

CMatrix weyl_unitary(int d, int j, int k) {
  CMatrix x = CMatrix::Zero(d, d);
  CMatrix z = CMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    x((i + 1) % d, i) = 1.0;
    z(i, i) = std::polar(1.0, 2.0 * std::numbers::pi * i / d);
  }
  CMatrix u = CMatrix::Identity(d, d);
  for (int t = 0; t < j; ++t) u = u * x;
  for (int t = 0; t < k; ++t) u = u * z;
  return u;
}

DensityMatrix max_entangled(int d) {
  if (d < 2) throw DimensionError("max_entangled: d must be at least 2");
  return DensityMatrix(pure_projector(max_entangled_vector(d)), {d, d});
}

Povm bell_measurement(int d) {
  if (d < 2) throw DimensionError("bell_measurement: d must be at least 2");
  const CVector phi = max_entangled_vector(d);
  std::vector<CMatrix> elements, corrections;
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) {
      const CMatrix u = weyl_unitary(d, j, k);
      const CVector v = kron(u, identity(d)) * phi;
      elements.push_back(pure_projector(v));
      corrections.push_back(u);
    }
  }
  return Povm(std::move(elements), {d, d}, std::move(corrections));
}

Povm partial_bell_measurement(int d) {
  if (d < 2) throw DimensionError("partial_bell_measurement: d must be at least 2");
  const CMatrix phi = pure_projector(max_entangled_vector(d));
  return Povm({phi, identity(d * d) - phi}, {d, d});
}

InputEnsemble pauli_eigenstate_ensemble(const std::vector<PauliAxis>& axes) {
  if (axes.empty()) throw std::invalid_argument("pauli_eigenstate_ensemble: no axes given");
  const double s = 1.0 / std::sqrt(2.0);
  const Complex i1(0.0, 1.0);
  std::vector<DensityMatrix> states;
  for (PauliAxis axis : axes) {
    CVector plus(2), minus(2);
    switch (axis) {
      case PauliAxis::X:
        plus << s, s;
        minus << s, -s;
        break;
      case PauliAxis::Y:
        plus << s, i1 * s;
        minus << s, -i1 * s;
        break;
      case PauliAxis::Z:
        plus << 1.0, 0.0;
        minus << 0.0, 1.0;
        break;
    }
    states.emplace_back(pure_projector(plus));
    states.emplace_back(pure_projector(minus));
  }
  return InputEnsemble(std::move(states));
}

InputEnsemble random_tomo_complete_ensemble(int d, std::uint64_t seed) {
  if (d < 2) throw DimensionError("random_tomo_complete_ensemble: d must be at least 2");
  const CounterRng root(seed);
  for (std::uint64_t attempt = 0; attempt < 16; ++attempt) {
    CounterRng rng = root.split(attempt);
    std::vector<DensityMatrix> states;
    for (int x = 0; x < d * d; ++x) states.emplace_back(pure_projector(random_pure_state(d, rng)));
    InputEnsemble e(std::move(states));
    if (is_tomographically_complete(e)) return e;
  }
  throw std::runtime_error("random_tomo_complete_ensemble: no complete ensemble after 16 attempts");
}

DensityMatrix flag_state(double p) {
  check_probability(p, "flag_state");
  const CMatrix flag = pure_projector(kron(basis_vector(2, 0), basis_vector(2, 1)));
  return DensityMatrix(p * max_entangled(2).mat() + (1.0 - p) * flag, {2, 2});
}

DensityMatrix isotropic_state(double p) {
  check_probability(p, "isotropic_state");
  return DensityMatrix(p * max_entangled(2).mat() + (1.0 - p) * identity(4) / 4.0, {2, 2});
}

DensityMatrix horodecki_state(double a) {
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("horodecki_state: a must lie in (0,1)");
  CMatrix m = CMatrix::Zero(9, 9);
  for (int i = 0; i < 9; ++i) m(i, i) = a;
  for (int i : {0, 4, 8})
    for (int j : {0, 4, 8}) m(i, j) = a;
  const double b = (1.0 + a) / 2.0;
  const double c = std::sqrt(1.0 - a * a) / 2.0;
  m(6, 6) = b;
  m(8, 8) = b;
  m(6, 8) = c;
  m(8, 6) = c;
  return DensityMatrix(m / (8.0 * a + 1.0), {3, 3});
}

DensityMatrix upb_pyramid_state() {
  const double h = 0.5 * std::sqrt(1.0 + std::sqrt(5.0));
  const double norm = 2.0 / std::sqrt(5.0 + std::sqrt(5.0));
  std::vector<CVector> v(5);
  for (int j = 0; j < 5; ++j) {
    const double t = 2.0 * std::numbers::pi * j / 5.0;
    v[j] = CVector(3);
    v[j] << norm * std::cos(t), norm * std::sin(t), norm * h;
  }
  CMatrix proj = CMatrix::Zero(9, 9);
  for (int j = 0; j < 5; ++j) {
    const CVector psi = kron(CMatrix(v[j]), CMatrix(v[(2 * j) % 5]));
    proj += pure_projector(psi);
  }
  return DensityMatrix((identity(9) - proj) / 4.0, {3, 3});
}

int gram_rank(const InputEnsemble& e) {
  const int n = e.size();
  RMatrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = (e[i] * e[j]).trace().real();
  Eigen::SelfAdjointEigenSolver<RMatrix> es(g, Eigen::EigenvaluesOnly);
  int rank = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()[i] > 1e-8) ++rank;
  return rank;
}

bool is_tomographically_complete(const InputEnsemble& e) { return gram_rank(e) == e.d() * e.d(); }

CVector random_pure_state(int d, CounterRng& rng) {
  CVector v = ginibre(d, 1, rng);
  return v / v.norm();
}

DensityMatrix random_density_matrix(const SubsystemDims& dims, CounterRng& rng, int rank) {
  const int n = dims.total();
  const CMatrix g = ginibre(n, rank > 0 ? rank : n, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(hermitian_part(rho), dims);
}

DensityMatrix random_separable_state(int d_a, int d_b, int terms, CounterRng& rng) {
  CMatrix rho = CMatrix::Zero(d_a * d_b, d_a * d_b);
  double total = 0.0;
  for (int t = 0; t < terms; ++t) {
    const double w = rng.uniform();
    rho += w * kron(pure_projector(random_pure_state(d_a, rng)), pure_projector(random_pure_state(d_b, rng)));
    total += w;
  }
  return DensityMatrix(hermitian_part(rho / total), {d_a, d_b});
}

Povm random_povm(const SubsystemDims& dims, int n_outcomes, CounterRng& rng) {
  const int n = dims.total();
  std::vector<CMatrix> g;
  CMatrix sum = CMatrix::Zero(n, n);
  for (int a = 0; a < n_outcomes; ++a) {
    const CMatrix x = ginibre(n, n, rng);
    g.push_back(x * x.adjoint());
    sum += g.back();
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(sum));
  const CMatrix inv_sqrt =
      es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
  std::vector<CMatrix> elements;
  for (const auto& ga : g) elements.push_back(hermitian_part(inv_sqrt * ga * inv_sqrt));
  return Povm(std::move(elements), dims);
}

}  // namespace telent
