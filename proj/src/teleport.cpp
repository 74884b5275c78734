#include "telent/teleport.hpp"

#include <cmath>
#include <string>

namespace telent {

TeleportationAssemblage::TeleportationAssemblage(std::vector<std::vector<CMatrix>> sigma, InputEnsemble ensemble)
    : sigma_(std::move(sigma)), ensemble_(std::move(ensemble)) {
  if (sigma_.empty() || sigma_.front().empty()) throw DimensionError("assemblage must have outcomes and inputs");
  const int nx = ensemble_.size();
  d_b_ = static_cast<int>(sigma_.front().front().rows());
  for (auto& row : sigma_) {
    if (static_cast<int>(row.size()) != nx) throw DimensionError("assemblage input count does not match ensemble");
    for (auto& s : row) {
      if (s.rows() != d_b_ || s.cols() != d_b_) throw DimensionError("assemblage members must share Bob's dimension");
      if (!all_finite(s)) throw InvariantError("finite: assemblage member has non-finite entries");
      if (!is_hermitian(s)) throw InvariantError("hermitian: assemblage member is not Hermitian");
      s = hermitian_part(s);
      if (min_eigenvalue(s) < -kPsdTol) throw InvariantError("psd: assemblage member has a negative eigenvalue");
    }
  }
  std::vector<CMatrix> marginals(nx, CMatrix::Zero(d_b_, d_b_));
  for (const auto& row : sigma_)
    for (int x = 0; x < nx; ++x) marginals[x] += row[x];
  for (int x = 0; x < nx; ++x) {
    if (std::abs(marginals[x].trace().real() - 1.0) > 1e-8)
      throw InvariantError("normalization: sum_a tr sigma[a][x] differs from 1 at x=" + std::to_string(x));
    if ((marginals[x] - marginals[0]).cwiseAbs().maxCoeff() > 1e-8)
      throw InvariantError("no-signalling: Bob's marginal depends on the input at x=" + std::to_string(x));
  }
}

CMatrix TeleportationAssemblage::bob_marginal() const {
  CMatrix m = CMatrix::Zero(d_b_, d_b_);
  for (const auto& row : sigma_)
    for (const auto& s : row) m += s;
  return m / static_cast<double>(n_inputs());
}

ChannelOperators::ChannelOperators(std::vector<CMatrix> ops, int d_v, int d_b, double tol)
    : ops_(std::move(ops)), d_v_(d_v), d_b_(d_b) {
  if (ops_.empty()) throw DimensionError("channel operators must be nonempty");
  const int n = d_v * d_b;
  CMatrix sum = CMatrix::Zero(n, n);
  for (auto& m : ops_) {
    if (m.rows() != n || m.cols() != n) throw DimensionError("channel operator dimension mismatch");
    if (!is_hermitian(m, std::max(tol, kHermitianTol))) throw InvariantError("hermitian: channel operator is not Hermitian");
    m = hermitian_part(m);
    sum += m;
  }
  const CMatrix rho_b = partial_trace(sum, {d_v, d_b}, {1}) / static_cast<double>(d_v);
  if (std::abs(rho_b.trace().real() - 1.0) > tol)
    throw InvariantError("normalization: channel operators do not sum to unit-trace marginal");
  if ((sum - kron(identity(d_v), rho_b)).cwiseAbs().maxCoeff() > tol)
    throw InvariantError("normalization: channel operators do not sum to I x rho_B");
}

CMatrix contract_input(const CMatrix& x, const CMatrix& omega, int d_b) {
  const int d_v = static_cast<int>(omega.rows());
  if (x.rows() != d_v * d_b) throw DimensionError("contract_input: dimension mismatch");
  CMatrix out = CMatrix::Zero(d_b, d_b);
  for (int i = 0; i < d_v; ++i)
    for (int j = 0; j < d_v; ++j)
      if (omega(j, i) != Complex(0.0)) out += x.block(i * d_b, j * d_b, d_b, d_b) * omega(j, i);
  return out;
}

TeleportationAssemblage generate_assemblage(const DensityMatrix& rho, const Povm& m, const InputEnsemble& e) {
  if (rho.dims().size() != 2) throw DimensionError("generate_assemblage: shared state must be bipartite");
  if (m.dims().size() != 2) throw DimensionError("generate_assemblage: measurement must act on V x A");
  const int d_v = e.d();
  const int d_a = rho.dims()[0];
  const int d_b = rho.dims()[1];
  if (m.dims()[0] != d_v || m.dims()[1] != d_a)
    throw DimensionError("generate_assemblage: measurement dims do not match input and Alice dimensions");
  const SubsystemDims vab{d_v, d_a, d_b};
  std::vector<std::vector<CMatrix>> sigma(m.size(), std::vector<CMatrix>(e.size()));
  for (int x = 0; x < e.size(); ++x) {
    const CMatrix joint = kron(e[x], rho.mat());
    for (int a = 0; a < m.size(); ++a) {
      const CMatrix op = kron(m.elements()[a], identity(d_b)) * joint;
      sigma[a][x] = partial_trace(op, vab, {2});
    }
  }
  return TeleportationAssemblage(std::move(sigma), e);
}

ChannelOperators channel_operators(const DensityMatrix& rho, const Povm& m) {
  const int d_a = rho.dims()[0];
  const int d_b = rho.dims()[1];
  const int d_v = m.dims()[0];
  if (m.dims()[1] != d_a) throw DimensionError("channel_operators: measurement does not act on Alice's system");
  const SubsystemDims vab{d_v, d_a, d_b};
  const CMatrix joint = kron(identity(d_v), rho.mat());
  std::vector<CMatrix> ops;
  for (const auto& ma : m.elements()) ops.push_back(partial_trace(kron(ma, identity(d_b)) * joint, vab, {0, 2}));
  return ChannelOperators(std::move(ops), d_v, d_b);
}

TeleportationAssemblage assemblage_from_channel_operators(const std::vector<CMatrix>& ops, const InputEnsemble& e,
                                                          int d_b) {
  std::vector<std::vector<CMatrix>> sigma(ops.size(), std::vector<CMatrix>(e.size()));
  for (std::size_t a = 0; a < ops.size(); ++a)
    for (int x = 0; x < e.size(); ++x) sigma[a][x] = hermitian_part(contract_input(ops[a], e[x], d_b));
  return TeleportationAssemblage(std::move(sigma), e);
}

double average_fidelity(const TeleportationAssemblage& asm_, const std::optional<std::vector<CMatrix>>& corrections) {
  if (asm_.d_v() != asm_.d_b()) throw DimensionError("average_fidelity: input and output dimensions differ");
  if (corrections && static_cast<int>(corrections->size()) != asm_.n_outcomes())
    throw DimensionError("average_fidelity: one correction per outcome required");
  double total = 0.0;
  for (int x = 0; x < asm_.n_inputs(); ++x) {
    for (int a = 0; a < asm_.n_outcomes(); ++a) {
      const CMatrix& s = asm_(a, x);
      const double p = s.trace().real();
      if (p <= 1e-12) continue;
      CMatrix out = s / p;
      if (corrections) out = (*corrections)[a] * out * (*corrections)[a].adjoint();
      const double f = fidelity(hermitian_part(out), asm_.ensemble()[x]);
      total += p * f * f;
    }
  }
  return total / asm_.n_inputs();
}

std::vector<NormalFormEntry> bsm_normal_form(const DensityMatrix& rho, const Povm& m) {
  const int d_a = rho.dims()[0];
  const int d_b = rho.dims()[1];
  const int d = m.dims()[0];
  if (m.dims()[1] != d_a) throw DimensionError("bsm_normal_form: measurement does not act on Alice's system");
  // Spaces ordered V, V1, A, B; Phi+ lives on V x V1.
  const SubsystemDims dims{d, d, d_a, d_b};
  const CMatrix joint = kron(max_entangled(d).mat(), rho.mat());
  std::vector<NormalFormEntry> out;
  for (const auto& ma : m.elements()) {
    const CMatrix op = kron({identity(d), ma, identity(d_b)}) * joint;
    const CMatrix reduced = hermitian_part(partial_trace(op, dims, {0, 3}));
    NormalFormEntry entry;
    entry.probability = reduced.trace().real();
    if (entry.probability > 1e-12) entry.state.emplace(reduced / entry.probability, SubsystemDims{d, d_b});
    out.push_back(std::move(entry));
  }
  return out;
}

std::vector<std::vector<CMatrix>> reconstruct_from_normal_form(const std::vector<NormalFormEntry>& nf,
                                                               const InputEnsemble& e, int d_b) {
  const int d = e.d();
  const SubsystemDims dims{d, d, d_b};
  const CMatrix bell = kron(max_entangled(d).mat(), identity(d_b));
  std::vector<std::vector<CMatrix>> sigma(nf.size(), std::vector<CMatrix>(e.size(), CMatrix::Zero(d_b, d_b)));
  for (std::size_t a = 0; a < nf.size(); ++a) {
    if (!nf[a].state) continue;
    for (int x = 0; x < e.size(); ++x) {
      const CMatrix joint = kron(e[x], nf[a].state->mat());
      sigma[a][x] = static_cast<double>(d * d) * nf[a].probability * partial_trace(bell * joint, dims, {2});
    }
  }
  return sigma;
}

}  // namespace telent
