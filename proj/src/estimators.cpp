#include "telent/estimators.hpp"

#include <cmath>
#include <limits>

#include "telent/sdp/sdpa.hpp"

namespace telent {

using sdp::Expr;
using sdp::SdpProblem;
using sdp::SolveStatus;

double Witness::value(const TeleportationAssemblage& asm_) const {
  if (static_cast<int>(f.size()) != asm_.n_outcomes()) throw DimensionError("witness: outcome count mismatch");
  double w = offset;
  for (int a = 0; a < asm_.n_outcomes(); ++a) {
    if (static_cast<int>(f[a].size()) != asm_.n_inputs()) throw DimensionError("witness: input count mismatch");
    for (int x = 0; x < asm_.n_inputs(); ++x) {
      if (f[a][x].rows() != asm_.d_b() || f[a][x].cols() != asm_.d_b())
        throw DimensionError("witness: operator size mismatch");
      w += (f[a][x] * asm_(a, x)).trace().real();
    }
  }
  return w;
}

std::string to_string(BoundDirection d) {
  return d == BoundDirection::ExactAtRelaxation ? "ExactAtRelaxation" : "LowerBoundOnEntanglement";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

sdp::SdpSolution run(const SdpProblem& p, const EstimatorOptions& opt, const std::string& name) {
  if (!opt.sdpa_dump_prefix.empty()) sdp::write_sdpa(p, opt.sdpa_dump_prefix + name + ".dat-s");
  sdp::SolveOptions so;
  so.tol = opt.tol;
  sdp::SdpSolution sol = sdp::solve(p, so);
  if (sol.status == SolveStatus::NumericalFailure) {
    so.tol = opt.tol * 10.0;
    sol = sdp::solve(p, so);
  }
  return sol;
}

QuantifierReport make_report(const std::string& name, const sdp::SdpSolution& sol, const SeparabilityRelaxation& r,
                             BoundDirection dir, const EstimatorOptions& opt) {
  QuantifierReport rep;
  rep.quantifier = name;
  rep.status = sol.status;
  rep.value = sol.status == SolveStatus::Optimal ? sol.objective_value : kNaN;
  rep.relaxation = r;
  rep.bound_direction = dir;
  rep.parameters["tol"] = opt.tol;
  rep.parameters["iterations"] = sol.iterations;
  return rep;
}

Bipartition state_cut(const DensityMatrix& rho) {
  if (rho.dims().size() != 2) throw DimensionError("expected a bipartite state");
  return {rho.dims()[0], rho.dims()[1]};
}

Bipartition channel_cut(const TeleportationAssemblage& asm_) { return {asm_.d_v(), asm_.d_b()}; }

BoundDirection assemblage_direction(const TeleportationAssemblage& asm_) {
  return is_tomographically_complete(asm_.ensemble()) ? BoundDirection::ExactAtRelaxation
                                                      : BoundDirection::LowerBoundOnEntanglement;
}

void add_assemblage_parameters(QuantifierReport& rep, const TeleportationAssemblage& asm_) {
  rep.parameters["n_outcomes"] = asm_.n_outcomes();
  rep.parameters["n_inputs"] = asm_.n_inputs();
  rep.parameters["d_b"] = asm_.d_b();
}

std::vector<sdp::VarId> declare_all(SdpProblem& p, int count, int dim) {
  std::vector<sdp::VarId> v;
  for (int i = 0; i < count; ++i) v.push_back(p.declare_hermitian(dim));
  return v;
}

Expr sum_of(const SdpProblem& p, const std::vector<sdp::VarId>& vars) {
  Expr s = p.var(vars.at(0));
  for (std::size_t i = 1; i < vars.size(); ++i) s += p.var(vars[i]);
  return s;
}

std::vector<CMatrix> values(const sdp::SdpSolution& sol, const std::vector<sdp::VarId>& vars) {
  std::vector<CMatrix> out;
  if (sol.primal.empty()) return out;
  for (const auto& v : vars) out.push_back(sol.value(v));
  return out;
}

}  // namespace

ClassicalityResult classicality(const TeleportationAssemblage& asm_, const SeparabilityRelaxation& r,
                                const EstimatorOptions& opt) {
  const int dv = asm_.d_v(), db = asm_.d_b(), na = asm_.n_outcomes(), nx = asm_.n_inputs();
  if (!(r.cut == channel_cut(asm_))) throw DimensionError("classicality: relaxation cut does not match V x B");
  SdpProblem p;
  const auto m = declare_all(p, na, dv * db);
  const auto rho_b = p.declare_hermitian(db);
  std::vector<sdp::ConstraintId> data;
  for (int a = 0; a < na; ++a) {
    constrain_in_relaxed_cone(p, p.var(m[a]), r);
    for (int x = 0; x < nx; ++x)
      data.push_back(p.add_equality(sdp::contract_input(p.var(m[a]), asm_.ensemble()[x], db) - asm_(a, x)));
  }
  p.add_equality(sum_of(p, m) - sdp::embed_left_identity(dv, p.var(rho_b)));

  const auto sol = run(p, opt, "classicality");
  if (sol.status == SolveStatus::Optimal) {
    return ClassicalModel{ChannelOperators(values(sol, m), dv, db, std::max(1e-6, 100.0 * opt.tol))};
  }
  if (sol.status != SolveStatus::Infeasible)
    throw SolverFailure("classicality: solver returned " + sdp::to_string(sol.status));

  const auto y = sdp::dual_witness(sol, data);
  double scale = 0.0;
  for (const auto& yi : y) scale = std::max(scale, hermitian_eigenvalues(hermitian_part(yi)).cwiseAbs().maxCoeff());
  if (!(scale > 0.0)) throw SolverFailure("classicality: degenerate infeasibility certificate");
  Witness wit;
  wit.f.assign(na, std::vector<CMatrix>(nx));
  for (int a = 0; a < na; ++a)
    for (int x = 0; x < nx; ++x) wit.f[a][x] = hermitian_part(y[a * nx + x]) / scale;

  if (opt.tighten_witness) {
    // Least witness value over relaxed classical assemblages with unit total weight.
    SdpProblem q;
    const auto mq = declare_all(q, na, dv * db);
    const auto rq = q.declare_hermitian(db);
    Expr obj = Expr::zero(1);
    for (int a = 0; a < na; ++a) {
      constrain_in_relaxed_cone(q, q.var(mq[a]), r);
      for (int x = 0; x < nx; ++x)
        obj += sdp::trace_with(wit.f[a][x], sdp::contract_input(q.var(mq[a]), asm_.ensemble()[x], db));
    }
    q.add_equality(sum_of(q, mq) - sdp::embed_left_identity(dv, q.var(rq)));
    q.add_equality(sdp::trace(q.var(rq)) - CMatrix::Identity(1, 1));
    q.set_objective(obj, sdp::Sense::Minimize);
    const auto best = run(q, opt, "classicality_offset");
    if (best.status == SolveStatus::Optimal) wit.offset = -best.objective_value;
  }
  return wit;
}

QuantifierReport negativity(const DensityMatrix& rho, const EstimatorOptions& opt) {
  const Bipartition cut = state_cut(rho);
  const SubsystemDims dims{cut.left, cut.right};
  SdpProblem p;
  const auto pos = p.declare_hermitian(rho.dim());
  const auto neg = p.declare_hermitian(rho.dim());
  p.add_equality(p.var(pos) - p.var(neg) - rho.mat());
  p.add_psd(sdp::partial_transpose(p.var(pos), dims, {0}));
  p.add_psd(sdp::partial_transpose(p.var(neg), dims, {0}));
  p.set_objective(sdp::trace(p.var(neg)), sdp::Sense::Minimize);
  const auto sol = run(p, opt, "negativity");
  auto rep = make_report("negativity", sol, SeparabilityRelaxation::ppt(cut), BoundDirection::ExactAtRelaxation, opt);
  if (!sol.primal.empty()) rep.certificate = Certificate{{}, {sol.value(pos), sol.value(neg)}, std::nullopt};
  return rep;
}

QuantifierReport negativity_from_teleportation(const TeleportationAssemblage& asm_, const EstimatorOptions& opt) {
  const int dv = asm_.d_v(), db = asm_.d_b(), na = asm_.n_outcomes(), nx = asm_.n_inputs();
  SdpProblem p;
  const auto mp = declare_all(p, na, dv * db);
  const auto mm = declare_all(p, na, dv * db);
  const auto rp = p.declare_hermitian(db);
  const auto rm = p.declare_hermitian(db);
  for (int a = 0; a < na; ++a) {
    p.add_psd(p.var(mp[a]));
    p.add_psd(p.var(mm[a]));
    for (int x = 0; x < nx; ++x) {
      const CMatrix& w = asm_.ensemble()[x];
      p.add_equality(sdp::contract_input(p.var(mp[a]) - p.var(mm[a]), w, db) - asm_(a, x));
    }
  }
  p.add_equality(sum_of(p, mp) - sdp::embed_left_identity(dv, p.var(rp)));
  p.add_equality(sum_of(p, mm) - sdp::embed_left_identity(dv, p.var(rm)));
  p.set_objective(sdp::trace(p.var(rm)), sdp::Sense::Minimize);
  const auto sol = run(p, opt, "negativity_from_teleportation");
  auto rep = make_report("negativity_from_teleportation", sol, SeparabilityRelaxation::ppt(channel_cut(asm_)),
                         assemblage_direction(asm_), opt);
  add_assemblage_parameters(rep, asm_);
  if (!sol.primal.empty()) {
    Certificate c;
    c.channel_operators = values(sol, mp);
    for (auto& op : values(sol, mm)) c.channel_operators.push_back(op);
    c.decomposition = {sol.value(rp), sol.value(rm)};
    rep.certificate = std::move(c);
  }
  return rep;
}

QuantifierReport negativity_from_witness(const Witness& wit, double w, const InputEnsemble& e, int n_outcomes,
                                         const EstimatorOptions& opt) {
  if (static_cast<int>(wit.f.size()) != n_outcomes || wit.f.empty() || wit.f[0].empty())
    throw DimensionError("negativity_from_witness: witness table does not match outcome count");
  const int dv = e.d(), nx = e.size();
  const int db = static_cast<int>(wit.f[0][0].rows());
  SdpProblem p;
  const auto mp = declare_all(p, n_outcomes, dv * db);
  const auto mm = declare_all(p, n_outcomes, dv * db);
  const auto rp = p.declare_hermitian(db);
  const auto rm = p.declare_hermitian(db);
  Expr value = Expr::constant(CMatrix::Constant(1, 1, Complex(wit.offset - w)));
  for (int a = 0; a < n_outcomes; ++a) {
    if (static_cast<int>(wit.f[a].size()) != nx) throw DimensionError("negativity_from_witness: input count mismatch");
    p.add_psd(p.var(mp[a]));
    p.add_psd(p.var(mm[a]));
    for (int x = 0; x < nx; ++x)
      value += sdp::trace_with(kron(e[x], wit.f[a][x]), p.var(mp[a]) - p.var(mm[a]));
  }
  p.add_equality(value);
  p.add_equality(sum_of(p, mp) - sdp::embed_left_identity(dv, p.var(rp)));
  p.add_equality(sum_of(p, mm) - sdp::embed_left_identity(dv, p.var(rm)));
  p.add_equality(sdp::trace(p.var(rp)) - sdp::trace(p.var(rm)) - CMatrix::Identity(1, 1));
  p.set_objective(sdp::trace(p.var(rm)), sdp::Sense::Minimize);
  const auto sol = run(p, opt, "negativity_from_witness");
  auto rep = make_report("negativity_from_witness", sol, SeparabilityRelaxation::ppt({dv, db}),
                         BoundDirection::LowerBoundOnEntanglement, opt);
  rep.parameters["w"] = w;
  rep.parameters["n_outcomes"] = n_outcomes;
  rep.parameters["n_inputs"] = nx;
  if (!sol.primal.empty()) rep.certificate = Certificate{{}, {sol.value(rp), sol.value(rm)}, wit};
  return rep;
}

QuantifierReport ent_robustness(const DensityMatrix& rho, EntVariant variant, const SeparabilityRelaxation& r,
                                const EstimatorOptions& opt) {
  const Bipartition cut = state_cut(rho);
  if (!(r.cut == cut)) throw DimensionError("ent_robustness: relaxation cut does not match the state");
  const int d = rho.dim();
  SdpProblem p;
  std::string name;
  Expr noise;
  Expr objective;
  sdp::VarId nv;
  switch (variant) {
    case EntVariant::Generalized:
      name = "eps_gen";
      nv = p.declare_hermitian(d);
      noise = p.var(nv);
      p.add_psd(noise);
      objective = sdp::trace(noise);
      break;
    case EntVariant::Separable:
      name = "eps_sep";
      nv = p.declare_hermitian(d);
      noise = p.var(nv);
      constrain_in_relaxed_cone(p, noise, r);
      objective = sdp::trace(noise);
      break;
    case EntVariant::Random: {
      name = "eps_r";
      nv = p.declare_hermitian(1);
      p.add_psd(p.var(nv));
      noise = Complex(1.0 / d) * sdp::scalar_times_identity(p.var(nv), d);
      objective = p.var(nv);
      break;
    }
  }
  constrain_in_relaxed_cone(p, noise + rho.mat(), r);
  p.set_objective(objective, sdp::Sense::Minimize);
  const auto sol = run(p, opt, name);
  auto rep = make_report(name, sol, r, BoundDirection::ExactAtRelaxation, opt);
  if (!sol.primal.empty()) {
    const CMatrix n = variant == EntVariant::Random ? CMatrix(sol.value(nv)(0, 0) / double(d) * identity(d))
                                                    : sol.value(nv);
    rep.certificate = Certificate{{}, {n, rho.mat() + n}, std::nullopt};
  }
  return rep;
}

QuantifierReport tel_robustness(const TeleportationAssemblage& asm_, TelVariant variant,
                                const SeparabilityRelaxation& r, const EstimatorOptions& opt) {
  if (!(r.cut == channel_cut(asm_))) throw DimensionError("tel_robustness: relaxation cut does not match V x B");
  const int dv = asm_.d_v(), db = asm_.d_b(), na = asm_.n_outcomes(), nx = asm_.n_inputs();
  const SubsystemDims vb{dv, db};
  SdpProblem p;
  // K_a = (1 + r) M*_a; the noise block carries r times the noise assemblage.
  const auto k = declare_all(p, na, dv * db);
  for (const auto& v : k) constrain_in_relaxed_cone(p, p.var(v), r);

  std::string name;
  std::vector<Expr> noise_ax(na * nx);
  Expr noise_marginal;
  Expr objective;
  std::vector<sdp::VarId> nvars;
  if (variant == TelVariant::Random) {
    name = "tau_r";
    nvars = declare_all(p, na, 1);
    noise_marginal = Expr::zero(db);
    objective = Expr::zero(1);
    for (int a = 0; a < na; ++a) {
      p.add_psd(p.var(nvars[a]));
      const Expr q = Complex(1.0 / db) * sdp::scalar_times_identity(p.var(nvars[a]), db);
      for (int x = 0; x < nx; ++x) noise_ax[a * nx + x] = q;
      noise_marginal += q;
      objective += p.var(nvars[a]);
    }
  } else {
    name = variant == TelVariant::Generalized ? "tau_gen" : "tau_cl";
    nvars = declare_all(p, na, dv * db);
    const auto rho_n = p.declare_hermitian(db);
    for (int a = 0; a < na; ++a) {
      if (variant == TelVariant::Generalized)
        p.add_psd(sdp::partial_transpose(p.var(nvars[a]), vb, {0}));
      else
        constrain_in_relaxed_cone(p, p.var(nvars[a]), r);
      for (int x = 0; x < nx; ++x)
        noise_ax[a * nx + x] = sdp::contract_input(p.var(nvars[a]), asm_.ensemble()[x], db);
    }
    p.add_equality(sum_of(p, nvars) - sdp::embed_left_identity(dv, p.var(rho_n)));
    noise_marginal = p.var(rho_n);
    objective = sdp::trace(p.var(rho_n));
  }
  for (int a = 0; a < na; ++a)
    for (int x = 0; x < nx; ++x)
      p.add_equality(sdp::contract_input(p.var(k[a]), asm_.ensemble()[x], db) - noise_ax[a * nx + x] - asm_(a, x));
  p.add_equality(sum_of(p, k) - sdp::embed_left_identity(dv, noise_marginal + asm_.bob_marginal()));
  p.set_objective(objective, sdp::Sense::Minimize);

  const auto sol = run(p, opt, name);
  auto rep = make_report(name, sol, r, assemblage_direction(asm_), opt);
  add_assemblage_parameters(rep, asm_);
  if (!sol.primal.empty()) {
    Certificate c;
    c.channel_operators = values(sol, k);
    c.decomposition = values(sol, nvars);
    rep.certificate = std::move(c);
  }
  return rep;
}

QuantifierReport teleportation_weight(const TeleportationAssemblage& asm_, const SeparabilityRelaxation& r,
                                      const EstimatorOptions& opt) {
  if (!(r.cut == channel_cut(asm_))) throw DimensionError("teleportation_weight: relaxation cut does not match V x B");
  const int dv = asm_.d_v(), db = asm_.d_b(), na = asm_.n_outcomes(), nx = asm_.n_inputs();
  const SubsystemDims vb{dv, db};
  SdpProblem p;
  // Q_a = p M~_a, C_a = (1 - p) Mbar_a.
  const auto q = declare_all(p, na, dv * db);
  const auto c = declare_all(p, na, dv * db);
  for (int a = 0; a < na; ++a) {
    p.add_psd(sdp::partial_transpose(p.var(q[a]), vb, {0}));
    constrain_in_relaxed_cone(p, p.var(c[a]), r);
    for (int x = 0; x < nx; ++x)
      p.add_equality(sdp::contract_input(p.var(q[a]) + p.var(c[a]), asm_.ensemble()[x], db) - asm_(a, x));
  }
  // Channel-operator normalization of the nonclassical part; implies its x-independence.
  const auto rho_q = p.declare_hermitian(db);
  p.add_equality(sum_of(p, q) - sdp::embed_left_identity(dv, p.var(rho_q)));
  p.set_objective(sdp::trace(p.var(rho_q)), sdp::Sense::Minimize);

  const auto sol = run(p, opt, "teleportation_weight");
  auto rep = make_report("teleportation_weight", sol, r, assemblage_direction(asm_), opt);
  add_assemblage_parameters(rep, asm_);
  if (!sol.primal.empty()) {
    Certificate cert;
    cert.channel_operators = values(sol, c);
    cert.decomposition = values(sol, q);
    rep.certificate = std::move(cert);
  }
  return rep;
}

QuantifierReport best_separable_approx(const DensityMatrix& rho, const SeparabilityRelaxation& r,
                                       const EstimatorOptions& opt) {
  const Bipartition cut = state_cut(rho);
  if (!(r.cut == cut)) throw DimensionError("best_separable_approx: relaxation cut does not match the state");
  SdpProblem p;
  const auto ent = p.declare_hermitian(rho.dim());
  p.add_psd(p.var(ent));
  constrain_in_relaxed_cone(p, Expr::constant(rho.mat()) - p.var(ent), r);
  p.set_objective(sdp::trace(p.var(ent)), sdp::Sense::Minimize);
  const auto sol = run(p, opt, "best_separable_approx");
  auto rep = make_report("best_separable_approx", sol, r, BoundDirection::ExactAtRelaxation, opt);
  if (!sol.primal.empty()) {
    const CMatrix e = sol.value(ent);
    rep.certificate = Certificate{{}, {e, rho.mat() - e}, std::nullopt};
  }
  return rep;
}

}  // namespace telent
