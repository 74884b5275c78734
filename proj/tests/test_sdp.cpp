#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <sstream>
#include <string>

#include "support.hpp"
#include "telent/sdp/cone.hpp"
#include "telent/sdp/problem.hpp"
#include "telent/sdp/sdpa.hpp"
#include "telent/teleport.hpp"

using namespace telent;
using namespace telent::sdp;
using telent::testing::max_abs;

namespace {

CMatrix evaluate(const Expr& e, const std::vector<CMatrix>& values) {
  CMatrix out = e.constant_part();
  for (const auto& t : e.terms()) out += t.map.apply(values.at(t.var.index));
  return out;
}

double inner(const CMatrix& a, const CMatrix& b) { return (a.adjoint() * b).trace().real(); }

/// Primal feasibility of every constraint at 10x the reported tolerance.
void check_primal_feasible(const SdpProblem& p, const SdpSolution& sol) {
  const double slack = 10 * sol.solver_tolerance;
  for (const auto& c : p.constraints()) {
    const CMatrix v = evaluate(c.expr, sol.primal);
    if (c.kind == ConstraintKind::Equality)
      CHECK(max_abs(v) <= slack);
    else
      CHECK(min_eigenvalue(hermitian_part(v)) >= -slack);
  }
}

/// min tr N s.t. P - N = rho, P^{T_A} >= 0, N^{T_A} >= 0
double negativity_sdp(const DensityMatrix& rho, SolveStatus* status = nullptr) {
  SdpProblem p;
  const int d = rho.dim();
  const auto pv = p.declare_hermitian(d), nv = p.declare_hermitian(d);
  const std::vector<int> sys{0};
  p.add_equality(p.var(pv) - p.var(nv), Expr::constant(rho.mat()));
  p.add_psd(partial_transpose(p.var(pv), rho.dims(), sys));
  p.add_psd(partial_transpose(p.var(nv), rho.dims(), sys));
  p.set_objective(trace(p.var(nv)), Sense::Minimize);
  const auto sol = solve(p);
  if (status) *status = sol.status;
  check_primal_feasible(p, sol);
  return sol.objective_value;
}

struct SdpaFile {
  int m = 0;
  std::vector<int> block_sizes;
  std::vector<double> c;
  // (matrix, block) -> dense block
  std::map<std::pair<int, int>, RMatrix> f;
};

SdpaFile read_sdpa(std::istream& in) {
  SdpaFile s;
  std::string line;
  auto next = [&] {
    while (std::getline(in, line))
      if (!line.empty() && line[0] != '*' && line[0] != '"') return true;
    return false;
  };
  next();
  s.m = std::stoi(line);
  next();
  const int nb = std::stoi(line);
  next();
  std::istringstream bs(line);
  for (int k = 0; k < nb; ++k) {
    int v;
    bs >> v;
    s.block_sizes.push_back(v);
  }
  next();
  std::istringstream cs(line);
  s.c.resize(s.m);
  for (auto& v : s.c) cs >> v;
  while (next()) {
    std::istringstream es(line);
    int mat, blk, i, j;
    double v;
    es >> mat >> blk >> i >> j >> v;
    auto& f = s.f[{mat, blk}];
    const int n = std::abs(s.block_sizes.at(blk - 1));
    if (f.size() == 0) f = RMatrix::Zero(n, n);
    f(i - 1, j - 1) = v;
    f(j - 1, i - 1) = v;
  }
  return s;
}

}  // namespace

TEST_CASE("unconstrained variables and ids") {
  SdpProblem p;
  const auto a = p.declare_hermitian(2), b = p.declare_hermitian(3);
  CHECK(a.index != b.index);
  CHECK(p.var_dim(b) == 3);
  const auto sol = solve(p);
  CHECK(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective_value == doctest::Approx(0.0));
}

TEST_CASE("realified block sizes double the declared dimension") {
  SdpProblem p;
  const auto x = p.declare_hermitian(3);
  p.add_psd(p.var(x));
  p.add_equality(trace(p.var(x)), Expr::constant(CMatrix::Identity(1, 1)));
  const RealifiedProblem rp = realify(p);
  REQUIRE(rp.cone.blocks.size() == 1);
  CHECK(rp.cone.blocks[0].size == 6);
  CHECK(rp.cone.n == hermitian_params(3));
}

TEST_CASE("unit-trace PSD matrix of least trace") {
  SdpProblem p;
  const auto x = p.declare_hermitian(2);
  p.add_psd(p.var(x));
  p.add_equality(trace(p.var(x)), Expr::constant(CMatrix::Identity(1, 1)));
  p.set_objective(trace(p.var(x)), Sense::Minimize);
  const auto sol = solve(p);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective_value == doctest::Approx(1.0).epsilon(1e-7));
  check_primal_feasible(p, sol);
}

TEST_CASE("largest eigenvalue of a complex Hermitian matrix") {
  CounterRng rng(201);
  for (int d : {2, 3, 5}) {
    const CMatrix c = testing::random_hermitian(d, rng);
    SdpProblem p;
    const auto x = p.declare_hermitian(d);
    p.add_psd(p.var(x));
    p.add_equality(trace(p.var(x)), Expr::constant(CMatrix::Identity(1, 1)));
    p.set_objective(trace_with(c, p.var(x)), Sense::Maximize);
    const auto sol = solve(p);
    REQUIRE(sol.status == SolveStatus::Optimal);
    const double lmax = hermitian_eigenvalues(c)(d - 1);
    CHECK(std::abs(sol.objective_value - lmax) <= 1e-6);
    CHECK(sol.dual_objective >= sol.objective_value - 10 * sol.solver_tolerance);
    check_primal_feasible(p, sol);
  }
}

TEST_CASE("weak duality and repeatability") {
  CounterRng rng(203);
  const CMatrix c = testing::random_hermitian(4, rng);
  const CMatrix b = testing::random_hermitian(4, rng);
  SdpProblem p;
  const auto x = p.declare_hermitian(4);
  p.add_psd(p.var(x));
  p.add_psd(Expr::constant(identity(4)) - p.var(x));
  p.add_equality(trace_with(b, p.var(x)), Expr::constant(CMatrix::Constant(1, 1, 0.1)));
  p.set_objective(trace_with(c, p.var(x)), Sense::Minimize);
  const auto s1 = solve(p);
  const auto s2 = solve(p);
  REQUIRE(s1.status == SolveStatus::Optimal);
  CHECK(s1.dual_objective <= s1.objective_value + 10 * s1.solver_tolerance);
  CHECK(std::abs(s1.objective_value - s2.objective_value) <= 10 * s1.solver_tolerance);
  check_primal_feasible(p, s1);

  // stationarity of the Lagrangian along every coordinate direction
  const auto& dl = s1.duals;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j)
      for (int part = 0; part < (i == j ? 1 : 2); ++part) {
        CMatrix dir = CMatrix::Zero(4, 4);
        dir(i, j) = part == 0 ? Complex(1, 0) : Complex(0, 1);
        dir(j, i) = std::conj(dir(i, j));
        const double grad = inner(c, dir) - inner(dl[0], dir) + inner(dl[1], dir) + dl[2](0, 0).real() * inner(b, dir);
        CHECK(std::abs(grad) < 1e-5);
      }
}

TEST_CASE("negativity program") {
  CHECK(negativity_sdp(max_entangled(2)) == doctest::Approx(0.5).epsilon(1e-6));
  CounterRng rng(205);
  for (int i = 0; i < 3; ++i) {
    SolveStatus st;
    CHECK(std::abs(negativity_sdp(random_separable_state(2, 2, 4, rng), &st)) <= 1e-6);
    CHECK(st == SolveStatus::Optimal);
  }
  const DensityMatrix rho = random_density_matrix({2, 3}, rng);
  CHECK(std::abs(negativity_sdp(rho) - negative_part_trace(partial_transpose(rho.mat(), rho.dims(), 0))) <= 1e-6);
}

TEST_CASE("infeasibility certificate") {
  SdpProblem p;
  const auto x = p.declare_hermitian(2);
  p.add_psd(p.var(x));
  p.add_equality(trace(p.var(x)), Expr::constant(-CMatrix::Identity(1, 1)));
  const std::vector<ConstraintId> ids{ConstraintId{0}, ConstraintId{1}};
  const auto sol = solve(p);
  REQUIRE(sol.status == SolveStatus::Infeasible);
  const auto y = dual_witness(sol, ids);
  CHECK(min_eigenvalue(y[0]) >= -1e-8);
  CounterRng rng(207);
  for (int t = 0; t < 5; ++t) {
    const std::vector<CMatrix> pt{testing::random_hermitian(2, rng)};
    const double lhs = inner(y[1], evaluate(p.constraints()[1].expr, pt)) - inner(y[0], evaluate(p.constraints()[0].expr, pt));
    CHECK(lhs == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("NPT operator cannot be constrained PPT") {
  SdpProblem p;
  const auto x = p.declare_hermitian(4);
  const std::vector<int> sys{0};
  p.add_equality(p.var(x), Expr::constant(max_entangled(2).mat()));
  p.add_psd(partial_transpose(p.var(x), {2, 2}, sys));
  const auto sol = solve(p);
  REQUIRE(sol.status == SolveStatus::Infeasible);
  CounterRng rng(209);
  const std::vector<CMatrix> pt{testing::random_hermitian(4, rng)};
  const double lhs = inner(sol.duals[0], evaluate(p.constraints()[0].expr, pt)) -
                     inner(sol.duals[1], evaluate(p.constraints()[1].expr, pt));
  CHECK(lhs == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("unbounded program") {
  SdpProblem p;
  const auto x = p.declare_hermitian(2);
  p.add_psd(p.var(x));
  p.set_objective(trace(p.var(x)), Sense::Maximize);
  CHECK(solve(p).status == SolveStatus::Unbounded);
}

TEST_CASE("missing duals") {
  SdpSolution empty;
  const std::vector<ConstraintId> ids{ConstraintId{0}};
  CHECK_THROWS_AS(dual_witness(empty, ids), MissingDualsError);
}

TEST_CASE("invalid problems") {
  SdpProblem p;
  const auto x = p.declare_hermitian(2);
  CHECK_THROWS(p.set_objective(p.var(x), Sense::Minimize));
  SdpProblem other;
  CHECK_THROWS(other.add_psd(p.var(x)));
}

TEST_CASE("linear maps") {
  CounterRng rng(211);
  const auto f = [](const CMatrix& m) { return partial_transpose(m, {2, 3}, 1); };
  const LinearMap lm = LinearMap::from_function(6, 6, f);
  const CMatrix m = testing::random_complex(6, 6, rng);
  CHECK(max_abs(lm.apply(m) - f(m)) < 1e-14);
  const LinearMap twice = lm.then(lm);
  CHECK(max_abs(twice.apply(m) - m) < 1e-14);
  CHECK(max_abs(lm.scaled(Complex(0, 2)).apply(m) - Complex(0, 2) * f(m)) < 1e-14);
  const CMatrix w = random_density_matrix({2}, rng).mat();
  const Expr e = contract_input(Expr::constant(m), w, 3);
  CHECK(max_abs(e.constant_part() - telent::contract_input(m, w, 3)) < 1e-14);
}

TEST_CASE("SDPA export matches the solved program") {
  CounterRng rng(213);
  const CMatrix c = testing::random_hermitian(2, rng);
  SdpProblem p;
  const auto x = p.declare_hermitian(2);
  const auto s = p.declare_hermitian(1);
  p.add_psd(p.var(x));
  p.add_psd(p.var(s));
  p.add_equality(trace(p.var(x)) + p.var(s), Expr::constant(CMatrix::Identity(1, 1)));
  p.set_objective(trace_with(c, p.var(x)), Sense::Minimize);
  std::stringstream ss;
  write_sdpa(p, ss);
  const SdpaFile f = read_sdpa(ss);
  CHECK(f.m == 5);
  REQUIRE(f.block_sizes.size() == 2);
  CHECK(f.block_sizes[0] == -3);
  CHECK(f.block_sizes[1] == 4);

  const auto sol = solve(p);
  REQUIRE(sol.status == SolveStatus::Optimal);
  // parameter vector in the documented layout: diagonal, then Re/Im of the upper triangle
  const CMatrix& xv = sol.value(x);
  const std::vector<double> params{xv(0, 0).real(), xv(1, 1).real(), xv(0, 1).real(), xv(0, 1).imag(),
                                   sol.value(s)(0, 0).real()};
  double obj = 0.0;
  for (int i = 0; i < f.m; ++i) obj += f.c[i] * params[i];
  CHECK(obj == doctest::Approx(sol.objective_value).epsilon(1e-6));
  for (int blk = 1; blk <= 2; ++blk) {
    const int n = std::abs(f.block_sizes[blk - 1]);
    RMatrix slack = RMatrix::Zero(n, n);
    if (f.f.count({0, blk})) slack -= f.f.at({0, blk});
    for (int i = 0; i < f.m; ++i)
      if (f.f.count({i + 1, blk})) slack += params[i] * f.f.at({i + 1, blk});
    Eigen::SelfAdjointEigenSolver<RMatrix> es(slack);
    CHECK(es.eigenvalues()(0) >= -1e-6);
  }
}

TEST_CASE("cone solver on a small LP") {
  // min -x0 - x1 s.t. x0 + 2 x1 = 2, x >= 0
  ConeProblem lp;
  lp.n = 2;
  lp.c = RVector::Constant(2, -1.0);
  lp.a.resize(1, 2);
  lp.a.insert(0, 0) = 1;
  lp.a.insert(0, 1) = 2;
  lp.b = RVector::Constant(1, 2.0);
  lp.g_lp.resize(2, 2);
  lp.g_lp.insert(0, 0) = -1;
  lp.g_lp.insert(1, 1) = -1;
  lp.h_lp = RVector::Zero(2);
  const auto sol = solve_cone(lp);
  REQUIRE(sol.status == ConeStatus::Optimal);
  CHECK(sol.primal_objective == doctest::Approx(-2.0).epsilon(1e-7));
  CHECK(sol.x(0) == doctest::Approx(2.0).epsilon(1e-6));
  const RVector stat = lp.c + lp.a.transpose() * sol.y + lp.g_lp.transpose() * sol.z_lp;
  CHECK(stat.cwiseAbs().maxCoeff() < 1e-7);

  lp.b(0) = -1.0;
  const auto inf = solve_cone(lp);
  REQUIRE(inf.status == ConeStatus::PrimalInfeasible);
  const RVector farkas = lp.a.transpose() * inf.y + lp.g_lp.transpose() * inf.z_lp;
  CHECK(farkas.cwiseAbs().maxCoeff() < 1e-7);
  CHECK(lp.b.dot(inf.y) + lp.h_lp.dot(inf.z_lp) == doctest::Approx(-1.0).epsilon(1e-7));
  CHECK(inf.z_lp.minCoeff() >= -1e-9);
}

TEST_CASE("presolve handles redundant equalities") {
  SdpProblem p;
  const auto x = p.declare_hermitian(2);
  p.add_psd(p.var(x));
  p.add_equality(trace(p.var(x)), Expr::constant(CMatrix::Identity(1, 1)));
  p.add_equality(2.0 * trace(p.var(x)), Expr::constant(2.0 * CMatrix::Identity(1, 1)));
  CMatrix z = CMatrix::Zero(2, 2);
  z(0, 0) = 1;
  z(1, 1) = -1;
  p.set_objective(trace_with(z, p.var(x)), Sense::Minimize);
  const auto sol = solve(p);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective_value == doctest::Approx(-1.0).epsilon(1e-7));
  check_primal_feasible(p, sol);
}
