#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "telent/sepcone.hpp"

using namespace telent;
using namespace telent::sdp;

namespace {

SolveStatus fixed_membership(const CMatrix& h, const SeparabilityRelaxation& r) {
  SdpProblem p;
  const auto v = p.declare_hermitian(static_cast<int>(h.rows()));
  p.add_equality(p.var(v), Expr::constant(h));
  constrain_in_relaxed_cone(p, p.var(v), r);
  return solve(p).status;
}

/// Least t with h + t I in the relaxed cone.
double shift_to_cone(const CMatrix& h, const SeparabilityRelaxation& r) {
  SdpProblem p;
  const int n = static_cast<int>(h.rows());
  const auto v = p.declare_hermitian(n);
  const auto t = p.declare_hermitian(1);
  p.add_equality(p.var(v), Expr::constant(h) + scalar_times_identity(p.var(t), n));
  constrain_in_relaxed_cone(p, p.var(v), r);
  p.set_objective(p.var(t), Sense::Minimize);
  const auto sol = solve(p);
  REQUIRE(sol.status == SolveStatus::Optimal);
  return sol.objective_value;
}

}  // namespace

TEST_CASE("relaxation names and defaults") {
  const Bipartition q{2, 2}, t{3, 3};
  CHECK(SeparabilityRelaxation::default_for(q).kind == SeparabilityRelaxation::Kind::Ppt);
  CHECK(SeparabilityRelaxation::default_for({2, 3}).kind == SeparabilityRelaxation::Kind::Ppt);
  const auto d3 = SeparabilityRelaxation::default_for(t);
  CHECK(d3.kind == SeparabilityRelaxation::Kind::SymmetricExtension);
  CHECK(d3.k == 2);
  CHECK(d3.with_ppt);
  CHECK(d3.name() == "sym2");
  CHECK(SeparabilityRelaxation::parse("ppt", q).name() == "ppt");
  const auto s3 = SeparabilityRelaxation::parse("sym3", q);
  CHECK(s3.k == 3);
  CHECK(s3.cut == q);
  CHECK_THROWS_AS(SeparabilityRelaxation::parse("sym1", q), std::invalid_argument);
  CHECK_THROWS_AS(SeparabilityRelaxation::parse("dps", q), std::invalid_argument);
  CHECK_THROWS_AS(SeparabilityRelaxation::symmetric_extension(q, 1), std::invalid_argument);
}

TEST_CASE("dimension must factor according to the cut") {
  SdpProblem p;
  const auto v = p.declare_hermitian(5);
  CHECK_THROWS_AS(constrain_in_relaxed_cone(p, p.var(v), SeparabilityRelaxation::ppt({2, 2})), DimensionError);
}

TEST_CASE("maximally entangled state is outside every relaxation") {
  const CMatrix phi = max_entangled(2).mat();
  CHECK(fixed_membership(phi, SeparabilityRelaxation::ppt({2, 2})) == SolveStatus::Infeasible);
  CHECK(fixed_membership(phi, SeparabilityRelaxation::symmetric_extension({2, 2}, 2, false)) ==
        SolveStatus::Infeasible);
}

TEST_CASE("product operators are inside every relaxation") {
  CounterRng rng(301);
  const CMatrix prod = kron(random_density_matrix({2}, rng).mat(), random_density_matrix({3}, rng).mat());
  const Bipartition cut{2, 3};
  CHECK(fixed_membership(prod, SeparabilityRelaxation::ppt(cut)) == SolveStatus::Optimal);
  CHECK(fixed_membership(prod, SeparabilityRelaxation::symmetric_extension(cut, 2)) == SolveStatus::Optimal);
  CHECK(fixed_membership(prod, SeparabilityRelaxation::symmetric_extension(cut, 2, false)) == SolveStatus::Optimal);
  const CMatrix sep = random_separable_state(2, 2, 3, rng).mat();
  CHECK(fixed_membership(sep, SeparabilityRelaxation::symmetric_extension({2, 2}, 3)) == SolveStatus::Optimal);
}

TEST_CASE("bound entangled Horodecki state") {
  const CMatrix h = horodecki_state(0.5).mat();
  CHECK(fixed_membership(h, SeparabilityRelaxation::ppt({3, 3})) == SolveStatus::Optimal);
  CHECK(fixed_membership(h, SeparabilityRelaxation::symmetric_extension({3, 3}, 2)) == SolveStatus::Infeasible);
}

TEST_CASE("relaxations are nested") {
  CounterRng rng(303);
  const Bipartition cut{2, 2};
  const auto ppt = SeparabilityRelaxation::ppt(cut);
  const auto s2 = SeparabilityRelaxation::symmetric_extension(cut, 2);
  const auto s3 = SeparabilityRelaxation::symmetric_extension(cut, 3);
  for (int trial = 0; trial < 4; ++trial) {
    const CMatrix h = testing::random_hermitian(4, rng);
    const double t_ppt = shift_to_cone(h, ppt), t2 = shift_to_cone(h, s2), t3 = shift_to_cone(h, s3);
    CHECK(t_ppt <= t2 + 1e-6);
    CHECK(t2 <= t3 + 1e-6);
    // two qubits: PPT is exact, so every level agrees
    CHECK(std::abs(t3 - t_ppt) <= 1e-5);
  }
}

TEST_CASE("symmetric extension without PPT is weaker on qutrits") {
  const CMatrix h = horodecki_state(0.5).mat();
  const Bipartition cut{3, 3};
  const double no_ppt = shift_to_cone(h, SeparabilityRelaxation::symmetric_extension(cut, 2, false));
  const double with_ppt = shift_to_cone(h, SeparabilityRelaxation::symmetric_extension(cut, 2, true));
  CHECK(no_ppt <= with_ppt + 1e-6);
  CHECK(with_ppt > 1e-6);
}
