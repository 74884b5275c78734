#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "telent/assemblage_io.hpp"
#include "telent/teleport.hpp"

using namespace telent;
using telent::testing::max_abs;

namespace {

double max_assemblage_diff(const TeleportationAssemblage& a, const std::vector<std::vector<CMatrix>>& b) {
  double err = 0.0;
  for (int o = 0; o < a.n_outcomes(); ++o)
    for (int x = 0; x < a.n_inputs(); ++x) err = std::max(err, max_abs(a(o, x) - b[o][x]));
  return err;
}

}  // namespace

TEST_CASE("maximally entangled contraction identity") {
  CounterRng rng(101);
  for (int d : {2, 3}) {
    for (int dc : {1, 2, 3}) {
      const CMatrix m = testing::random_complex(d * dc, d * dc, rng);
      const CMatrix lhs = partial_trace(kron(identity(d), m) * kron(max_entangled(d).mat(), identity(dc)),
                                        {d, d, dc}, {0, 2});
      const CMatrix rhs = partial_transpose(m, {d, dc}, 0) / static_cast<double>(d);
      CHECK(max_abs(lhs - rhs) <= 1e-10);
    }
  }
}

TEST_CASE("channel operators reproduce the assemblage") {
  CounterRng rng(103);
  for (int trial = 0; trial < 10; ++trial) {
    const DensityMatrix rho = random_density_matrix({2, 2}, rng);
    const Povm m = random_povm({2, 2}, 2 + trial % 4, rng);
    const InputEnsemble e = random_tomo_complete_ensemble(2, trial);
    const TeleportationAssemblage asm_ = generate_assemblage(rho, m, e);
    const ChannelOperators ops = channel_operators(rho, m);
    double err = 0.0;
    for (int a = 0; a < asm_.n_outcomes(); ++a)
      for (int x = 0; x < asm_.n_inputs(); ++x)
        err = std::max(err, max_abs(contract_input(ops.ops()[a], e[x], 2) - asm_(a, x)));
    CHECK(err <= 1e-10);
    const auto again = assemblage_from_channel_operators(ops.ops(), e, 2);
    CHECK(max_assemblage_diff(asm_, again.sigma()) <= 1e-10);
  }
}

TEST_CASE("product shared state gives proportional conditional states") {
  CounterRng rng(107);
  const CMatrix ra = random_density_matrix({2}, rng).mat();
  const CMatrix rb = random_density_matrix({3}, rng).mat();
  const DensityMatrix rho(kron(ra, rb), {2, 3});
  const TeleportationAssemblage asm_ = generate_assemblage(rho, random_povm({2, 2}, 3, rng), testing::pauli6());
  double total = 0.0;
  for (int a = 0; a < asm_.n_outcomes(); ++a)
    for (int x = 0; x < asm_.n_inputs(); ++x) {
      const double p = asm_(a, x).trace().real();
      CHECK(max_abs(asm_(a, x) - p * rb) < 1e-12);
      total += p;
    }
  CHECK(total == doctest::Approx(asm_.n_inputs()));
}

TEST_CASE("perfect teleportation through a Bell measurement") {
  const Povm bsm = bell_measurement(2);
  const InputEnsemble e = testing::pauli6();
  const TeleportationAssemblage asm_ = generate_assemblage(max_entangled(2), bsm, e);
  for (int a = 0; a < 4; ++a) {
    const CMatrix& u = (*bsm.corrections())[a];
    for (int x = 0; x < e.size(); ++x) {
      CHECK(std::abs(asm_(a, x).trace() - 0.25) < 1e-12);
      CHECK(max_abs(u * asm_(a, x) * u.adjoint() - e[x] / 4.0) < 1e-12);
    }
  }
  CHECK(max_abs(asm_(0, 2) - e[2] / 4.0) < 1e-12);
  CHECK(average_fidelity(asm_, bsm.corrections()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(average_fidelity(asm_, std::vector<CMatrix>{identity(2)}), DimensionError);
}

TEST_CASE("channel operators of the maximally entangled state") {
  for (int d : {2, 3}) {
    const DensityMatrix phi = max_entangled(d);
    const ChannelOperators ops = channel_operators(phi, bell_measurement(d));
    CHECK(max_abs(ops.ops()[0] - partial_transpose(phi.mat(), {d, d}, 0) / static_cast<double>(d)) < 1e-12);
    CMatrix sum = CMatrix::Zero(d * d, d * d);
    for (const auto& m : ops.ops()) sum += m;
    CHECK(max_abs(sum - identity(d * d) / static_cast<double>(d)) < 1e-12);
  }
}

TEST_CASE("separable measurement gives PPT channel operators") {
  CounterRng rng(109);
  std::vector<CMatrix> elements;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CMatrix p = CMatrix::Zero(4, 4);
      p(2 * i + j, 2 * i + j) = 1;
      elements.push_back(p);
    }
  const Povm product_basis(elements, {2, 2});
  const ChannelOperators ops = channel_operators(random_density_matrix({2, 2}, rng), product_basis);
  for (const auto& m : ops.ops()) {
    CHECK(min_eigenvalue(m) > -1e-12);
    CHECK(min_eigenvalue(partial_transpose(m, {2, 2}, 0)) > -1e-12);
  }
}

TEST_CASE("average fidelity") {
  const Povm bsm = bell_measurement(2);
  const auto mixed = generate_assemblage(isotropic_state(0), bsm, testing::pauli6());
  CHECK(average_fidelity(mixed, bsm.corrections()) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(average_fidelity(mixed) == doctest::Approx(0.5).epsilon(1e-12));

  double prev = -1.0;
  bool below = false, above = false;
  for (int i = 0; i <= 20; ++i) {
    const double f = average_fidelity(generate_assemblage(flag_state(0.05 * i), bsm, testing::pauli6()),
                                      bsm.corrections());
    CHECK(f >= prev - 1e-12);
    prev = f;
    below |= f < 2.0 / 3.0;
    above |= f > 2.0 / 3.0;
  }
  CHECK(below);
  CHECK(above);
}

TEST_CASE("post-selected normal form reconstructs random assemblages") {
  CounterRng rng(113);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int dv = 2, db = 2 + trial % 2;
    const DensityMatrix rho = random_density_matrix({dv, db}, rng, 1 + trial % 4);
    const Povm m = random_povm({dv, dv}, 2 + trial % 4, rng);
    const InputEnsemble e = random_tomo_complete_ensemble(dv, 1000 + trial);
    const auto nf = bsm_normal_form(rho, m);
    REQUIRE(static_cast<int>(nf.size()) == m.size());
    double psum = 0.0;
    CMatrix avg = CMatrix::Zero(dv * db, dv * db);
    for (const auto& entry : nf) {
      psum += entry.probability;
      if (entry.state) avg += entry.probability * entry.state->mat();
    }
    CHECK(psum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(max_abs(partial_trace(avg, {dv, db}, {0}) - identity(dv) / static_cast<double>(dv)) < 1e-10);
    const auto rebuilt = reconstruct_from_normal_form(nf, e, db);
    worst = std::max(worst, max_assemblage_diff(generate_assemblage(rho, m, e), rebuilt));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("normal form of a Bell measurement on a maximally entangled state") {
  const auto nf = bsm_normal_form(max_entangled(2), bell_measurement(2));
  REQUIRE(nf.size() == 4);
  for (const auto& entry : nf) {
    CHECK(entry.probability == doctest::Approx(0.25).epsilon(1e-12));
    REQUIRE(entry.state.has_value());
    const CMatrix& s = entry.state->mat();
    CHECK(std::abs((s * s).trace() - 1.0) < 1e-10);
    CHECK(max_abs(partial_trace(s, {2, 2}, {0}) - identity(2) / 2.0) < 1e-10);
  }
}

TEST_CASE("assemblage invariants") {
  CounterRng rng(127);
  for (int trial = 0; trial < 20; ++trial) {
    const auto asm_ = generate_assemblage(random_density_matrix({2, 2}, rng), random_povm({2, 2}, 4, rng),
                                          testing::pauli6());
    const CMatrix marginal = asm_.bob_marginal();
    for (int x = 0; x < asm_.n_inputs(); ++x) {
      CMatrix sum = CMatrix::Zero(2, 2);
      for (int a = 0; a < asm_.n_outcomes(); ++a) {
        CHECK(min_eigenvalue(asm_(a, x)) >= -1e-12);
        sum += asm_(a, x);
      }
      CHECK(max_abs(sum - marginal) <= 1e-12);
    }
  }

  const auto good = generate_assemblage(isotropic_state(0.5), bell_measurement(2), testing::pauli6());
  auto signalling = good.sigma();
  signalling[0][1] += 1e-3 * testing::pauli_z();
  CHECK_THROWS_WITH_AS(TeleportationAssemblage(signalling, good.ensemble()), doctest::Contains("no-signalling"),
                       InvariantError);
  auto negative = good.sigma();
  for (int x = 0; x < good.n_inputs(); ++x) {
    negative[0][x] += 0.3 * testing::pauli_z();
    negative[1][x] -= 0.3 * testing::pauli_z();
  }
  CHECK_THROWS_WITH_AS(TeleportationAssemblage(negative, good.ensemble()), doctest::Contains("psd"), InvariantError);
  auto unnormalized = good.sigma();
  for (int x = 0; x < good.n_inputs(); ++x) unnormalized[0][x] *= 1.5;
  CHECK_THROWS_AS(TeleportationAssemblage(unnormalized, good.ensemble()), InvariantError);
  CHECK_THROWS_AS(generate_assemblage(flag_state(0.5), bell_measurement(3), testing::pauli6()), DimensionError);
}

TEST_CASE("channel operator validation") {
  CHECK_NOTHROW(ChannelOperators({identity(4) / 4.0, identity(4) / 4.0}, 2, 2));
  CHECK_THROWS_AS(ChannelOperators({identity(4) / 4.0}, 2, 2), InvariantError);
  CMatrix not_product = identity(4) / 2.0;
  not_product(0, 3) = not_product(3, 0) = 0.2;
  CHECK_THROWS_AS(ChannelOperators({not_product}, 2, 2), InvariantError);
}

TEST_CASE("assemblage JSON round trip") {
  const auto asm_ = generate_assemblage(horodecki_state(0.4), partial_bell_measurement(3),
                                        random_tomo_complete_ensemble(3, 5));
  const nlohmann::json j = assemblage_to_json(asm_);
  CHECK(j.at("d_B") == 3);
  CHECK(j.at("n_outcomes") == 2);
  const auto back = assemblage_from_json(nlohmann::json::parse(j.dump()));
  CHECK(max_assemblage_diff(asm_, back.sigma()) == 0.0);
  for (int x = 0; x < asm_.n_inputs(); ++x) CHECK(max_abs(asm_.ensemble()[x] - back.ensemble()[x]) == 0.0);
}

TEST_CASE("assemblage JSON schema errors") {
  const auto asm_ = generate_assemblage(isotropic_state(0.5), bell_measurement(2), testing::pauli6());
  const nlohmann::json good = assemblage_to_json(asm_);

  auto missing = good;
  missing.erase("sigma");
  CHECK_THROWS_AS(assemblage_from_json(missing), ParseError);
  auto wrong_count = good;
  wrong_count["n_outcomes"] = 3;
  CHECK_THROWS_AS(assemblage_from_json(wrong_count), ParseError);
  auto bad_entry = good;
  bad_entry["sigma"][0][0][0][0] = "x";
  CHECK_THROWS_AS(assemblage_from_json(bad_entry), ParseError);
  CHECK_THROWS_AS(assemblage_from_json(nlohmann::json::array()), ParseError);

  auto signalling = good;
  signalling["sigma"][0][1][0][0][0] = signalling["sigma"][0][1][0][0][0].get<double>() + 1e-3;
  signalling["sigma"][0][1][1][1][0] = signalling["sigma"][0][1][1][1][0].get<double>() - 1e-3;
  CHECK_THROWS_AS(assemblage_from_json(signalling), InvariantError);
}
