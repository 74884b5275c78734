// Acceptance criteria 1-9. Prints one PASS/FAIL line per criterion; with a
// criterion number as argument only that one runs.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "support.hpp"
#include "telent/estimators.hpp"

using namespace telent;
using telent::testing::max_abs;

namespace {

constexpr double kNegTightTol = 1e-4;
constexpr double kRobustnessTol = 1e-4;
constexpr double kTwZeroTol = 1e-5;
constexpr double kTwPositiveTol = 1e-3;
constexpr double kTwMatchTol = 1e-4;
constexpr double kTwPhiTol = 1e-4;
constexpr double kUpbTarget = 0.2350;
constexpr double kUpbTol = 5e-3;
constexpr double kBoundEntTwTol = 1e-4;
constexpr double kPptNegTol = 1e-6;
constexpr double kFidelityMargin = 1e-3;
constexpr double kTauPositiveTol = 1e-4;
constexpr double kTauMatchTol = 1e-4;
constexpr double kSoundnessSlack = 1e-5;
constexpr double kContractionTol = 1e-10;
constexpr double kReconstructionTol = 1e-9;
constexpr double kInvariantTol = 1e-8;
constexpr double kDoublingTol = 1e-10;
constexpr std::uint64_t kQutritSeed = 7;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::string violations;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      violations += " [violated: " + what + "]";
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

InputEnsemble pauli6() { return testing::pauli6(); }

Outcome criterion1() {
  Outcome o;
  const auto bsm = bell_measurement(2);
  double worst = 0.0;
  for (int i = 0; i <= 10; ++i) {
    const double p = 0.1 * i;
    const auto r = negativity_from_teleportation(generate_assemblage(flag_state(p), bsm, pauli6()));
    const double err = std::abs(r.value - testing::flag_negativity_closed_form(p));
    worst = std::max(worst, std::isnan(err) ? INFINITY : err);
  }
  o.require(worst <= kNegTightTol, "max |neg_bound - neg_exact| <= 1e-4");
  o.detail << "max |neg_bound - neg_exact| = " << fmt(worst) << " over p = 0:0.1:1";
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto bsm = bell_measurement(2);
  const auto cut = SeparabilityRelaxation::ppt({2, 2});
  const std::pair<TelVariant, EntVariant> pairs[] = {{TelVariant::Generalized, EntVariant::Generalized},
                                                     {TelVariant::Classical, EntVariant::Separable},
                                                     {TelVariant::Random, EntVariant::Random}};
  double worst = 0.0;
  for (double p : {0.25, 0.5, 0.75}) {
    const auto rho = flag_state(p);
    const auto asm_ = generate_assemblage(rho, bsm, pauli6());
    for (const auto& [tv, ev] : pairs) {
      const double err = std::abs(tel_robustness(asm_, tv, cut).value - ent_robustness(rho, ev, cut).value);
      worst = std::max(worst, std::isnan(err) ? INFINITY : err);
    }
  }
  o.require(worst <= kRobustnessTol, "max |tau - eps| <= 1e-4");
  o.detail << "max |tau_v - eps_v| = " << fmt(worst) << " over p in {0.25,0.5,0.75}, 3 variants";
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto cut = SeparabilityRelaxation::ppt({2, 2});
  const auto rho = flag_state(0.75);
  const double tau = tel_robustness(generate_assemblage(rho, partial_bell_measurement(2), pauli6()),
                                    TelVariant::Random, cut).value;
  const double eps = ent_robustness(rho, EntVariant::Random, cut).value;
  const double eps_phi = ent_robustness(max_entangled(2), EntVariant::Random, cut).value;
  o.require(std::abs(tau - eps / 4) <= kRobustnessTol, "|tau'_r - eps_r/4| <= 1e-4");
  o.require(std::abs(eps_phi - 2.0) <= kRobustnessTol, "|eps_r(phi+) - 2| <= 1e-4");
  o.detail << "tau'_r = " << fmt(tau) << ", eps_r/4 = " << fmt(eps / 4) << ", eps_r(phi+) = " << fmt(eps_phi);
  return o;
}

Outcome criterion4() {
  Outcome o;
  const auto cut = SeparabilityRelaxation::ppt({2, 2});
  const auto bsm = bell_measurement(2), pbsm = partial_bell_measurement(2);
  const auto xz = testing::pauli_xz();
  auto tw = [&](double p, const Povm& m, const InputEnsemble& e) {
    return teleportation_weight(generate_assemblage(isotropic_state(p), m, e), cut).value;
  };
  double worst_match = 0.0;
  auto pair = [&](double p, const InputEnsemble& e) {
    const double full = tw(p, bsm, e), partial = tw(p, pbsm, e);
    const double diff = std::abs(full - partial);
    worst_match = std::max(worst_match, std::isnan(diff) ? INFINITY : diff);
    return full;
  };
  const double a = pair(0.32, pauli6()), b = pair(0.40, pauli6()), c = pair(0.48, xz), d = pair(0.55, xz);
  o.require(a <= kTwZeroTol, "TW(0.32, pauli6) <= 1e-5");
  o.require(b >= kTwPositiveTol, "TW(0.40, pauli6) >= 1e-3");
  o.require(c <= kTwZeroTol, "TW(0.48, xz) <= 1e-5");
  o.require(d >= kTwPositiveTol, "TW(0.55, xz) >= 1e-3");
  o.require(worst_match <= kTwMatchTol, "full vs partial BSM within 1e-4");
  o.detail << "pauli6: TW(0.32) = " << fmt(a) << ", TW(0.40) = " << fmt(b) << "; xz: TW(0.48) = " << fmt(c)
           << ", TW(0.55) = " << fmt(d) << "; max |full - partial| = " << fmt(worst_match);
  return o;
}

Outcome criterion5() {
  Outcome o;
  const double phi = teleportation_weight(generate_assemblage(max_entangled(2), bell_measurement(2), pauli6()),
                                          SeparabilityRelaxation::ppt({2, 2}))
                         .value;
  const auto upb_asm = generate_assemblage(upb_pyramid_state(), partial_bell_measurement(3),
                                           random_tomo_complete_ensemble(3, kQutritSeed));
  const double upb = teleportation_weight(upb_asm, SeparabilityRelaxation::symmetric_extension({3, 3}, 2)).value;
  o.require(std::abs(phi - 1.0) <= kTwPhiTol, "|TW(phi+) - 1| <= 1e-4");
  o.require(std::abs(upb - kUpbTarget) <= kUpbTol, "|TW(UPB) - 0.2350| <= 5e-3");
  o.detail << "TW(phi+) = " << fmt(phi) << ", TW(UPB pyramid, sym2) = " << fmt(upb) << " (target 0.2350)";
  return o;
}

Outcome criterion6() {
  Outcome o;
  const auto sym2 = SeparabilityRelaxation::symmetric_extension({3, 3}, 2);
  const auto inputs = random_tomo_complete_ensemble(3, kQutritSeed);
  for (double a : {0.2, 0.5, 0.8}) {
    const auto rho = horodecki_state(a);
    const auto asm_ = generate_assemblage(rho, partial_bell_measurement(3), inputs);
    const bool nonclassical = is_nonclassical(classicality(asm_, sym2));
    const double tw = teleportation_weight(asm_, sym2).value;
    const double nb = negativity_from_teleportation(asm_).value;
    const double neg = negativity(rho).value;
    o.require(nonclassical, "nonclassical at a=" + fmt(a));
    o.require(tw > kBoundEntTwTol, "TW > 1e-4 at a=" + fmt(a));
    o.require(std::abs(nb) <= kPptNegTol && std::abs(neg) <= kPptNegTol, "negativity 0 at a=" + fmt(a));
    o.detail << "a=" << fmt(a) << ": " << (nonclassical ? "Nonclassical" : "Classical") << ", TW = " << fmt(tw)
             << ", neg bound = " << fmt(nb) << ", neg = " << fmt(neg) << "; ";
  }
  return o;
}

Outcome criterion7() {
  Outcome o;
  const auto bsm = bell_measurement(2);
  const auto cut = SeparabilityRelaxation::ppt({2, 2});
  double witness_p = NAN, witness_f = NAN, witness_tau = NAN, worst_match = 0.0;
  for (int i = 0; i <= 20; ++i) {
    const double p = 0.05 * i;
    const auto asm_ = generate_assemblage(flag_state(p), bsm, pauli6());
    const double f = average_fidelity(asm_, bsm.corrections());
    const double tg = tel_robustness(asm_, TelVariant::Generalized, cut).value;
    const double tc = tel_robustness(asm_, TelVariant::Classical, cut).value;
    const double diff = std::abs(tg - tc);
    worst_match = std::max(worst_match, std::isnan(diff) ? INFINITY : diff);
    if (std::isnan(witness_p) && f < 2.0 / 3.0 - kFidelityMargin && tg > kTauPositiveTol) {
      witness_p = p;
      witness_f = f;
      witness_tau = tg;
    }
  }
  o.require(!std::isnan(witness_p), "a point with F < 2/3 - 1e-3 and tau_gen > 1e-4");
  o.require(worst_match <= kTauMatchTol, "tau_gen = tau_cl within 1e-4");
  o.detail << "first point p = " << fmt(witness_p) << " with F = " << fmt(witness_f) << ", tau_gen = " << fmt(witness_tau)
           << "; max |tau_gen - tau_cl| = " << fmt(worst_match);
  return o;
}

Outcome criterion8() {
  Outcome o;
  const auto cut = SeparabilityRelaxation::ppt({2, 2});
  const auto e = pauli6();
  CounterRng rng(2024);
  double worst = -INFINITY;
  int witnesses = 0;
  auto excess = [&](double lhs, double rhs) {
    const double v = lhs - rhs;
    worst = std::max(worst, std::isnan(v) ? INFINITY : v);
  };
  for (int trial = 0; trial < 20; ++trial) {
    CounterRng sub = rng.split(static_cast<std::uint64_t>(trial));
    const auto rho = random_density_matrix({2, 2}, sub, 1 + trial % 4);
    const auto m = random_povm({2, 2}, 4, sub);
    const auto asm_ = generate_assemblage(rho, m, e);
    const double neg = negativity(rho).value;
    const double nb = negativity_from_teleportation(asm_).value;
    excess(nb, neg);
    const auto cls = classicality(asm_, cut);
    if (const auto* w = std::get_if<Witness>(&cls)) {
      ++witnesses;
      excess(negativity_from_witness(*w, w->value(asm_), e, 4).value, nb);
    }
    excess(teleportation_weight(asm_, cut).value, best_separable_approx(rho, cut).value);
    excess(tel_robustness(asm_, TelVariant::Generalized, cut).value,
           ent_robustness(rho, EntVariant::Generalized, cut).value);
    excess(tel_robustness(asm_, TelVariant::Classical, cut).value,
           ent_robustness(rho, EntVariant::Separable, cut).value);
    excess(tel_robustness(asm_, TelVariant::Random, cut).value, ent_robustness(rho, EntVariant::Random, cut).value);
  }
  o.require(worst <= kSoundnessSlack, "every chain inequality within 1e-5");
  o.detail << "max(lhs - rhs) = " << fmt(worst) << " over 20 instances (" << witnesses << " with a witness)";
  return o;
}

Outcome criterion9() {
  Outcome o;
  CounterRng rng(99);

  double contraction = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 2, dc = 1 + trial % 3;
    const CMatrix m = testing::random_complex(d * dc, d * dc, rng);
    const CMatrix lhs =
        partial_trace(kron(identity(d), m) * kron(max_entangled(d).mat(), identity(dc)), {d, d, dc}, {0, 2});
    contraction = std::max(contraction, max_abs(lhs - partial_transpose(m, {d, dc}, 0) / static_cast<double>(d)));
  }
  o.require(contraction <= kContractionTol, "contraction identity within 1e-10");

  double reconstruction = 0.0, invariant = 0.0;
  int generated = 0;
  auto check_invariants = [&](const TeleportationAssemblage& asm_) {
    ++generated;
    const CMatrix marginal = asm_.bob_marginal();
    for (int x = 0; x < asm_.n_inputs(); ++x) {
      CMatrix sum = CMatrix::Zero(asm_.d_b(), asm_.d_b());
      for (int a = 0; a < asm_.n_outcomes(); ++a) {
        invariant = std::max(invariant, -min_eigenvalue(asm_(a, x)));
        sum += asm_(a, x);
      }
      invariant = std::max({invariant, max_abs(sum - marginal), std::abs(sum.trace().real() - 1.0)});
    }
  };
  for (int trial = 0; trial < 50; ++trial) {
    const int db = 2 + trial % 2;
    const auto rho = random_density_matrix({2, db}, rng, 1 + trial % 4);
    const auto m = random_povm({2, 2}, 2 + trial % 4, rng);
    const auto e = random_tomo_complete_ensemble(2, 500 + trial);
    const auto asm_ = generate_assemblage(rho, m, e);
    check_invariants(asm_);
    const auto rebuilt = reconstruct_from_normal_form(bsm_normal_form(rho, m), e, db);
    for (int a = 0; a < asm_.n_outcomes(); ++a)
      for (int x = 0; x < asm_.n_inputs(); ++x) reconstruction = std::max(reconstruction, max_abs(asm_(a, x) - rebuilt[a][x]));
  }
  for (const auto& rho : {flag_state(0.3), isotropic_state(0.6), max_entangled(2)})
    for (const auto& m : {bell_measurement(2), partial_bell_measurement(2)}) check_invariants(generate_assemblage(rho, m, pauli6()));
  for (const auto& rho : {horodecki_state(0.5), upb_pyramid_state()})
    check_invariants(generate_assemblage(rho, partial_bell_measurement(3), random_tomo_complete_ensemble(3, kQutritSeed)));
  o.require(reconstruction <= kReconstructionTol, "normal-form reconstruction within 1e-9");
  o.require(invariant <= kInvariantTol, "PSD and no-signalling within 1e-8");

  double doubling = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + trial % 8;
    const CMatrix h = testing::random_hermitian(d, rng);
    const RVector ev = hermitian_eigenvalues(h);
    Eigen::SelfAdjointEigenSolver<RMatrix> es(realify_hermitian(h));
    for (int i = 0; i < d; ++i)
      doubling = std::max({doubling, std::abs(es.eigenvalues()(2 * i) - ev(i)), std::abs(es.eigenvalues()(2 * i + 1) - ev(i))});
  }
  o.require(doubling <= kDoublingTol, "eigenvalue doubling within 1e-10");

  o.detail << "contraction err = " << fmt(contraction) << ", reconstruction err = " << fmt(reconstruction)
           << " (50 instances), invariant err = " << fmt(invariant) << " (" << generated
           << " assemblages), doubling err = " << fmt(doubling) << " (100 matrices)";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                                          criterion6, criterion7, criterion8, criterion9};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int k = std::atoi(argv[i]);
    if (k < 1 || k > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "unknown criterion '%s'\n", argv[i]);
      return 2;
    }
    selected.push_back(k);
  }
  if (selected.empty())
    for (int k = 1; k <= static_cast<int>(criteria.size()); ++k) selected.push_back(k);

  int failed = 0;
  for (int k : selected) {
    Outcome o;
    try {
      o = criteria[k - 1]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    failed += !o.pass;
    std::printf("criterion %d: %s  %s\n", k, o.pass ? "PASS" : "FAIL", (o.detail.str() + o.violations).c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
