#include "rodlimit/checks.hpp"
#include "rodlimit/material.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace rodlimit;

namespace {

MaterialParams lame(double lambda, double mu) {
  MaterialParams p;
  p.lambda = lambda;
  p.mu = mu;
  return p;
}

} // namespace

TEST(Moduli, KnownPairs) {
  auto m = derived_moduli(lame(1, 1));
  EXPECT_DOUBLE_EQ(m.E, 2.5);
  EXPECT_DOUBLE_EQ(m.nu, 0.25);
  m = derived_moduli(lame(0, 1));
  EXPECT_DOUBLE_EQ(m.E, 2.0);
  EXPECT_DOUBLE_EQ(m.nu, 0.0);
  m = derived_moduli(lame(2, 1));
  EXPECT_NEAR(m.E, 8.0 / 3.0, 1e-15);
  EXPECT_NEAR(m.nu, 1.0 / 3.0, 1e-15);
}

TEST(Moduli, RangeOverAdmissibleLame) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const auto m = derived_moduli(random_moduli(rng));
    EXPECT_GT(m.E, 0.0);
    EXPECT_GT(m.nu, -1.0);
    EXPECT_LT(m.nu, 0.5);
  }
}

TEST(Moduli, RejectsNonElliptic) {
  EXPECT_THROW(derived_moduli(lame(1, 0)), ParameterError);
  EXPECT_THROW(derived_moduli(lame(-2, 1)), ParameterError);
}

TEST(UniaxialIdentity, HandValues) {
  // mu(2nu^2+1) + lambda/2 (2nu-1)^2: 1.25 for (1,1), 1 for (0,1)
  EXPECT_LE(verify_uniaxial_identity(lame(1, 1)), 1e-14);
  EXPECT_LE(verify_uniaxial_identity(lame(0, 1)), 1e-14);
  const auto p = lame(1, 1);
  const double nu = 0.25;
  EXPECT_DOUBLE_EQ(p.mu * (2 * nu * nu + 1) + 0.5 * p.lambda * (2 * nu - 1) * (2 * nu - 1), 1.25);
}

TEST(UniaxialIdentity, RandomModuli) { EXPECT_LE(max_identity_residual(1000, 11), 1e-14); }

TEST(Params, CollectsEveryViolation) {
  MaterialParams p;
  p.mu = -1;
  p.eta = 1.5;
  p.w1 = 0;
  p.ell = -1;
  p.bigL = 0;
  const auto e = validation_errors(p);
  EXPECT_EQ(e.size(), 6u); // mu, lambda+mu, eta, w1, ell, L
  EXPECT_THROW(validate(p), ParameterError);
  EXPECT_NO_THROW(validate(MaterialParams{}));
  EXPECT_DOUBLE_EQ(MaterialParams{}.length_ratio_sq(), 0.01);
}

TEST(Params, RejectsNonPositiveYoungModulus) {
  // lambda + mu > 0 but 3 lambda + 2 mu < 0 gives E < 0
  const auto e = validation_errors(lame(-0.8, 1.0));
  ASSERT_EQ(e.size(), 1u);
  EXPECT_NE(e[0].find("3 lambda + 2 mu"), std::string::npos);
  EXPECT_LT(derived_moduli(lame(-0.8, 1.0)).E, 0.0);
}

TEST(Law, Endpoints) {
  const double eta = 0.01, w1 = 1.7;
  const ConstitutiveLaw at1(DegradationKind::QuadraticAT, DamageEnergyKind::AT1, eta, w1);
  const ConstitutiveLaw at2(DegradationKind::QuadraticAT, DamageEnergyKind::AT2, eta, w1);
  EXPECT_EQ(eval_degradation(at1, 0.0).value, 1.0);
  EXPECT_DOUBLE_EQ(eval_degradation(at1, 1.0).value, eta);
  EXPECT_EQ(eval_damage_energy(at1, 0.0).value, 0.0);
  EXPECT_DOUBLE_EQ(eval_damage_energy(at1, 1.0).value, w1);
  EXPECT_DOUBLE_EQ(eval_damage_energy(at2, 1.0).value, w1);
  EXPECT_DOUBLE_EQ(eval_damage_energy(at1, 0.3).slope, w1);
  EXPECT_DOUBLE_EQ(eval_damage_energy(at2, 0.3).slope, 2 * w1 * 0.3);
}

TEST(Law, DegradationMonotoneAndSlopeMatchesDifference) {
  const auto law = ConstitutiveLaw::from(MaterialParams{});
  double prev = law.a(0.0);
  for (int i = 1; i <= 1000; ++i) {
    const double x = i / 1000.0;
    EXPECT_LT(law.a(x), prev);
    prev = law.a(x);
  }
  for (double x : {0.1, 0.5, 0.9}) {
    const double fd = (law.a(x + 1e-6) - law.a(x - 1e-6)) / 2e-6;
    EXPECT_NEAR(law.da(x), fd, 1e-8);
  }
}

TEST(Law, RejectsAlphaOutsideBox) {
  const auto law = ConstitutiveLaw::from(MaterialParams{});
  EXPECT_THROW(eval_degradation(law, -0.1), ParameterError);
  EXPECT_THROW(eval_damage_energy(law, 1.01), ParameterError);
  EXPECT_THROW(eval_degradation(law, std::nan("")), ParameterError);
}

TEST(Law, RejectsBadScalars) {
  EXPECT_THROW(ConstitutiveLaw(DegradationKind::QuadraticAT, DamageEnergyKind::AT2, 0.0, 1.0),
               ParameterError);
  EXPECT_THROW(ConstitutiveLaw(DegradationKind::QuadraticAT, DamageEnergyKind::AT2, 0.1, 0.0),
               ParameterError);
}

TEST(TabulatedLaw, ReproducesQuadraticSamplesAndValidates) {
  const double eta = 0.05;
  std::vector<double> deg, dmg;
  for (int i = 0; i <= 20; ++i) {
    const double x = i / 20.0;
    deg.push_back((1 - x) * (1 - x) * (1 - eta) + eta);
    dmg.push_back(x * x);
  }
  const ConstitutiveLaw tab(DegradationKind::Tabulated, DamageEnergyKind::Tabulated, eta, 1.0,
                            TabulatedCurve(deg), TabulatedCurve(dmg));
  const ConstitutiveLaw ref(DegradationKind::QuadraticAT, DamageEnergyKind::AT2, eta, 1.0);
  for (int i = 0; i <= 20; ++i) {
    const double x = i / 20.0;
    EXPECT_NEAR(tab.a(x), ref.a(x), 1e-15);
    EXPECT_NEAR(tab.w(x), ref.w(x), 1e-15);
  }
  // between samples: monotone cubic is O(h^2) where the slope nearly vanishes
  const double h2_bound = 0.25 * 2.0 * (1.0 / 20) * (1.0 / 20); // |f''| h^2 / 4
  for (double x : {0.013, 0.477, 0.961}) {
    EXPECT_NEAR(tab.a(x), ref.a(x), h2_bound);
    EXPECT_NEAR(tab.w(x), ref.w(x), h2_bound);
    EXPECT_NEAR(tab.da(x), ref.da(x), 1e-2);
  }
  EXPECT_DOUBLE_EQ(tab.a(1.0), eta);

  // wrong endpoint, non-monotone
  auto bad = deg;
  bad.back() = 0.2;
  EXPECT_THROW(ConstitutiveLaw(DegradationKind::Tabulated, DamageEnergyKind::AT2, eta, 1.0,
                               TabulatedCurve(bad)),
               ParameterError);
  auto bump = dmg;
  bump[5] = bump[7];
  EXPECT_THROW(ConstitutiveLaw(DegradationKind::QuadraticAT, DamageEnergyKind::Tabulated, eta,
                               1.0, {}, TabulatedCurve(bump)),
               ParameterError);
  EXPECT_THROW(TabulatedCurve(std::vector<double>{1.0, 0.5}), ParameterError);
}

TEST(Threshold, SignChangeOfFirstVariation) {
  // Independent oracle: d/dalpha [a E/2 eps^2 + w1 alpha] at alpha = 0 is
  // -2(1-eta) E/2 eps^2 + w1, which vanishes at the threshold strain.
  MaterialParams p = lame(2, 1);
  p.eta = 0.02;
  p.w1 = 0.8;
  const auto law = ConstitutiveLaw::from(p, DegradationKind::QuadraticAT, DamageEnergyKind::AT1);
  const double E = derived_moduli(p).E;
  const double ec = at1_threshold_strain(p);
  auto slope0 = [&](double eps) { return law.da(0.0) * 0.5 * E * eps * eps + law.dw(0.0); };
  EXPECT_NEAR(slope0(ec), 0.0, 1e-14);
  EXPECT_GT(slope0(0.99 * ec), 0.0);
  EXPECT_LT(slope0(1.01 * ec), 0.0);
}
