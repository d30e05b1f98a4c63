#include "rodlimit/recovery.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace rodlimit;

namespace {

// composite Simpson of f over [a,b]
template <class F> double simpson(F f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i)
    s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

std::vector<double> kinked(int nz, double s1, double s2, double z0) {
  std::vector<double> u(nz + 1);
  for (int i = 0; i <= nz; ++i) {
    const double z = double(i) / nz;
    u[i] = z <= z0 ? s1 * z : s1 * z0 + s2 * (z - z0);
  }
  return u;
}

// Brute-force convolution of the zero-extended slope of a piecewise-linear
// profile with rho_s, integrating piece by piece.
double convolve(const std::vector<double> &u, double s, double z) {
  const auto &m = standard_mollifier();
  const double h = 1.0 / double(u.size() - 1);
  double v = 0.0;
  for (std::size_t e = 0; e + 1 < u.size(); ++e) {
    const double lo = std::max(z - (e + 1) * h, -s), hi = std::min(z - e * h, s);
    if (hi <= lo)
      continue;
    const double slope = (u[e + 1] - u[e]) / h;
    v += slope * simpson([&](double t) { return m.rho(t, s); }, lo, hi, 2000);
  }
  return v;
}

} // namespace

TEST(Mollifier, UnitMassAndSupport) {
  const auto &m = standard_mollifier();
  EXPECT_NEAR(simpson([&](double z) { return m.rho(z); }, -1, 1, 200000), 1.0, 1e-10);
  for (double s : {0.5, 1.0 / std::sqrt(3.0)})
    EXPECT_NEAR(simpson([&](double z) { return m.rho(z, s); }, -s, s, 200000), 1.0, 1e-10);
  EXPECT_EQ(m.rho(1.0), 0.0);
  EXPECT_EQ(m.rho(-1.3), 0.0);
  EXPECT_EQ(m.rho(0.31, 0.3), 0.0);
  EXPECT_GT(m.rho(0.0), 0.0);
  EXPECT_EQ(m.cdf(-1.0), 0.0);
  EXPECT_EQ(m.cdf(1.0), 1.0);
  EXPECT_NEAR(m.cdf(0.0), 0.5, 1e-13);
  // C = 1 / int exp(-1/(1-z^2)), about 2.2523
  EXPECT_NEAR(m.constant(), 2.25228, 1e-4);
}

TEST(Mollifier, CdfMatchesQuadrature) {
  const auto &m = standard_mollifier();
  for (double xi : {-0.9, -0.37, 0.12, 0.73}) {
    const double ref = simpson([&](double z) { return m.rho(z); }, -1, xi, 100000);
    EXPECT_NEAR(m.cdf(xi), ref, 1e-12) << xi;
  }
}

TEST(RecoveryIndex, FloorOfInverseSqrt) {
  EXPECT_EQ(recovery_index(0.01), 10);
  EXPECT_EQ(recovery_index(0.4), 1);
  EXPECT_EQ(recovery_index(0.2), 2);
  EXPECT_EQ(recovery_index(0.1), 3);
  EXPECT_EQ(recovery_index(0.05), 4);
  EXPECT_EQ(recovery_index(0.25), 2);
  EXPECT_EQ(recovery_index(1.0), 1);
  EXPECT_EQ(recovery_index(4.0), 1); // clamp
  EXPECT_THROW(recovery_index(0.0), ParameterError);
}

TEST(MollifyStrain, MatchesBruteForceConvolution) {
  const auto u = kinked(24, -0.5, -1.5, 0.5);
  for (int k : {1, 4, 16}) {
    const auto v = mollify_strain(u, k);
    for (std::size_t i = 0; i < u.size(); i += 3)
      EXPECT_NEAR(v.values[i], convolve(u, v.width, double(i) / 24.0), 1e-9) << k << " " << i;
  }
  EXPECT_THROW(mollify_strain(u, 0), ParameterError);
}

TEST(MollifyStrain, ConstantSlopeAwayFromBoundaryLayer) {
  std::vector<double> u(41);
  for (int i = 0; i <= 40; ++i)
    u[i] = -0.8 * i / 40.0;
  const auto v = mollify_strain(u, 25); // width 0.2
  for (int i = 0; i <= 40; ++i) {
    const double z = i / 40.0;
    if (z >= 0.2 && z <= 0.8)
      EXPECT_NEAR(v.values[i], -0.8, 1e-12);
    else
      EXPECT_GE(v.values[i], -0.8 - 1e-12); // zero extension pulls toward 0
  }
}

TEST(MollifyStrain, StepStaysWithinBounds) {
  const auto u = kinked(32, -0.5, -1.5, 0.5);
  const auto v = mollify_strain(u, 16);
  for (std::size_t i = 0; i < v.fine_z.size(); ++i) {
    const double z = v.fine_z[i];
    EXPECT_LE(v.fine_v[i], 1e-12);
    EXPECT_GE(v.fine_v[i], -1.5 - 1e-12);
    if (z > v.width && z < 1 - v.width) {
      EXPECT_LE(v.fine_v[i], -0.5 + 1e-12);
    }
  }
}

TEST(MollifyStrain, L2ErrorDecreasesWithK) {
  const auto u = kinked(64, -0.5, -1.5, 0.5);
  double prev = 1e300;
  for (int k : {4, 16, 64}) {
    const auto v = mollify_strain(u, k);
    // oracle: Simpson on each element of (v - u')^2 with brute-force v
    double err = 0.0;
    for (int e = 0; e < 64; ++e) {
      const double slope = (u[e + 1] - u[e]) * 64;
      err += simpson(
          [&](double z) {
            const double d = convolve(u, v.width, z) - slope;
            return d * d;
          },
          e / 64.0, (e + 1) / 64.0, 8);
    }
    EXPECT_NEAR(v.err_l2, std::sqrt(err), 1e-6 * std::sqrt(err)) << k;
    EXPECT_LT(v.err_l2, prev);
    prev = v.err_l2;
  }
}

TEST(MollifyStrain, DerivativeBoundLinearInK) {
  const auto u = kinked(48, -0.5, -1.5, 0.5);
  const auto &m = standard_mollifier();
  for (int k : {1, 4, 16}) {
    const auto v = mollify_strain(u, k);
    // |v'| <= |u'|_L1 sup|rho'| / s^2 = C k
    const double bound = v.slope_l1 * m.max_abs_derivative() * k;
    EXPECT_LE(v.dv_inf, bound);
  }
}

TEST(BuildRecovery, AffineProfileGivesTestFieldInTheBulk) {
  const CylinderMesh m(10, 40);
  const double eps = 0.6, nu = 0.25;
  Field1D g(41);
  for (int i = 0; i <= 40; ++i)
    g.u3bar[i] = -eps * i / 40.0;
  const double delta = 0.04; // k = 5, width ~0.447
  const auto f = build_recovery(g, delta, m, nu);
  const auto t = u_test(m, nu, eps, delta);
  EXPECT_TRUE(is_admissible(f, m, eps));
  const double w = 1.0 / std::sqrt(5.0);
  for (std::size_t n = 0; n < f.size(); ++n) {
    EXPECT_EQ(f.u3[n], g.u3bar[m.node_level(n)]);
    const double z = m.node_xyz(n)[2];
    if (z >= w && z <= 1 - w) {
      EXPECT_NEAR(f.u1[n], t.u1[n], 1e-12);
      EXPECT_NEAR(f.u2[n], t.u2[n], 1e-12);
    }
  }
}

TEST(BuildRecovery, StrainStructure) {
  const CylinderMesh m(8, 16);
  Field1D g(17);
  g.u3bar = kinked(16, -0.3, -1.0, 0.5);
  g.u3bar.back() = -0.3 * 0.5 - 0.5;
  for (int i = 0; i <= 16; ++i)
    g.alphabar[i] = 0.5 * i / 16.0;
  const double delta = 0.1, nu = 0.3;
  const auto f = build_recovery(g, delta, m, nu);
  EXPECT_TRUE(is_admissible(f, m, 0.65));
  EXPECT_EQ(f.alpha[m.node(0, 16)], 0.5);
  const auto e = strain(f, m);
  const auto &quad = m.quadrature();
  for (std::size_t i = 0; i < e.e11.size(); ++i) {
    EXPECT_NEAR(e.e12[i], 0.0, 1e-14);
    EXPECT_NEAR(e.e11[i], e.e22[i], 1e-14);
  }
  // e13 = -delta nu x v'/2 with v' the element slope of the nodal v
  const auto v = mollify_strain(g.u3bar, recovery_index(delta));
  for (int layer : {0, 7, 15})
    for (std::size_t c = 0; c < m.plane_cells(); c += 5)
      for (int q = 0; q < 8; ++q) {
        const auto x = m.qp_xyz(c, layer, q);
        const double dv = (v.values[layer + 1] - v.values[layer]) * 16;
        EXPECT_NEAR(e.e13[(layer * m.plane_cells() + c) * 8 + q], -0.5 * delta * nu * x[0] * dv,
                    1e-13);
      }
  (void)quad;
  Field1D bad = g;
  bad.alphabar[3] = 1.5;
  EXPECT_THROW(build_recovery(bad, delta, m, nu), ParameterError);
}

TEST(LimsupCheck, GapMatchesClosedForm) {
  MaterialParams p;
  p.lambda = 1.0;
  p.mu = 1.0;
  p.eps_z = 2.0;
  const auto law = ConstitutiveLaw::from(p);
  const auto [E, nu] = derived_moduli(p);
  const int nz = 24, nxy = 12;
  const CylinderMesh m3(nxy, nz);
  const IntervalMesh m1(nz);
  Field1D g(nz + 1);
  g.u3bar = kinked(nz, -1.0, -3.0, 0.5);
  const std::vector<double> deltas = {0.4, 0.1, 0.05};
  const auto rows = limsup_check(p, law, m3, m1, g, deltas);

  // second moment of the mask: int (x^2 + y^2) over retained cells, exact
  // for the bilinear-in-cell integrand by Gauss 2x2
  const double h = 2.0 / nxy;
  double area = 0.0, moment = 0.0;
  for (int j = 0; j < nxy; ++j)
    for (int i = 0; i < nxy; ++i) {
      const double cx = -1 + (i + 0.5) * h, cy = -1 + (j + 0.5) * h;
      if (cx * cx + cy * cy >= 1)
        continue;
      area += h * h;
      moment += h * h * (cx * cx + cy * cy + h * h / 6.0);
    }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const double delta = deltas[r];
    const auto v = mollify_strain(g.u3bar, recovery_index(delta));
    double dev = 0.0, slope_sq = 0.0, dv_sq = 0.0;
    for (int e = 0; e < nz; ++e) {
      const double s = (g.u3bar[e + 1] - g.u3bar[e]) * nz;
      const double d0 = v.values[e] - s, d1 = v.values[e + 1] - s;
      dev += (d0 * d0 + d0 * d1 + d1 * d1) / (3.0 * nz);
      const double dv = (v.values[e + 1] - v.values[e]) * nz;
      dv_sq += dv * dv / nz;
      slope_sq += s * s / nz;
    }
    const double e1d = 0.5 * E * slope_sq;
    const double gap = 2 * nu * nu * (p.lambda + p.mu) * dev +
                       0.5 * p.mu * nu * nu * delta * delta * dv_sq * moment / area;
    EXPECT_NEAR(rows[r].e1d, e1d, 1e-12);
    EXPECT_NEAR(rows[r].gap, gap, 1e-11) << delta;
    EXPECT_EQ(rows[r].k, recovery_index(delta));
  }
  EXPECT_THROW(limsup_check(p, law, m3, m1, g, {0.1, 0.2}), ParameterError);
  EXPECT_THROW(limsup_check(p, law, m3, IntervalMesh(12), g, deltas), ParameterError);
}
