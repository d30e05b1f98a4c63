// checks.hpp
//
// Self-checks shared by the `validate` command and the test suites: the
// uniaxial identity over random moduli, and gradients against central finite
// differences of the energy along random directions.

#pragma once

#include "energy.hpp"
#include "fields.hpp"
#include "material.hpp"
#include "mesh.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace rodlimit {

/// Random admissible moduli: mu in (0.1, 10), Poisson ratio nu in (-0.5, 0.49).
/// The lower bound on nu keeps E away from 0, where the identity residual loses
/// digits to cancellation.
inline MaterialParams random_moduli(std::mt19937_64 &rng, MaterialParams base = {}) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  base.mu = 0.1 + 9.9 * u01(rng);
  const double nu = -0.5 + 0.99 * u01(rng);
  base.lambda = 2.0 * base.mu * nu / (1.0 - 2.0 * nu);
  return base;
}

inline double max_identity_residual(int samples, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i)
    worst = std::max(worst, verify_uniaxial_identity(random_moduli(rng)));
  return worst;
}

/// Admissible random 3D field with alpha strictly inside (0,1).
inline Field3D random_field_3d(const CylinderMesh &mesh, double eps_z, double delta,
                               std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), a(0.05, 0.95);
  Field3D f(mesh.num_nodes(), delta);
  for (std::size_t n = 0; n < f.size(); ++n) {
    const auto x = mesh.node_xyz(n);
    f.u1[n] = 0.3 * u(rng);
    f.u2[n] = 0.3 * u(rng);
    f.u3[n] = -eps_z * x[2] + 0.3 * u(rng);
    f.alpha[n] = a(rng);
  }
  apply_dirichlet(f, mesh, eps_z);
  return f;
}

inline Field1D random_field_1d(const IntervalMesh &mesh, double eps_z, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), a(0.05, 0.95);
  Field1D g(mesh.num_nodes());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.u3bar[i] = -eps_z * mesh.nodes()[i] + 0.3 * u(rng);
    g.alphabar[i] = a(rng);
  }
  apply_dirichlet(g, eps_z);
  return g;
}

struct FdComparison {
  double analytic = 0.0;
  double finite_difference = 0.0;
  double relative_error() const {
    return std::abs(analytic - finite_difference) /
           std::max({std::abs(analytic), std::abs(finite_difference), 1e-300});
  }
};

/// Directional derivative along a random direction (zero on Dirichlet dofs,
/// small enough to keep alpha inside [0,1]) vs a central difference.
inline FdComparison gradient_check_3d(const MaterialParams &p, const ConstitutiveLaw &law,
                                      const CylinderMesh &mesh, const Field3D &f,
                                      std::mt19937_64 &rng, double step = 1e-6) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Field3D dir(mesh.num_nodes(), f.delta);
  for (std::size_t n = 0; n < f.size(); ++n) {
    dir.u1[n] = u(rng);
    dir.u2[n] = u(rng);
    dir.u3[n] = u(rng);
    dir.alpha[n] = u(rng);
  }
  for (std::size_t pn = 0; pn < mesh.plane_nodes(); ++pn) {
    dir.u3[mesh.node(pn, 0)] = 0.0;
    dir.u3[mesh.node(pn, mesh.nz())] = 0.0;
  }
  const auto g = grad_energy_3d(p, law, mesh, f);
  FdComparison c;
  for (std::size_t n = 0; n < f.size(); ++n)
    c.analytic += g.u1[n] * dir.u1[n] + g.u2[n] * dir.u2[n] + g.u3[n] * dir.u3[n] +
                  g.alpha[n] * dir.alpha[n];
  auto shifted = [&](double t) {
    Field3D s = f;
    for (std::size_t n = 0; n < f.size(); ++n) {
      s.u1[n] += t * dir.u1[n];
      s.u2[n] += t * dir.u2[n];
      s.u3[n] += t * dir.u3[n];
      s.alpha[n] += t * dir.alpha[n];
    }
    return energy_3d(p, law, mesh, s).total;
  };
  c.finite_difference = (shifted(step) - shifted(-step)) / (2.0 * step);
  return c;
}

inline FdComparison gradient_check_1d(const MaterialParams &p, const ConstitutiveLaw &law,
                                      const IntervalMesh &mesh, const Field1D &g,
                                      std::mt19937_64 &rng, double step = 1e-6) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Field1D dir(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    dir.u3bar[i] = u(rng);
    dir.alphabar[i] = u(rng);
  }
  dir.u3bar.front() = dir.u3bar.back() = 0.0;
  const auto grad = grad_energy_1d(p, law, mesh, g);
  FdComparison c;
  for (std::size_t i = 0; i < g.size(); ++i)
    c.analytic += grad.u3bar[i] * dir.u3bar[i] + grad.alphabar[i] * dir.alphabar[i];
  auto shifted = [&](double t) {
    Field1D s = g;
    for (std::size_t i = 0; i < g.size(); ++i) {
      s.u3bar[i] += t * dir.u3bar[i];
      s.alphabar[i] += t * dir.alphabar[i];
    }
    return energy_1d(p, law, mesh, s).total;
  };
  c.finite_difference = (shifted(step) - shifted(-step)) / (2.0 * step);
  return c;
}

} // namespace rodlimit
