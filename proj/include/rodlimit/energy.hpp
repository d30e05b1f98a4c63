// energy.hpp
//
// Discrete rescaled gradient-damage energy of the rod (3D, per unit volume)
// and of its one-dimensional limit, with exact gradients.

#pragma once

#include "fields.hpp"
#include "material.hpp"
#include "mesh.hpp"

#include <array>
#include <stdexcept>
#include <vector>

namespace rodlimit {

/// Energy split by term. 3D values are normalized by |Omega_h|; the 1D
/// functional reports its single elastic term under `normal`.
struct EnergyBreakdown {
  double normal = 0.0;        // a * mu (e11^2 + e22^2 + e33^2)
  double trace = 0.0;         // a * lambda/2 (tr e)^2
  double shear_inplane = 0.0; // a * mu/2 (d_y u1 + d_x u2)^2
  double shear_axial = 0.0;   // a * mu/2 [(delta d_z u1 + d_x u3/delta)^2 + (..)^2]
  double damage_local = 0.0;  // w(alpha)
  double damage_grad_transverse = 0.0;
  double damage_grad_axial = 0.0;
  double total = 0.0;

  double elastic() const { return normal + trace + shear_inplane + shear_axial; }
  double sum_of_parts() const {
    return elastic() + damage_local + damage_grad_transverse + damage_grad_axial;
  }
};

using Grad3 = std::array<std::array<double, 3>, 3>;

/// Undegraded (a = 1) elastic energy density of a rescaled displacement
/// gradient, split into (normal, trace, inplane shear, axial shear).
struct ElasticParts {
  double normal, trace, shear_inplane, shear_axial;
  double sum() const { return normal + trace + shear_inplane + shear_axial; }
};

inline ElasticParts elastic_parts(const Grad3 &G, double lambda, double mu, double delta) {
  const double di = 1.0 / delta;
  const double tr = G[0][0] + G[1][1] + G[2][2];
  const double g12 = G[0][1] + G[1][0];
  const double g13 = delta * G[0][2] + di * G[2][0];
  const double g23 = delta * G[1][2] + di * G[2][1];
  return {mu * (G[0][0] * G[0][0] + G[1][1] * G[1][1] + G[2][2] * G[2][2]),
          0.5 * lambda * tr * tr, 0.5 * mu * g12 * g12, 0.5 * mu * (g13 * g13 + g23 * g23)};
}

/// Derivative of the undegraded elastic density with respect to G.
inline Grad3 elastic_stress(const Grad3 &G, double lambda, double mu, double delta) {
  const double di = 1.0 / delta;
  const double tr = G[0][0] + G[1][1] + G[2][2];
  const double g12 = mu * (G[0][1] + G[1][0]);
  const double g13 = mu * (delta * G[0][2] + di * G[2][0]);
  const double g23 = mu * (delta * G[1][2] + di * G[2][1]);
  Grad3 S{};
  S[0][0] = 2.0 * mu * G[0][0] + lambda * tr;
  S[1][1] = 2.0 * mu * G[1][1] + lambda * tr;
  S[2][2] = 2.0 * mu * G[2][2] + lambda * tr;
  S[0][1] = S[1][0] = g12;
  S[0][2] = delta * g13;
  S[2][0] = di * g13;
  S[1][2] = delta * g23;
  S[2][1] = di * g23;
  return S;
}

inline EnergyBreakdown energy_3d(const MaterialParams &p, const ConstitutiveLaw &law,
                                 const CylinderMesh &mesh, const Field3D &f) {
  if (f.size() != mesh.num_nodes())
    throw ParameterError("energy_3d: field does not match mesh");
  if (has_nan(f))
    throw ParameterError("energy_3d: field contains NaN or Inf");
  const auto &quad = mesh.quadrature();
  const double kgrad = p.w1 * p.length_ratio_sq();
  const double di2 = 1.0 / (f.delta * f.delta);
  // ~1e5 quadrature terms: accumulate in extended precision
  long double normal = 0, trace = 0, sip = 0, sax = 0, loc = 0, gtr = 0, gax = 0;
  for (int layer = 0; layer < mesh.nz(); ++layer)
    for (std::size_t c = 0; c < mesh.plane_cells(); ++c) {
      const auto ids = mesh.cell_nodes(c, layer);
      for (int q = 0; q < 8; ++q) {
        const auto s = point_state(f, quad, ids, q);
        const double a = law.a(s.alpha);
        const auto el = elastic_parts(s.grad, p.lambda, p.mu, f.delta);
        const double w = quad.weight;
        normal += w * a * el.normal;
        trace += w * a * el.trace;
        sip += w * a * el.shear_inplane;
        sax += w * a * el.shear_axial;
        loc += w * law.w(s.alpha);
        gtr += w * 0.5 * kgrad * di2 * (s.dalpha[0] * s.dalpha[0] + s.dalpha[1] * s.dalpha[1]);
        gax += w * 0.5 * kgrad * s.dalpha[2] * s.dalpha[2];
      }
    }
  const long double inv = 1.0L / mesh.measure();
  EnergyBreakdown e;
  e.normal = double(normal * inv);
  e.trace = double(trace * inv);
  e.shear_inplane = double(sip * inv);
  e.shear_axial = double(sax * inv);
  e.damage_local = double(loc * inv);
  e.damage_grad_transverse = double(gtr * inv);
  e.damage_grad_axial = double(gax * inv);
  e.total = e.sum_of_parts();
  return e;
}

/// Gradient with respect to every nodal unknown. Dirichlet u3 entries are
/// zero; the damage block is the raw gradient (no box projection).
struct Gradient3D {
  std::vector<double> u1, u2, u3, alpha;
};

inline Gradient3D grad_energy_3d(const MaterialParams &p, const ConstitutiveLaw &law,
                                 const CylinderMesh &mesh, const Field3D &f) {
  if (f.size() != mesh.num_nodes())
    throw ParameterError("grad_energy_3d: field does not match mesh");
  const auto &quad = mesh.quadrature();
  const double kgrad = p.w1 * p.length_ratio_sq();
  const double di2 = 1.0 / (f.delta * f.delta);
  const double scale = quad.weight / mesh.measure();
  const std::size_t nn = mesh.num_nodes();
  Gradient3D g{std::vector<double>(nn, 0.0), std::vector<double>(nn, 0.0),
               std::vector<double>(nn, 0.0), std::vector<double>(nn, 0.0)};
  for (int layer = 0; layer < mesh.nz(); ++layer)
    for (std::size_t c = 0; c < mesh.plane_cells(); ++c) {
      const auto ids = mesh.cell_nodes(c, layer);
      for (int q = 0; q < 8; ++q) {
        const auto s = point_state(f, quad, ids, q);
        const double a = law.a(s.alpha);
        const auto S = elastic_stress(s.grad, p.lambda, p.mu, f.delta);
        const double psi = elastic_parts(s.grad, p.lambda, p.mu, f.delta).sum();
        const double local = law.da(s.alpha) * psi + law.dw(s.alpha);
        const double ga[3] = {kgrad * di2 * s.dalpha[0], kgrad * di2 * s.dalpha[1],
                              kgrad * s.dalpha[2]};
        for (int n = 0; n < 8; ++n) {
          const auto &dn = quad.dN[q][n];
          const std::size_t id = ids[n];
          g.u1[id] += scale * a * (S[0][0] * dn[0] + S[0][1] * dn[1] + S[0][2] * dn[2]);
          g.u2[id] += scale * a * (S[1][0] * dn[0] + S[1][1] * dn[1] + S[1][2] * dn[2]);
          g.u3[id] += scale * a * (S[2][0] * dn[0] + S[2][1] * dn[1] + S[2][2] * dn[2]);
          g.alpha[id] +=
              scale * (quad.N[q][n] * local + ga[0] * dn[0] + ga[1] * dn[1] + ga[2] * dn[2]);
        }
      }
    }
  for (std::size_t pn = 0; pn < mesh.plane_nodes(); ++pn) {
    g.u3[mesh.node(pn, 0)] = 0.0;
    g.u3[mesh.node(pn, mesh.nz())] = 0.0;
  }
  return g;
}

// ---------------------------------------------------------------------------
// One-dimensional limit functional
//   int_0^1 a(alpha) E/2 |u'|^2 + w(alpha) + w1/2 (ell/L)^2 |alpha'|^2 dz

inline EnergyBreakdown energy_1d(const MaterialParams &p, const ConstitutiveLaw &law,
                                 const IntervalMesh &mesh, const Field1D &g) {
  if (g.size() != mesh.num_nodes())
    throw ParameterError("energy_1d: field does not match mesh");
  if (has_nan(g))
    throw ParameterError("energy_1d: field contains NaN or Inf");
  const double E = derived_moduli(p).E;
  const double kgrad = p.w1 * p.length_ratio_sq();
  const double h = mesh.h(), w = mesh.gauss_weight();
  EnergyBreakdown e;
  for (int el = 0; el < mesh.nz(); ++el) {
    const double du = (g.u3bar[el + 1] - g.u3bar[el]) / h;
    const double da = (g.alphabar[el + 1] - g.alphabar[el]) / h;
    for (double t : IntervalMesh::gauss_local()) {
      const double a = (1.0 - t) * g.alphabar[el] + t * g.alphabar[el + 1];
      e.normal += w * law.a(a) * 0.5 * E * du * du;
      e.damage_local += w * law.w(a);
    }
    e.damage_grad_axial += h * 0.5 * kgrad * da * da;
  }
  e.total = e.sum_of_parts();
  return e;
}

struct Gradient1D {
  std::vector<double> u3bar, alphabar;
};

inline Gradient1D grad_energy_1d(const MaterialParams &p, const ConstitutiveLaw &law,
                                 const IntervalMesh &mesh, const Field1D &g) {
  if (g.size() != mesh.num_nodes())
    throw ParameterError("grad_energy_1d: field does not match mesh");
  const double E = derived_moduli(p).E;
  const double kgrad = p.w1 * p.length_ratio_sq();
  const double h = mesh.h(), w = mesh.gauss_weight();
  Gradient1D out{std::vector<double>(g.size(), 0.0), std::vector<double>(g.size(), 0.0)};
  for (int el = 0; el < mesh.nz(); ++el) {
    const double du = (g.u3bar[el + 1] - g.u3bar[el]) / h;
    const double da = (g.alphabar[el + 1] - g.alphabar[el]) / h;
    double abar = 0.0;
    for (double t : IntervalMesh::gauss_local()) {
      const double a = (1.0 - t) * g.alphabar[el] + t * g.alphabar[el + 1];
      abar += 0.5 * law.a(a);
      const double local = law.da(a) * 0.5 * E * du * du + law.dw(a);
      out.alphabar[el] += w * (1.0 - t) * local;
      out.alphabar[el + 1] += w * t * local;
    }
    // d/du of h * abar * E/2 * du^2, with du = (u_{el+1} - u_el)/h
    const double su = abar * E * du;
    out.u3bar[el] -= su;
    out.u3bar[el + 1] += su;
    out.alphabar[el] -= kgrad * da;
    out.alphabar[el + 1] += kgrad * da;
  }
  out.u3bar.front() = 0.0;
  out.u3bar.back() = 0.0;
  return out;
}

} // namespace rodlimit
