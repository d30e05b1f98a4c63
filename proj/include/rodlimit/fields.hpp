// fields.hpp
//
// Nodal displacement/damage containers on the cylinder and on the interval,
// the rescaled strain operator, cross-section (slice) averages, the embedding
// of z-only profiles, and the residual integrals measuring how far a 3D field
// is from the uniaxial limit structure.

#pragma once

#include "material.hpp"
#include "mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace rodlimit {

/// Rescaled displacements and damage on a CylinderMesh. delta is the aspect
/// ratio R/L; the mesh itself is delta-independent.
struct Field3D {
  std::vector<double> u1, u2, u3, alpha;
  double delta = 1.0;

  Field3D() = default;
  Field3D(std::size_t num_nodes, double delta_)
      : u1(num_nodes, 0.0), u2(num_nodes, 0.0), u3(num_nodes, 0.0),
        alpha(num_nodes, 0.0), delta(delta_) {
    if (!(delta_ > 0.0 && delta_ <= 1.0))
      throw ParameterError("Field3D: delta must lie in (0,1]");
  }
  std::size_t size() const { return alpha.size(); }
};

/// z-only profiles on an IntervalMesh (or on the node levels of a cylinder).
struct Field1D {
  std::vector<double> u3bar, alphabar;

  Field1D() = default;
  explicit Field1D(std::size_t num_nodes) : u3bar(num_nodes, 0.0), alphabar(num_nodes, 0.0) {}
  std::size_t size() const { return alphabar.size(); }
};

enum class Component { U1, U2, U3, Alpha };

inline const std::vector<double> &component(const Field3D &f, Component c) {
  switch (c) {
  case Component::U1:
    return f.u1;
  case Component::U2:
    return f.u2;
  case Component::U3:
    return f.u3;
  default:
    return f.alpha;
  }
}

inline bool has_nan(const Field3D &f) {
  for (auto *v : {&f.u1, &f.u2, &f.u3, &f.alpha})
    for (double x : *v)
      if (!std::isfinite(x))
        return true;
  return false;
}

inline bool has_nan(const Field1D &g) {
  for (auto *v : {&g.u3bar, &g.alphabar})
    for (double x : *v)
      if (!std::isfinite(x))
        return true;
  return false;
}

/// Pins u3 = 0 on z = 0 and u3 = -eps_z on z = 1.
inline void apply_dirichlet(Field3D &f, const CylinderMesh &mesh, double eps_z) {
  for (std::size_t p = 0; p < mesh.plane_nodes(); ++p) {
    f.u3[mesh.node(p, 0)] = 0.0;
    f.u3[mesh.node(p, mesh.nz())] = -eps_z;
  }
}

inline void apply_dirichlet(Field1D &g, double eps_z) {
  g.u3bar.front() = 0.0;
  g.u3bar.back() = -eps_z;
}

/// Projects damage onto [0,1]; in-range values are untouched.
inline void project_alpha(std::span<double> alpha) {
  for (double &a : alpha)
    a = std::clamp(a, 0.0, 1.0);
}

inline bool is_admissible(const Field3D &f, const CylinderMesh &mesh, double eps_z,
                          double tol = 1e-12) {
  if (f.size() != mesh.num_nodes() || f.u1.size() != f.size() || f.u2.size() != f.size() ||
      f.u3.size() != f.size())
    return false;
  if (!(f.delta > 0.0 && f.delta <= 1.0) || has_nan(f))
    return false;
  for (double a : f.alpha)
    if (a < 0.0 || a > 1.0)
      return false;
  for (std::size_t p = 0; p < mesh.plane_nodes(); ++p)
    if (std::abs(f.u3[mesh.node(p, 0)]) > tol ||
        std::abs(f.u3[mesh.node(p, mesh.nz())] + eps_z) > tol)
      return false;
  return true;
}

inline bool is_admissible(const Field1D &g, double eps_z, double tol = 1e-12) {
  if (g.size() < 3 || g.u3bar.size() != g.size() || has_nan(g))
    return false;
  for (double a : g.alphabar)
    if (a < 0.0 || a > 1.0)
      return false;
  return std::abs(g.u3bar.front()) <= tol && std::abs(g.u3bar.back() + eps_z) <= tol;
}

/// Displacement gradient and damage data at one quadrature point.
/// grad[c][d] = d u_c / d x_d in rescaled coordinates.
struct PointState {
  std::array<std::array<double, 3>, 3> grad{};
  std::array<double, 3> dalpha{};
  double alpha = 0.0;
};

inline PointState point_state(const Field3D &f, const HexQuadrature &quad,
                              const std::array<std::size_t, 8> &ids, int q) {
  PointState s;
  for (int n = 0; n < 8; ++n) {
    const std::size_t id = ids[n];
    const auto &g = quad.dN[q][n];
    const double u[3] = {f.u1[id], f.u2[id], f.u3[id]};
    for (int c = 0; c < 3; ++c)
      for (int d = 0; d < 3; ++d)
        s.grad[c][d] += u[c] * g[d];
    for (int d = 0; d < 3; ++d)
      s.dalpha[d] += f.alpha[id] * g[d];
    s.alpha += f.alpha[id] * quad.N[q][n];
  }
  return s;
}

/// Rescaled strains at every quadrature point, indexed cell * 8 + q with
/// cell = layer * plane_cells + cell2d.
struct RescaledStrain {
  std::vector<double> e11, e22, e33, e12, e13, e23;
};

inline RescaledStrain strain(const Field3D &f, const CylinderMesh &mesh) {
  const auto &quad = mesh.quadrature();
  const std::size_t npts = mesh.num_cells() * 8;
  RescaledStrain e;
  for (auto *v : {&e.e11, &e.e22, &e.e33, &e.e12, &e.e13, &e.e23})
    v->resize(npts);
  const double d = f.delta, di = 1.0 / f.delta;
  for (int layer = 0; layer < mesh.nz(); ++layer)
    for (std::size_t c = 0; c < mesh.plane_cells(); ++c) {
      const auto ids = mesh.cell_nodes(c, layer);
      const std::size_t base = (layer * mesh.plane_cells() + c) * 8;
      for (int q = 0; q < 8; ++q) {
        const auto s = point_state(f, quad, ids, q);
        const auto &G = s.grad;
        e.e11[base + q] = G[0][0];
        e.e22[base + q] = G[1][1];
        e.e33[base + q] = G[2][2];
        e.e12[base + q] = 0.5 * (G[0][1] + G[1][0]);
        e.e13[base + q] = 0.5 * (d * G[0][2] + di * G[2][0]);
        e.e23[base + q] = 0.5 * (d * G[1][2] + di * G[2][1]);
      }
    }
  return e;
}

/// Cross-section mean of a nodal field at each node level z_k, using the
/// exact integral of the bilinear interpolant over the retained cells.
inline std::vector<double> slice_average(const std::vector<double> &nodal,
                                         const CylinderMesh &mesh) {
  std::vector<double> out(mesh.nz() + 1, 0.0);
  const double area = mesh.cross_section_area();
  for (int k = 0; k <= mesh.nz(); ++k) {
    double acc = 0.0;
    for (std::size_t p = 0; p < mesh.plane_nodes(); ++p)
      acc += mesh.plane_weight(p) * nodal[mesh.node(p, k)];
    out[k] = acc / area;
  }
  return out;
}

inline std::vector<double> slice_average(const Field3D &f, Component which,
                                         const CylinderMesh &mesh) {
  return slice_average(component(f, which), mesh);
}

/// Field with u3 and alpha constant on each cross-section and u1 = u2 = 0.
inline Field3D embed_1d(const Field1D &g, double delta, const CylinderMesh &mesh) {
  if (g.size() != std::size_t(mesh.nz() + 1))
    throw ParameterError("embed_1d: profile length does not match the mesh levels");
  Field3D f(mesh.num_nodes(), delta);
  for (int k = 0; k <= mesh.nz(); ++k)
    for (std::size_t p = 0; p < mesh.plane_nodes(); ++p) {
      const auto n = mesh.node(p, k);
      f.u3[n] = g.u3bar[k];
      f.alpha[n] = g.alphabar[k];
    }
  return f;
}

/// Adds the laterally relaxed transverse displacement u1 = -nu x s(z),
/// u2 = -nu y s(z) for a nodal axial-strain profile s.
inline void set_transverse_from_axial_strain(Field3D &f, const CylinderMesh &mesh,
                                             std::span<const double> axial, double nu) {
  if (axial.size() != std::size_t(mesh.nz() + 1))
    throw ParameterError("axial strain profile does not match the mesh levels");
  for (int k = 0; k <= mesh.nz(); ++k)
    for (std::size_t p = 0; p < mesh.plane_nodes(); ++p) {
      const auto n = mesh.node(p, k);
      const auto &xy = mesh.plane_xy(p);
      f.u1[n] = -nu * xy[0] * axial[k];
      f.u2[n] = -nu * xy[1] * axial[k];
    }
}

/// Nodal values of the derivative of a piecewise-linear profile: averages of
/// the two adjacent element slopes, one-sided at the ends.
inline std::vector<double> nodal_slope(const std::vector<double> &profile) {
  const std::size_t n = profile.size();
  const double h = 1.0 / double(n - 1);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? (profile[i] - profile[i - 1]) / h : 0.0;
    const double right = i + 1 < n ? (profile[i + 1] - profile[i]) / h : 0.0;
    out[i] = (i == 0) ? right : (i + 1 == n) ? left : 0.5 * (left + right);
  }
  return out;
}

/// The undamaged minimizer u = (nu eps x, nu eps y, -eps z), alpha = 0.
inline Field3D u_test(const CylinderMesh &mesh, double nu, double eps_z, double delta) {
  Field3D f(mesh.num_nodes(), delta);
  for (std::size_t n = 0; n < mesh.num_nodes(); ++n) {
    const auto x = mesh.node_xyz(n);
    f.u1[n] = nu * eps_z * x[0];
    f.u2[n] = nu * eps_z * x[1];
    f.u3[n] = -eps_z * x[2];
  }
  apply_dirichlet(f, mesh, eps_z);
  return f;
}

/// Squared L2 distances of a 3D field to the uniaxial structure generated by
/// a z-only reference pair (u3hat, alphahat). Raw integrals over Omega_h.
struct DiagnosticsRecord {
  double u3_l2 = 0.0;          // |u3 - u3hat|^2
  double axial_strain = 0.0;   // |d_z u3 - u3hat'|^2
  double lateral_x = 0.0;      // |d_x u1 + nu u3hat'|^2
  double lateral_y = 0.0;      // |d_y u2 + nu u3hat'|^2
  double shear = 0.0;          // in-plane and delta-scaled axial shears
  double alpha_transverse = 0.0; // |d_x alpha|^2 + |d_y alpha|^2
  double alpha_axial = 0.0;    // |d_z alpha - alphahat'|^2
};

inline DiagnosticsRecord theorem2_diagnostics(const Field3D &f, const CylinderMesh &mesh,
                                              const Field1D &ref, double nu) {
  if (ref.size() != std::size_t(mesh.nz() + 1))
    throw ParameterError("theorem2_diagnostics: 1D reference and 3D mesh differ in nz");
  const auto &quad = mesh.quadrature();
  const double hz = mesh.hz(), d = f.delta, di = 1.0 / f.delta;
  DiagnosticsRecord r;
  for (int layer = 0; layer < mesh.nz(); ++layer) {
    const double slope = (ref.u3bar[layer + 1] - ref.u3bar[layer]) / hz;
    const double aslope = (ref.alphabar[layer + 1] - ref.alphabar[layer]) / hz;
    for (std::size_t c = 0; c < mesh.plane_cells(); ++c) {
      const auto ids = mesh.cell_nodes(c, layer);
      for (int q = 0; q < 8; ++q) {
        const auto s = point_state(f, quad, ids, q);
        const auto &G = s.grad;
        const double t = quad.local[q][2];
        const double uhat = (1.0 - t) * ref.u3bar[layer] + t * ref.u3bar[layer + 1];
        double u3 = 0.0;
        for (int n = 0; n < 8; ++n)
          u3 += quad.N[q][n] * f.u3[ids[n]];
        const double w = quad.weight;
        const double g12 = G[0][1] + G[1][0];
        const double g13 = d * G[0][2] + di * G[2][0];
        const double g23 = d * G[1][2] + di * G[2][1];
        r.u3_l2 += w * (u3 - uhat) * (u3 - uhat);
        r.axial_strain += w * (G[2][2] - slope) * (G[2][2] - slope);
        r.lateral_x += w * (G[0][0] + nu * slope) * (G[0][0] + nu * slope);
        r.lateral_y += w * (G[1][1] + nu * slope) * (G[1][1] + nu * slope);
        r.shear += w * (g12 * g12 + g13 * g13 + g23 * g23);
        r.alpha_transverse += w * (s.dalpha[0] * s.dalpha[0] + s.dalpha[1] * s.dalpha[1]);
        r.alpha_axial += w * (s.dalpha[2] - aslope) * (s.dalpha[2] - aslope);
      }
    }
  }
  return r;
}

} // namespace rodlimit
