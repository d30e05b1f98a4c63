// solver.hpp
//
// Alternate minimization of the discrete 3D and 1D energies: an exact
// elastic solve at frozen damage, then a box-constrained damage solve at
// frozen displacement, repeated until both the damage update and the relative
// energy decrease are small.
//
// The 3D elastic form only sees u3 Dirichlet data, so transverse rigid
// motions (u1, u2 translations and the in-plane rotation) are in its kernel.
// They are gauge-fixed: CG runs on the orthogonal complement of the kernel and
// the displacement is projected so those three modes have zero component.

#pragma once

#include "cg.hpp"
#include "energy.hpp"
#include "fields.hpp"
#include "material.hpp"
#include "mesh.hpp"
#include "spg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace rodlimit {

struct SolverConfig {
  int outer_max_iters = 200;
  double outer_tol_alpha = 1e-4;
  double outer_tol_energy = 1e-10;
  double cg_tol = 1e-10;
  int cg_max_iters = 20000;
  double pgd_tol = 1e-9;
  int pgd_max_iters = 20000;
  unsigned long long seed = 0;
  int multistart = 0;             // extra seeded damage starts per damage solve
  double init_perturbation = 0.0; // amplitude of seeded initial damage noise

  std::vector<std::string> validation_errors() const {
    std::vector<std::string> e;
    if (outer_max_iters < 1)
      e.emplace_back("solver.outer_max_iters must be >= 1");
    if (!(outer_tol_alpha > 0.0))
      e.emplace_back("solver.outer_tol_alpha must be > 0");
    if (!(outer_tol_energy > 0.0))
      e.emplace_back("solver.outer_tol_energy must be > 0");
    if (!(cg_tol > 0.0))
      e.emplace_back("solver.cg_tol must be > 0");
    if (cg_max_iters < 1)
      e.emplace_back("solver.cg_max_iters must be >= 1");
    if (!(pgd_tol > 0.0))
      e.emplace_back("solver.pgd_tol must be > 0");
    if (pgd_max_iters < 1)
      e.emplace_back("solver.pgd_max_iters must be >= 1");
    if (multistart < 0)
      e.emplace_back("solver.multistart must be >= 0");
    if (!(init_perturbation >= 0.0 && init_perturbation <= 1.0))
      e.emplace_back("solver.init_perturbation must lie in [0,1]");
    return e;
  }
};

struct InnerStatus {
  int iterations = 0;
  double residual = 0.0;
  bool converged = true;
};

struct SolveReport {
  int iterations = 0;
  bool converged = false;
  EnergyBreakdown energy;
  std::vector<double> energy_trace; // entry 0 is the initial energy
  std::vector<double> alpha_update; // |delta alpha|_inf per outer iteration
  double u_residual = 0.0;
  double alpha_stationarity = 0.0;
  int cg_iterations = 0;
  int pgd_iterations = 0;
  bool inner_failure = false;
  double wall_seconds = 0.0;
};

// ---------------------------------------------------------------------------
// 3D elastic operator at frozen damage

/// Matrix-free stiffness of the undamaged-form weighted by a(alpha) at each
/// quadrature point. Vectors are flat [u1 | u2 | u3]; Dirichlet u3 rows and
/// columns are removed (treated as zero in, zero out).
class ElasticOperator {
public:
  ElasticOperator(const MaterialParams &p, const ConstitutiveLaw &law,
                  const CylinderMesh &mesh, const Field3D &f)
      : mesh_(mesh), lambda_(p.lambda), mu_(p.mu), delta_(f.delta),
        scale_(mesh.quadrature().weight / mesh.measure()) {
    const auto &quad = mesh.quadrature();
    stiffness_.resize(mesh.num_cells() * 8);
    for (int layer = 0; layer < mesh.nz(); ++layer)
      for (std::size_t c = 0; c < mesh.plane_cells(); ++c) {
        const auto ids = mesh.cell_nodes(c, layer);
        const std::size_t base = (layer * mesh.plane_cells() + c) * 8;
        for (int q = 0; q < 8; ++q) {
          double a = 0.0;
          for (int n = 0; n < 8; ++n)
            a += quad.N[q][n] * f.alpha[ids[n]];
          stiffness_[base + q] = law.a(a) * scale_;
        }
      }
    fixed_.assign(3 * mesh.num_nodes(), 0);
    const std::size_t off = 2 * mesh.num_nodes();
    for (std::size_t pn = 0; pn < mesh.plane_nodes(); ++pn) {
      fixed_[off + mesh.node(pn, 0)] = 1;
      fixed_[off + mesh.node(pn, mesh.nz())] = 1;
    }
  }

  std::size_t size() const { return 3 * mesh_.num_nodes(); }
  bool fixed(std::size_t i) const { return fixed_[i] != 0; }

  /// out = K in, including Dirichlet columns (used to form the load).
  void apply_full(std::span<const double> in, std::span<double> out) const {
    const auto &quad = mesh_.quadrature();
    const std::size_t nn = mesh_.num_nodes();
    std::fill(out.begin(), out.end(), 0.0);
    for (int layer = 0; layer < mesh_.nz(); ++layer)
      for (std::size_t c = 0; c < mesh_.plane_cells(); ++c) {
        const auto ids = mesh_.cell_nodes(c, layer);
        const std::size_t base = (layer * mesh_.plane_cells() + c) * 8;
        double u[3][8];
        for (int n = 0; n < 8; ++n)
          for (int k = 0; k < 3; ++k)
            u[k][n] = in[k * nn + ids[n]];
        double acc[3][8] = {};
        for (int q = 0; q < 8; ++q) {
          Grad3 G{};
          for (int n = 0; n < 8; ++n) {
            const auto &dn = quad.dN[q][n];
            for (int k = 0; k < 3; ++k) {
              G[k][0] += u[k][n] * dn[0];
              G[k][1] += u[k][n] * dn[1];
              G[k][2] += u[k][n] * dn[2];
            }
          }
          const auto S = elastic_stress(G, lambda_, mu_, delta_);
          const double a = stiffness_[base + q];
          for (int n = 0; n < 8; ++n) {
            const auto &dn = quad.dN[q][n];
            for (int k = 0; k < 3; ++k)
              acc[k][n] += a * (S[k][0] * dn[0] + S[k][1] * dn[1] + S[k][2] * dn[2]);
          }
        }
        for (int n = 0; n < 8; ++n)
          for (int k = 0; k < 3; ++k)
            out[k * nn + ids[n]] += acc[k][n];
      }
  }

  void apply(std::span<const double> in, std::span<double> out) const {
    scratch_.assign(in.begin(), in.end());
    for (std::size_t i = 0; i < scratch_.size(); ++i)
      if (fixed_[i])
        scratch_[i] = 0.0;
    apply_full(scratch_, out);
    for (std::size_t i = 0; i < out.size(); ++i)
      if (fixed_[i])
        out[i] = 0.0;
  }

  /// Diagonal of K on free rows (1 on Dirichlet rows).
  std::vector<double> diagonal() const {
    const auto &quad = mesh_.quadrature();
    const std::size_t nn = mesh_.num_nodes();
    std::vector<double> diag(size(), 0.0);
    for (int layer = 0; layer < mesh_.nz(); ++layer)
      for (std::size_t c = 0; c < mesh_.plane_cells(); ++c) {
        const auto ids = mesh_.cell_nodes(c, layer);
        const std::size_t base = (layer * mesh_.plane_cells() + c) * 8;
        for (int q = 0; q < 8; ++q) {
          const double a = stiffness_[base + q];
          for (int n = 0; n < 8; ++n) {
            for (int k = 0; k < 3; ++k) {
              Grad3 G{};
              G[k] = quad.dN[q][n];
              const auto S = elastic_stress(G, lambda_, mu_, delta_);
              const auto &dn = quad.dN[q][n];
              diag[k * nn + ids[n]] += a * (S[k][0] * dn[0] + S[k][1] * dn[1] + S[k][2] * dn[2]);
            }
          }
        }
      }
    for (std::size_t i = 0; i < diag.size(); ++i)
      if (fixed_[i] || !(diag[i] > 0.0))
        diag[i] = 1.0;
    return diag;
  }

private:
  const CylinderMesh &mesh_;
  double lambda_, mu_, delta_, scale_;
  std::vector<double> stiffness_;
  std::vector<char> fixed_;
  mutable std::vector<double> scratch_;
};

/// Orthonormal basis of the transverse rigid motions (u1 = 1, u2 = 1 and
/// the in-plane rotation (-y, x)) in the flat [u1 | u2 | u3] layout.
class RigidModeProjector {
public:
  explicit RigidModeProjector(const CylinderMesh &mesh) {
    const std::size_t nn = mesh.num_nodes();
    for (int m = 0; m < 3; ++m) {
      std::vector<double> v(3 * nn, 0.0);
      for (std::size_t n = 0; n < nn; ++n) {
        const auto x = mesh.node_xyz(n);
        if (m == 0)
          v[n] = 1.0;
        else if (m == 1)
          v[nn + n] = 1.0;
        else {
          v[n] = -x[1];
          v[nn + n] = x[0];
        }
      }
      for (const auto &b : basis_) {
        const double c = dot(v, b);
        for (std::size_t i = 0; i < v.size(); ++i)
          v[i] -= c * b[i];
      }
      const double nv = norm2(v);
      for (double &x : v)
        x /= nv;
      basis_.push_back(std::move(v));
    }
  }

  void operator()(std::span<double> v) const {
    for (const auto &b : basis_) {
      const double c = dot(v, b);
      for (std::size_t i = 0; i < v.size(); ++i)
        v[i] -= c * b[i];
    }
  }

private:
  std::vector<std::vector<double>> basis_;
};

/// Minimizes the elastic energy over u at frozen damage (exact up to cg_tol).
inline InnerStatus solve_u(const MaterialParams &p, const ConstitutiveLaw &law,
                           const CylinderMesh &mesh, Field3D &f, const SolverConfig &cfg) {
  apply_dirichlet(f, mesh, p.eps_z);
  const ElasticOperator op(p, law, mesh, f);
  const RigidModeProjector gauge(mesh);
  const std::size_t nn = mesh.num_nodes();

  std::vector<double> u(3 * nn);
  std::copy(f.u1.begin(), f.u1.end(), u.begin());
  std::copy(f.u2.begin(), f.u2.end(), u.begin() + nn);
  std::copy(f.u3.begin(), f.u3.end(), u.begin() + 2 * nn);

  // Right-hand side: minus the gradient at the current iterate.
  std::vector<double> rhs(u.size());
  op.apply_full(u, rhs);
  for (std::size_t i = 0; i < rhs.size(); ++i)
    rhs[i] = op.fixed(i) ? 0.0 : -rhs[i];
  gauge(rhs);

  const auto diag = op.diagonal();
  auto jacobi = [&](std::span<const double> in, std::span<double> out) {
    for (std::size_t i = 0; i < in.size(); ++i)
      out[i] = in[i] / diag[i];
  };
  auto apply = [&](std::span<const double> in, std::span<double> out) { op.apply(in, out); };

  std::vector<double> du(u.size(), 0.0);
  const auto cg = conjugate_gradient(apply, jacobi, std::span<const double>(rhs),
                                     std::span<double>(du), cfg.cg_tol, 1e-300,
                                     cfg.cg_max_iters, gauge);
  for (std::size_t i = 0; i < u.size(); ++i)
    if (!op.fixed(i))
      u[i] += du[i];
  // Gauge: the rigid modes have no u3 entries, so projecting u only
  // touches (u1, u2).
  gauge(u);
  std::copy(u.begin(), u.begin() + nn, f.u1.begin());
  std::copy(u.begin() + nn, u.begin() + 2 * nn, f.u2.begin());
  std::copy(u.begin() + 2 * nn, u.end(), f.u3.begin());
  apply_dirichlet(f, mesh, p.eps_z);
  return {cg.iterations, cg.final_residual, cg.converged};
}

namespace detail {

/// Damage-only objective of the 3D energy at frozen displacement.
class DamageObjective3D {
public:
  DamageObjective3D(const MaterialParams &p, const ConstitutiveLaw &law,
                    const CylinderMesh &mesh, const Field3D &f)
      : law_(law), mesh_(mesh), kgrad_(p.w1 * p.length_ratio_sq()),
        di2_(1.0 / (f.delta * f.delta)), scale_(mesh.quadrature().weight / mesh.measure()) {
    const auto &quad = mesh.quadrature();
    psi_.resize(mesh.num_cells() * 8);
    for (int layer = 0; layer < mesh.nz(); ++layer)
      for (std::size_t c = 0; c < mesh.plane_cells(); ++c) {
        const auto ids = mesh.cell_nodes(c, layer);
        const std::size_t base = (layer * mesh.plane_cells() + c) * 8;
        for (int q = 0; q < 8; ++q)
          psi_[base + q] =
              elastic_parts(point_state(f, quad, ids, q).grad, p.lambda, p.mu, f.delta).sum();
      }
    mass_.assign(mesh.num_nodes(), 0.0);
    for (int layer = 0; layer < mesh.nz(); ++layer)
      for (std::size_t c = 0; c < mesh.plane_cells(); ++c) {
        const auto ids = mesh.cell_nodes(c, layer);
        for (int q = 0; q < 8; ++q)
          for (int n = 0; n < 8; ++n)
            mass_[ids[n]] += scale_ * quad.N[q][n];
      }
  }

  const std::vector<double> &metric() const { return mass_; }

  double operator()(std::span<const double> alpha, std::span<double> grad) const {
    const auto &quad = mesh_.quadrature();
    std::fill(grad.begin(), grad.end(), 0.0);
    double e = 0.0;
    for (int layer = 0; layer < mesh_.nz(); ++layer)
      for (std::size_t c = 0; c < mesh_.plane_cells(); ++c) {
        const auto ids = mesh_.cell_nodes(c, layer);
        const std::size_t base = (layer * mesh_.plane_cells() + c) * 8;
        double av[8];
        for (int n = 0; n < 8; ++n)
          av[n] = alpha[ids[n]];
        for (int q = 0; q < 8; ++q) {
          double a = 0.0, dx = 0.0, dy = 0.0, dz = 0.0;
          for (int n = 0; n < 8; ++n) {
            a += quad.N[q][n] * av[n];
            dx += quad.dN[q][n][0] * av[n];
            dy += quad.dN[q][n][1] * av[n];
            dz += quad.dN[q][n][2] * av[n];
          }
          const double psi = psi_[base + q];
          e += scale_ * (law_.a(a) * psi + law_.w(a) +
                         0.5 * kgrad_ * (di2_ * (dx * dx + dy * dy) + dz * dz));
          const double local = scale_ * (law_.da(a) * psi + law_.dw(a));
          const double gx = scale_ * kgrad_ * di2_ * dx, gy = scale_ * kgrad_ * di2_ * dy,
                       gz = scale_ * kgrad_ * dz;
          for (int n = 0; n < 8; ++n) {
            const auto &dn = quad.dN[q][n];
            grad[ids[n]] += quad.N[q][n] * local + gx * dn[0] + gy * dn[1] + gz * dn[2];
          }
        }
      }
    return e;
  }

private:
  const ConstitutiveLaw &law_;
  const CylinderMesh &mesh_;
  double kgrad_, di2_, scale_;
  std::vector<double> psi_, mass_;
};

class DamageObjective1D {
public:
  DamageObjective1D(const MaterialParams &p, const ConstitutiveLaw &law,
                    const IntervalMesh &mesh, const Field1D &g)
      : law_(law), mesh_(mesh), kgrad_(p.w1 * p.length_ratio_sq()) {
    const double E = derived_moduli(p).E;
    psi_.resize(mesh.nz());
    for (int el = 0; el < mesh.nz(); ++el) {
      const double du = (g.u3bar[el + 1] - g.u3bar[el]) / mesh.h();
      psi_[el] = 0.5 * E * du * du;
    }
    mass_.assign(mesh.num_nodes(), mesh.h());
    mass_.front() = mass_.back() = 0.5 * mesh.h();
  }

  const std::vector<double> &metric() const { return mass_; }

  double operator()(std::span<const double> alpha, std::span<double> grad) const {
    std::fill(grad.begin(), grad.end(), 0.0);
    const double h = mesh_.h(), w = mesh_.gauss_weight();
    double e = 0.0;
    for (int el = 0; el < mesh_.nz(); ++el) {
      const double da = (alpha[el + 1] - alpha[el]) / h;
      for (double t : IntervalMesh::gauss_local()) {
        const double a = (1.0 - t) * alpha[el] + t * alpha[el + 1];
        e += w * (law_.a(a) * psi_[el] + law_.w(a));
        const double local = w * (law_.da(a) * psi_[el] + law_.dw(a));
        grad[el] += (1.0 - t) * local;
        grad[el + 1] += t * local;
      }
      e += h * 0.5 * kgrad_ * da * da;
      grad[el] -= kgrad_ * da;
      grad[el + 1] += kgrad_ * da;
    }
    return e;
  }

private:
  const ConstitutiveLaw &law_;
  const IntervalMesh &mesh_;
  double kgrad_;
  std::vector<double> psi_, mass_;
};

template <class Objective>
InnerStatus minimize_damage(const Objective &obj, std::vector<double> &alpha,
                            const SolverConfig &cfg, std::mt19937_64 &rng) {
  SpgOptions opt;
  opt.tol = cfg.pgd_tol;
  opt.max_iters = cfg.pgd_max_iters;
  auto res = spectral_projected_gradient(obj, std::span<double>(alpha),
                                         std::span<const double>(obj.metric()), opt);
  InnerStatus st{res.iterations, res.stationarity, res.converged};
  if (cfg.multistart > 0) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int s = 0; s < cfg.multistart; ++s) {
      std::vector<double> trial(alpha.size());
      for (double &a : trial)
        a = unif(rng);
      auto r = spectral_projected_gradient(obj, std::span<double>(trial),
                                           std::span<const double>(obj.metric()), opt);
      st.iterations += r.iterations;
      if (r.converged && r.value < res.value) {
        res = r;
        alpha = std::move(trial);
        st.residual = r.stationarity;
      }
    }
  }
  return st;
}

} // namespace detail

/// Minimizes the 3D energy over alpha in [0,1] at frozen displacement.
inline InnerStatus solve_alpha(const MaterialParams &p, const ConstitutiveLaw &law,
                               const CylinderMesh &mesh, Field3D &f, const SolverConfig &cfg) {
  const detail::DamageObjective3D obj(p, law, mesh, f);
  std::mt19937_64 rng(cfg.seed);
  return detail::minimize_damage(obj, f.alpha, cfg, rng);
}

/// Exact elastic solve of the 1D problem (tridiagonal, direct).
inline InnerStatus solve_u(const MaterialParams &p, const ConstitutiveLaw &law,
                           const IntervalMesh &mesh, Field1D &g, const SolverConfig &) {
  apply_dirichlet(g, p.eps_z);
  const double E = derived_moduli(p).E;
  const int ne = mesh.nz();
  std::vector<double> k(ne);
  for (int el = 0; el < ne; ++el) {
    double abar = 0.0;
    for (double t : IntervalMesh::gauss_local())
      abar += 0.5 * law.a((1.0 - t) * g.alphabar[el] + t * g.alphabar[el + 1]);
    k[el] = abar * E / mesh.h();
  }
  // Unknowns are nodes 1..ne-1; Thomas algorithm on the SPD tridiagonal system.
  const int m = ne - 1;
  std::vector<double> diag(m), off(m), rhs(m);
  for (int i = 0; i < m; ++i) {
    diag[i] = k[i] + k[i + 1];
    off[i] = -k[i + 1];
    rhs[i] = 0.0;
  }
  rhs[m - 1] += k[ne - 1] * g.u3bar[ne];
  for (int i = 1; i < m; ++i) {
    const double factor = off[i - 1] / diag[i - 1];
    diag[i] -= factor * off[i - 1];
    rhs[i] -= factor * rhs[i - 1];
  }
  std::vector<double> sol(m);
  sol[m - 1] = rhs[m - 1] / diag[m - 1];
  for (int i = m - 2; i >= 0; --i)
    sol[i] = (rhs[i] - off[i] * sol[i + 1]) / diag[i];
  for (int i = 0; i < m; ++i)
    g.u3bar[i + 1] = sol[i];
  return {1, 0.0, true};
}

inline InnerStatus solve_alpha(const MaterialParams &p, const ConstitutiveLaw &law,
                               const IntervalMesh &mesh, Field1D &g, const SolverConfig &cfg) {
  const detail::DamageObjective1D obj(p, law, mesh, g);
  std::mt19937_64 rng(cfg.seed);
  return detail::minimize_damage(obj, g.alphabar, cfg, rng);
}

namespace detail {
inline std::vector<double> &damage_of(Field3D &f) { return f.alpha; }
inline std::vector<double> &damage_of(Field1D &g) { return g.alphabar; }
inline bool admissible(const Field3D &f, const CylinderMesh &m, double eps) {
  return is_admissible(f, m, eps, 1e-9);
}
inline bool admissible(const Field1D &g, const IntervalMesh &m, double eps) {
  return g.size() == m.num_nodes() && is_admissible(g, eps, 1e-9);
}
inline EnergyBreakdown energy_of(const MaterialParams &p, const ConstitutiveLaw &law,
                                 const CylinderMesh &m, const Field3D &f) {
  return energy_3d(p, law, m, f);
}
inline EnergyBreakdown energy_of(const MaterialParams &p, const ConstitutiveLaw &law,
                                 const IntervalMesh &m, const Field1D &g) {
  return energy_1d(p, law, m, g);
}
} // namespace detail

/// Alternate minimization from an admissible initial field. Returns a
/// critical point (not certified global); on hitting the iteration cap the
/// best iterate is returned with converged = false.
template <class Mesh, class Field>
SolveReport alternate_minimize(const MaterialParams &p, const ConstitutiveLaw &law,
                               const Mesh &mesh, Field &field, const SolverConfig &cfg) {
  validate(p);
  if (!detail::admissible(field, mesh, p.eps_z))
    throw ParameterError("alternate_minimize: initial field is not admissible");
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport rep;
  double e_prev = detail::energy_of(p, law, mesh, field).total;
  rep.energy_trace.push_back(e_prev);
  Field best = field;
  double e_best = e_prev;

  for (int it = 1; it <= cfg.outer_max_iters; ++it) {
    const std::vector<double> alpha_old = detail::damage_of(field);
    const auto su = solve_u(p, law, mesh, field, cfg);
    const auto sa = solve_alpha(p, law, mesh, field, cfg);
    rep.cg_iterations += su.iterations;
    rep.pgd_iterations += sa.iterations;
    rep.u_residual = su.residual;
    rep.alpha_stationarity = sa.residual;
    rep.inner_failure = rep.inner_failure || !su.converged || !sa.converged;

    double dalpha = 0.0;
    const auto &alpha = detail::damage_of(field);
    for (std::size_t i = 0; i < alpha.size(); ++i)
      dalpha = std::max(dalpha, std::abs(alpha[i] - alpha_old[i]));
    const double e = detail::energy_of(p, law, mesh, field).total;
    rep.energy_trace.push_back(e);
    rep.alpha_update.push_back(dalpha);
    rep.iterations = it;
    if (e < e_best) {
      e_best = e;
      best = field;
    }
    const double rel = (e_prev - e) / std::max(std::abs(e_prev), 1e-300);
    e_prev = e;
    if (dalpha < cfg.outer_tol_alpha && rel < cfg.outer_tol_energy) {
      rep.converged = !rep.inner_failure || (su.converged && sa.converged);
      break;
    }
  }
  if (!rep.converged && e_best < e_prev)
    field = best;
  rep.energy = detail::energy_of(p, law, mesh, field);
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

/// Default 3D start: the undamaged minimizer u_test with alpha = 0, plus
/// optional seeded damage noise.
inline Field3D default_init_3d(const MaterialParams &p, const CylinderMesh &mesh, double delta,
                               const SolverConfig &cfg) {
  Field3D f = u_test(mesh, derived_moduli(p).nu, p.eps_z, delta);
  if (cfg.init_perturbation > 0.0) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(0.0, cfg.init_perturbation);
    for (double &a : f.alpha)
      a = unif(rng);
  }
  return f;
}

/// Default 1D start: affine displacement, alpha = 0 plus optional seeded noise.
inline Field1D default_init_1d(const MaterialParams &p, const IntervalMesh &mesh,
                               const SolverConfig &cfg) {
  Field1D g(mesh.num_nodes());
  for (std::size_t i = 0; i < g.size(); ++i)
    g.u3bar[i] = -p.eps_z * mesh.nodes()[i];
  apply_dirichlet(g, p.eps_z);
  if (cfg.init_perturbation > 0.0) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(0.0, cfg.init_perturbation);
    for (double &a : g.alphabar)
      a = unif(rng);
  }
  return g;
}

} // namespace rodlimit
