// study.hpp
//
// Dimension-reduction study: minimize the 3D energy for a decreasing
// sequence of aspect ratios, minimize the 1D limit once, and measure how the
// 3D minimizers approach the uniaxial 1D state.

#pragma once

#include "energy.hpp"
#include "fields.hpp"
#include "material.hpp"
#include "mesh.hpp"
#include "solver.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>
#include <vector>

namespace rodlimit {

struct HomogeneousOracle {
  int grid_n = 0;
  double strain = 0.0;
  double alpha_star = 0.0;
  double e_star = 0.0;
};

/// Exhaustive scan of a(alpha) E/2 eps^2 + w(alpha) over alpha = i/grid_n.
inline HomogeneousOracle homogeneous_oracle(const MaterialParams &p, const ConstitutiveLaw &law,
                                            double eps, int grid_n) {
  if (grid_n < 1000)
    throw ParameterError("homogeneous_oracle: grid_n must be >= 1000");
  const double half_e_eps2 = 0.5 * derived_moduli(p).E * eps * eps;
  HomogeneousOracle o{grid_n, eps, 0.0, law.a(0.0) * half_e_eps2 + law.w(0.0)};
  for (int i = 1; i <= grid_n; ++i) {
    const double a = double(i) / grid_n;
    const double e = law.a(a) * half_e_eps2 + law.w(a);
    if (e < o.e_star) {
      o.e_star = e;
      o.alpha_star = a;
    }
  }
  return o;
}

/// Nonnegative remainder integrals of the lower-bound estimate, normalized by
/// |Omega_h|. Strains come from the 3D field; the damage weight a(alphahat)
/// uses the 1D profile.
struct Prop1Remainders {
  double deviatoric = 0.0; // a mu/2 (e11 - e22)^2
  double poisson = 0.0;    // a 2(lambda+mu) ((e11 + e22)/2 + nu e33)^2
  double variance = 0.0;   // a E/2 (e33 - slice mean of e33)^2
};

inline Prop1Remainders prop1_remainders(const MaterialParams &p, const ConstitutiveLaw &law,
                                        const CylinderMesh &mesh, const Field3D &f,
                                        const Field1D &g) {
  if (g.size() != std::size_t(mesh.nz() + 1))
    throw ParameterError("prop1_remainders: 1D profile and 3D mesh differ in nz");
  const auto [E, nu] = derived_moduli(p);
  const auto e = strain(f, mesh);
  const auto &quad = mesh.quadrature();
  const std::size_t nc = mesh.plane_cells();
  Prop1Remainders r;
  for (int layer = 0; layer < mesh.nz(); ++layer) {
    // slice means of e33 on the two quadrature levels of this layer
    double mean[2] = {0.0, 0.0};
    for (std::size_t c = 0; c < nc; ++c)
      for (int q = 0; q < 8; ++q)
        mean[q / 4] += e.e33[(layer * nc + c) * 8 + q];
    mean[0] /= double(4 * nc);
    mean[1] /= double(4 * nc);
    for (std::size_t c = 0; c < nc; ++c)
      for (int q = 0; q < 8; ++q) {
        const std::size_t i = (layer * nc + c) * 8 + q;
        const double t = quad.local[q][2];
        const double ahat = law.a((1.0 - t) * g.alphabar[layer] + t * g.alphabar[layer + 1]);
        const double w = quad.weight * ahat;
        const double dev = e.e11[i] - e.e22[i];
        const double poi = 0.5 * (e.e11[i] + e.e22[i]) + nu * e.e33[i];
        const double var = e.e33[i] - mean[q / 4];
        r.deviatoric += w * 0.5 * p.mu * dev * dev;
        r.poisson += w * 2.0 * (p.lambda + p.mu) * poi * poi;
        r.variance += w * 0.5 * E * var * var;
      }
  }
  const double inv = 1.0 / mesh.measure();
  r.deviatoric *= inv;
  r.poisson *= inv;
  r.variance *= inv;
  return r;
}

struct StudyRecord {
  double delta = 0.0;
  double e3d_min = 0.0;
  double e1d_min = 0.0;
  double gap = 0.0;
  DiagnosticsRecord diag;
  Prop1Remainders prop1;
  double u3_average_l2 = 0.0;      // |slice mean of u3 - u3hat|^2 over (0,1)
  double alpha_transverse_normalized = 0.0; // int |grad_xy alpha|^2 / |Omega_h|
  double alpha_transverse_bound = 0.0;      // 2 M delta^2 L^2 / (w1 ell^2)
  int iters = 0;
  bool converged = false;
  double wallclock = 0.0;
  Field3D field;
};

struct StudyOptions {
  int nxy = 16;
  int nz = 32;
  bool warm_start = true;
  int threads = 1;
};

struct StudySummary {
  bool gap_nonincreasing = true;      // |gap| within 5% slack
  bool residuals_nonincreasing = true; // every convergence residual within 5% slack
  bool shear_halved = false;          // shear(last) <= shear(first)/2
  bool alpha_transverse_halved = false;
  bool remainders_nonnegative = true;
  bool poisson_decreases = false;
  bool transverse_bound_holds = true;
  bool all_converged = true;
};

struct StudyResult {
  std::vector<StudyRecord> records;
  Field1D minimizer_1d;
  SolveReport report_1d;
  double energy_bound = 0.0; // M: energy of the undamaged test state
  StudySummary summary;
};

inline constexpr double kMonotoneSlack = 0.05;

namespace detail {

inline std::vector<double> diag_values(const DiagnosticsRecord &d) {
  return {d.u3_l2, d.axial_strain, d.lateral_x, d.lateral_y,
          d.shear, d.alpha_transverse, d.alpha_axial};
}

// Non-increasing within relative slack; values below `floor` count as zero.
inline bool nonincreasing(const std::vector<double> &v, double floor) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > (1.0 + kMonotoneSlack) * v[i - 1] + floor)
      return false;
  return true;
}

} // namespace detail

inline StudySummary summarize(const std::vector<StudyRecord> &recs) {
  StudySummary s;
  std::vector<const StudyRecord *> ok;
  for (const auto &r : recs) {
    s.all_converged = s.all_converged && r.converged;
    if (r.converged)
      ok.push_back(&r);
    s.remainders_nonnegative = s.remainders_nonnegative && r.prop1.deviatoric >= 0.0 &&
                               r.prop1.poisson >= 0.0 && r.prop1.variance >= 0.0;
    s.transverse_bound_holds =
        s.transverse_bound_holds && r.alpha_transverse_normalized <= r.alpha_transverse_bound;
  }
  if (ok.size() < 2)
    return s;
  std::vector<double> gaps;
  for (auto *r : ok)
    gaps.push_back(std::abs(r->gap));
  s.gap_nonincreasing = detail::nonincreasing(gaps, 1e-12);
  for (std::size_t j = 0; j < detail::diag_values(ok[0]->diag).size(); ++j) {
    std::vector<double> v;
    for (auto *r : ok)
      v.push_back(detail::diag_values(r->diag)[j]);
    s.residuals_nonincreasing = s.residuals_nonincreasing && detail::nonincreasing(v, 1e-20);
  }
  const auto &first = *ok.front(), &last = *ok.back();
  s.shear_halved = last.diag.shear <= 0.5 * first.diag.shear;
  s.alpha_transverse_halved = last.diag.alpha_transverse <= 0.5 * first.diag.alpha_transverse;
  s.poisson_decreases = last.prop1.poisson < first.prop1.poisson;
  return s;
}

inline StudyRecord study_entry(const MaterialParams &p, const ConstitutiveLaw &law,
                               const SolverConfig &cfg, const CylinderMesh &mesh,
                               const Field1D &g, double e1d, double bound_m, double delta,
                               bool warm_start) {
  const double nu = derived_moduli(p).nu;
  StudyRecord rec;
  rec.delta = delta;
  Field3D f;
  if (warm_start) {
    f = embed_1d(g, delta, mesh);
    set_transverse_from_axial_strain(f, mesh, nodal_slope(g.u3bar), nu);
  } else {
    f = default_init_3d(p, mesh, delta, cfg);
  }
  const auto rep = alternate_minimize(p, law, mesh, f, cfg);
  rec.e3d_min = rep.energy.total;
  rec.e1d_min = e1d;
  rec.gap = rec.e3d_min - rec.e1d_min;
  rec.diag = theorem2_diagnostics(f, mesh, g, nu);
  rec.prop1 = prop1_remainders(p, law, mesh, f, g);
  const auto avg = slice_average(f.u3, mesh);
  for (int k = 0; k < mesh.nz(); ++k) {
    // exact integral of the squared linear difference over one element
    const double d0 = avg[k] - g.u3bar[k], d1 = avg[k + 1] - g.u3bar[k + 1];
    rec.u3_average_l2 += mesh.hz() * (d0 * d0 + d0 * d1 + d1 * d1) / 3.0;
  }
  rec.alpha_transverse_normalized = rec.diag.alpha_transverse / mesh.measure();
  rec.alpha_transverse_bound =
      2.0 * bound_m * delta * delta * p.bigL * p.bigL / (p.w1 * p.ell * p.ell);
  rec.iters = rep.iterations;
  rec.converged = rep.converged;
  rec.wallclock = rep.wall_seconds;
  rec.field = std::move(f);
  return rec;
}

/// Runs the sweep. deltas must be strictly decreasing in (0,1].
inline StudyResult gamma_sweep(const MaterialParams &p, const ConstitutiveLaw &law,
                               const SolverConfig &cfg, const std::vector<double> &deltas,
                               const StudyOptions &opt) {
  validate(p);
  if (deltas.empty())
    throw ParameterError("gamma_sweep: study.deltas is empty");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0 && deltas[i] <= 1.0))
      throw ParameterError("gamma_sweep: study.deltas entries must lie in (0,1]");
    if (i > 0 && !(deltas[i] < deltas[i - 1]))
      throw ParameterError("gamma_sweep: study.deltas must be strictly decreasing");
  }
  const CylinderMesh mesh(opt.nxy, opt.nz);
  const IntervalMesh mesh1d(opt.nz);

  StudyResult out;
  out.minimizer_1d = default_init_1d(p, mesh1d, cfg);
  out.report_1d = alternate_minimize(p, law, mesh1d, out.minimizer_1d, cfg);
  const double e1d = out.report_1d.energy.total;
  out.energy_bound = 0.5 * derived_moduli(p).E * p.eps_z * p.eps_z;

  if (opt.threads > 1) {
    std::vector<std::future<StudyRecord>> jobs;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      jobs.push_back(std::async(std::launch::async, [&, i] {
        return study_entry(p, law, cfg, mesh, out.minimizer_1d, e1d, out.energy_bound,
                           deltas[i], opt.warm_start);
      }));
      if (int(jobs.size()) >= opt.threads)
        for (auto &j : jobs)
          if (j.valid())
            out.records.push_back(j.get());
      std::erase_if(jobs, [](auto &j) { return !j.valid(); });
    }
    for (auto &j : jobs)
      out.records.push_back(j.get());
  } else {
    for (double delta : deltas)
      out.records.push_back(study_entry(p, law, cfg, mesh, out.minimizer_1d, e1d,
                                        out.energy_bound, delta, opt.warm_start));
  }
  out.summary = summarize(out.records);
  return out;
}

} // namespace rodlimit
