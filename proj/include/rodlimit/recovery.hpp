// recovery.hpp
//
// Recovery construction for the one-dimensional limit: from a z-only pair
// (u3bar, alphabar) and an aspect ratio delta, build the 3D field
//
//   u1 = -nu x v_k(z),  u2 = -nu y v_k(z),  u3 = u3bar(z),  alpha = alphabar(z)
//
// where v_k is u3bar' (extended by zero outside (0,1)) convolved with the
// standard bump mollifier at width 1/sqrt(k), and k = floor(delta^{-1/2}).

#pragma once

#include "energy.hpp"
#include "fields.hpp"
#include "material.hpp"
#include "mesh.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace rodlimit {

/// rho(z) = C exp(-1/(1 - z^2)) on (-1,1), normalized to unit integral.
/// The cumulative integral is tabulated once and evaluated by cubic Hermite
/// interpolation (its derivative, rho itself, is known exactly).
class Mollifier {
public:
  explicit Mollifier(int table_intervals = 4096) : n_(table_intervals) {
    cdf_.assign(n_ + 1, 0.0);
    const double h = 2.0 / n_;
    // 5-point Gauss-Legendre on each table interval
    static constexpr double gx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                     0.5384693101056831, 0.9061798459386640};
    static constexpr double gw[5] = {0.2369268850561891, 0.4786286704993665,
                                     0.5688888888888889, 0.4786286704993665,
                                     0.2369268850561891};
    for (int i = 0; i < n_; ++i) {
      const double a = -1.0 + i * h;
      double s = 0.0;
      for (int q = 0; q < 5; ++q)
        s += gw[q] * bump(a + 0.5 * h * (1.0 + gx[q]));
      cdf_[i + 1] = cdf_[i] + 0.5 * h * s;
    }
    norm_ = 1.0 / cdf_.back();
    for (double &c : cdf_)
      c *= norm_;
  }

  /// Unit-integral profile rho.
  double rho(double z) const { return norm_ * bump(z); }
  /// rho_s(z) = rho(z/s)/s.
  double rho(double z, double s) const { return rho(z / s) / s; }
  /// Integral of rho over (-inf, xi].
  double cdf(double xi) const {
    if (xi <= -1.0)
      return 0.0;
    if (xi >= 1.0)
      return 1.0;
    const double h = 2.0 / n_;
    const double pos = (xi + 1.0) / h;
    const int i = std::min(int(pos), n_ - 1);
    const double t = pos - i;
    const double x0 = -1.0 + i * h;
    const double f0 = cdf_[i], f1 = cdf_[i + 1];
    const double d0 = rho(x0) * h, d1 = rho(x0 + h) * h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * d0 + (-2 * t3 + 3 * t2) * f1 +
           (t3 - t2) * d1;
  }
  /// Normalization constant C.
  double constant() const { return norm_; }
  /// sup |rho'|, sampled densely.
  double max_abs_derivative() const {
    double m = 0.0;
    for (int i = 1; i < 200000; ++i) {
      const double z = -1.0 + 2.0 * i / 200000.0;
      const double d = std::abs(rho(z) * (-2.0 * z) / ((1.0 - z * z) * (1.0 - z * z)));
      m = std::max(m, d);
    }
    return m;
  }

private:
  static double bump(double z) {
    const double r = 1.0 - z * z;
    return r > 0.0 ? std::exp(-1.0 / r) : 0.0;
  }

  int n_;
  double norm_ = 1.0;
  std::vector<double> cdf_;
};

inline const Mollifier &standard_mollifier() {
  static const Mollifier m;
  return m;
}

/// Diagonal index k = floor(delta^{-1/2}), clamped to >= 1.
inline int recovery_index(double delta) {
  if (!(delta > 0.0))
    throw ParameterError("recovery_index: delta must be > 0");
  // guard against 1/sqrt(0.01) evaluating to 9.999...
  const double r = 1.0 / std::sqrt(delta);
  return std::max(1, int(std::floor(r * (1.0 + 1e-12))));
}

/// v_k = u3bar' * rho_{1/sqrt k}, sampled on the profile's own nodes, plus
/// norms of v_k and v_k' measured on a 4x refined grid.
struct MollifiedStrain {
  int k = 1;
  double width = 1.0;
  std::vector<double> values;   // v_k at the profile nodes
  std::vector<double> fine_z;   // refined grid
  std::vector<double> fine_v;   // v_k on the refined grid
  std::vector<double> fine_dv;  // v_k' on the refined grid
  double dv_inf = 0.0;          // sup |v_k'| on (0,1)
  double dv_l2_sq = 0.0;        // |v_k'|^2_{L2(0,1)}
  double err_l2 = 0.0;          // |v_k - u3bar'|_{L2(0,1)}
  double slope_l1 = 0.0;        // |u3bar'|_{L1(0,1)}
};

namespace detail {

struct ConvolvedSlope {
  const std::vector<double> &profile;
  double s;
  const Mollifier &m;

  double h() const { return 1.0 / double(profile.size() - 1); }
  double slope(std::size_t e) const { return (profile[e + 1] - profile[e]) / h(); }

  double value(double z) const {
    double v = 0.0;
    for (std::size_t e = 0; e + 1 < profile.size(); ++e) {
      const double t0 = e * h(), t1 = (e + 1) * h();
      if (z - t1 >= s || t0 - z >= s)
        continue;
      v += slope(e) * (m.cdf((z - t0) / s) - m.cdf((z - t1) / s));
    }
    return v;
  }
  double derivative(double z) const {
    double d = 0.0;
    for (std::size_t e = 0; e + 1 < profile.size(); ++e) {
      const double t0 = e * h(), t1 = (e + 1) * h();
      d += slope(e) * (m.rho(z - t0, s) - m.rho(z - t1, s));
    }
    return d;
  }
};

} // namespace detail

inline MollifiedStrain mollify_strain(const std::vector<double> &u3bar, int k) {
  if (k < 1)
    throw ParameterError("mollify_strain: k must be >= 1");
  if (u3bar.size() < 3)
    throw ParameterError("mollify_strain: profile needs at least 2 elements");
  const auto &moll = standard_mollifier();
  MollifiedStrain out;
  out.k = k;
  out.width = 1.0 / std::sqrt(double(k));
  const detail::ConvolvedSlope conv{u3bar, out.width, moll};

  const std::size_t nn = u3bar.size();
  out.values.resize(nn);
  for (std::size_t i = 0; i < nn; ++i)
    out.values[i] = conv.value(double(i) / double(nn - 1));

  const std::size_t ne = nn - 1, nf = 4 * ne;
  const double hf = 1.0 / double(nf);
  out.fine_z.resize(nf + 1);
  out.fine_v.resize(nf + 1);
  out.fine_dv.resize(nf + 1);
  for (std::size_t i = 0; i <= nf; ++i) {
    out.fine_z[i] = i * hf;
    out.fine_v[i] = conv.value(out.fine_z[i]);
    out.fine_dv[i] = conv.derivative(out.fine_z[i]);
    out.dv_inf = std::max(out.dv_inf, std::abs(out.fine_dv[i]));
  }
  // 3-point Gauss on each refined interval (slope u3bar' is constant there).
  static constexpr double gx[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
  static constexpr double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  for (std::size_t i = 0; i < nf; ++i) {
    const double slope = conv.slope(std::min(i / 4, ne - 1));
    for (int q = 0; q < 3; ++q) {
      const double z = (i + 0.5 * (1.0 + gx[q])) * hf;
      const double dv = conv.derivative(z);
      const double v = conv.value(z);
      out.dv_l2_sq += 0.5 * hf * gw[q] * dv * dv;
      out.err_l2 += 0.5 * hf * gw[q] * (v - slope) * (v - slope);
      out.dv_inf = std::max(out.dv_inf, std::abs(dv));
    }
  }
  out.err_l2 = std::sqrt(out.err_l2);
  for (std::size_t e = 0; e < ne; ++e)
    out.slope_l1 += std::abs(conv.slope(e)) / double(ne);
  return out;
}

/// Recovery field for aspect ratio delta; the profile must live on the
/// mesh's node levels.
inline Field3D build_recovery(const Field1D &g, double delta, const CylinderMesh &mesh,
                              double nu) {
  if (g.size() != std::size_t(mesh.nz() + 1))
    throw ParameterError("build_recovery: profile length does not match the mesh levels");
  for (double a : g.alphabar)
    if (a < 0.0 || a > 1.0)
      throw ParameterError("build_recovery: damage profile outside [0,1]");
  const auto v = mollify_strain(g.u3bar, recovery_index(delta));
  Field3D f = embed_1d(g, delta, mesh);
  set_transverse_from_axial_strain(f, mesh, v.values, nu);
  return f;
}

struct LimsupRow {
  double delta = 0.0;
  int k = 1;
  double e3d = 0.0;
  double e1d = 0.0;
  double gap = 0.0;
  double extra = 0.0;   // delta^2 |v_k'|^2_{L2}
  double err_l2 = 0.0;  // |v_k - u3bar'|_{L2}
  double dv_inf = 0.0;  // sup |v_k'|
};

inline std::vector<LimsupRow> limsup_check(const MaterialParams &p, const ConstitutiveLaw &law,
                                           const CylinderMesh &mesh3d,
                                           const IntervalMesh &mesh1d, const Field1D &g,
                                           const std::vector<double> &deltas) {
  if (mesh1d.nz() != mesh3d.nz())
    throw ParameterError("limsup_check: 1D and 3D meshes must share nz");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0 && deltas[i] <= 1.0))
      throw ParameterError("limsup_check: deltas must lie in (0,1]");
    if (i > 0 && !(deltas[i] < deltas[i - 1]))
      throw ParameterError("limsup_check: deltas must be strictly decreasing");
  }
  const double nu = derived_moduli(p).nu;
  const double e1d = energy_1d(p, law, mesh1d, g).total;
  std::vector<LimsupRow> rows;
  for (double delta : deltas) {
    LimsupRow r;
    r.delta = delta;
    r.k = recovery_index(delta);
    const auto v = mollify_strain(g.u3bar, r.k);
    Field3D f = embed_1d(g, delta, mesh3d);
    set_transverse_from_axial_strain(f, mesh3d, v.values, nu);
    r.e3d = energy_3d(p, law, mesh3d, f).total;
    r.e1d = e1d;
    r.gap = r.e3d - r.e1d;
    r.extra = delta * delta * v.dv_l2_sq;
    r.err_l2 = v.err_l2;
    r.dv_inf = v.dv_inf;
    rows.push_back(r);
  }
  return rows;
}

} // namespace rodlimit
