// cg.hpp
//
// Preconditioned conjugate gradients for symmetric positive semi-definite
// operators given only through their action. A projector may be supplied to
// keep the residual orthogonal to a known kernel.

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace rodlimit {

struct CgResult {
  int iterations = 0;
  double initial_residual = 0.0;
  double final_residual = 0.0;
  bool converged = false;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

struct NoProjection {
  void operator()(std::span<double>) const {}
};

/// Solves A x = b starting from the given x. `apply(in, out)` computes
/// out = A in; `precond(in, out)` applies an SPD approximation of A^{-1}.
/// Stops when |r| <= rel_tol * |r0| or |r| <= abs_tol.
template <class Apply, class Precond, class Project = NoProjection>
CgResult conjugate_gradient(const Apply &apply, const Precond &precond,
                            std::span<const double> b, std::span<double> x, double rel_tol,
                            double abs_tol, int max_iters, const Project &project = {}) {
  const std::size_t n = b.size();
  std::vector<double> r(n), z(n), p(n), q(n);
  apply(std::span<const double>(x), std::span<double>(q));
  for (std::size_t i = 0; i < n; ++i)
    r[i] = b[i] - q[i];
  project(std::span<double>(r));

  CgResult res;
  res.initial_residual = norm2(r);
  res.final_residual = res.initial_residual;
  const double target = std::max(rel_tol * res.initial_residual, abs_tol);
  if (res.initial_residual <= target) {
    res.converged = true;
    return res;
  }

  precond(std::span<const double>(r), std::span<double>(z));
  p = z;
  double rz = dot(r, z);
  for (int it = 1; it <= max_iters; ++it) {
    apply(std::span<const double>(p), std::span<double>(q));
    const double pq = dot(p, q);
    if (!(pq > 0.0))
      break;
    const double step = rz / pq;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += step * p[i];
      r[i] -= step * q[i];
    }
    project(std::span<double>(r));
    res.iterations = it;
    res.final_residual = norm2(r);
    if (res.final_residual <= target) {
      res.converged = true;
      break;
    }
    precond(std::span<const double>(r), std::span<double>(z));
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i)
      p[i] = z[i] + beta * p[i];
  }
  return res;
}

} // namespace rodlimit
