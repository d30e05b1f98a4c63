// spg.hpp
//
// Spectral (Barzilai-Borwein) projected gradient method for smooth
// objectives over a box, with a diagonal metric and a nonmonotone
// Armijo line search (Birgin, Martinez & Raydan).

#pragma once

#include "cg.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <span>
#include <vector>

namespace rodlimit {

struct SpgOptions {
  double tol = 1e-8;   // on |P(x - M^{-1} g) - x|_inf
  int max_iters = 5000;
  int memory = 10;     // nonmonotone window
  double armijo = 1e-4;
  double lower = 0.0;
  double upper = 1.0;
};

struct SpgResult {
  int iterations = 0;
  double value = 0.0;
  double stationarity = 0.0;
  bool converged = false;
};

/// Minimizes `objective(x, grad) -> value` over lower <= x <= upper.
/// `metric` holds positive diagonal weights; the search direction is the
/// projected step along -metric^{-1} grad.
template <class Objective>
SpgResult spectral_projected_gradient(const Objective &objective, std::span<double> x,
                                      std::span<const double> metric,
                                      const SpgOptions &opt) {
  const std::size_t n = x.size();
  auto clip = [&](double v) { return std::clamp(v, opt.lower, opt.upper); };
  for (double &v : x)
    v = clip(v);

  std::vector<double> g(n), g_new(n), x_new(n), dir(n);
  double f = objective(std::span<const double>(x), std::span<double>(g));
  std::deque<double> history{f};

  auto stationarity = [&](std::span<const double> grad) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      s = std::max(s, std::abs(clip(x[i] - grad[i] / metric[i]) - x[i]));
    return s;
  };

  SpgResult res;
  res.stationarity = stationarity(g);
  double sigma = 1.0;
  if (res.stationarity > 0.0)
    sigma = std::min(1.0, 1.0 / res.stationarity);

  for (int it = 0; it < opt.max_iters && res.stationarity > opt.tol; ++it) {
    double slope = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dir[i] = clip(x[i] - sigma * g[i] / metric[i]) - x[i];
      slope += g[i] * dir[i];
    }
    if (!(slope < 0.0))
      break;
    const double f_ref = *std::max_element(history.begin(), history.end());
    // Near the solution the decrease falls below the roundoff of f; then the
    // approximate Armijo test (Hager & Zhang), decided by the directional
    // derivative along the step, takes over.
    const double roundoff = 1e-13 * std::max(std::abs(f), 1e-300);
    double step = 1.0;
    double f_new = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 60 && !accepted; ++ls) {
      for (std::size_t i = 0; i < n; ++i)
        x_new[i] = clip(x[i] + step * dir[i]);
      f_new = objective(std::span<const double>(x_new), std::span<double>(g_new));
      if (f_new <= f_ref + opt.armijo * step * slope) {
        accepted = true;
      } else if (f_new <= f + roundoff) {
        double d_new = 0.0;
        for (std::size_t i = 0; i < n; ++i)
          d_new += g_new[i] * (x_new[i] - x[i]);
        accepted = d_new <= (2.0 * opt.armijo - 1.0) * step * slope;
      }
      if (!accepted) {
        // safeguarded quadratic backtracking
        const double denom = 2.0 * (f_new - f - step * slope);
        double trial = denom > 0.0 ? -slope * step * step / denom : 0.5 * step;
        step = std::clamp(trial, 0.1 * step, 0.5 * step);
      }
    }
    if (!accepted)
      break; // no representable decrease left along this direction
    double ss = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = x_new[i] - x[i];
      ss += metric[i] * s * s;
      sy += s * (g_new[i] - g[i]);
    }
    std::copy(x_new.begin(), x_new.end(), x.begin());
    g.swap(g_new);
    f = f_new;
    history.push_back(f);
    if (int(history.size()) > opt.memory)
      history.pop_front();
    sigma = sy > 0.0 ? std::clamp(ss / sy, 1e-12, 1e12) : 1e12;
    res.iterations = it + 1;
    res.stationarity = stationarity(g);
  }
  res.value = f;
  res.converged = res.stationarity <= opt.tol;
  return res;
}

} // namespace rodlimit
