// material.hpp
//
// Isotropic material parameters of the rod and the scalar constitutive
// functions of the gradient damage model: the stiffness degradation a(alpha)
// and the local damage energy w(alpha).

#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <stdexcept>
#include <string>
#include <vector>

namespace rodlimit {

/// Thrown whenever user-supplied parameters violate a documented constraint.
class ParameterError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

struct MaterialParams {
  double lambda = 1.0; // first Lame parameter
  double mu = 1.0;     // shear modulus
  double eta = 0.01;   // residual stiffness fraction
  double w1 = 1.0;     // w(1)
  double ell = 0.1;    // internal length
  double bigL = 1.0;   // rod length
  double eps_z = 0.0;  // imposed axial (compressive) strain

  /// Squared ratio of internal length to rod length, (ell/L)^2.
  double length_ratio_sq() const { return (ell / bigL) * (ell / bigL); }
};

/// Returns every violated constraint; empty when the parameters are valid.
inline std::vector<std::string> validation_errors(const MaterialParams &p) {
  std::vector<std::string> errs;
  if (!(p.mu > 0.0))
    errs.emplace_back("mu must be > 0");
  if (!(p.lambda + p.mu > 0.0))
    errs.emplace_back("lambda + mu must be > 0");
  if (!(3.0 * p.lambda + 2.0 * p.mu > 0.0)) // E > 0: positive-definite elastic energy
    errs.emplace_back("3 lambda + 2 mu must be > 0");
  if (!(p.eta > 0.0 && p.eta < 1.0))
    errs.emplace_back("eta must lie in (0,1)");
  if (!(p.w1 > 0.0))
    errs.emplace_back("w1 must be > 0");
  if (!(p.ell > 0.0))
    errs.emplace_back("ell must be > 0");
  if (!(p.bigL > 0.0))
    errs.emplace_back("L must be > 0");
  if (!std::isfinite(p.eps_z))
    errs.emplace_back("eps_z must be finite");
  return errs;
}

inline void validate(const MaterialParams &p) {
  auto errs = validation_errors(p);
  if (errs.empty())
    return;
  std::string msg = "invalid material parameters:";
  for (auto &e : errs)
    msg += " " + e + ";";
  throw ParameterError(msg);
}

struct ElasticModuli {
  double E;
  double nu;
};

/// Young's modulus and Poisson's ratio of the isotropic material.
inline ElasticModuli derived_moduli(const MaterialParams &p) {
  if (!(p.mu > 0.0) || !(p.lambda + p.mu > 0.0))
    throw ParameterError("derived_moduli: requires mu > 0 and lambda + mu > 0");
  const double E = p.mu * (3.0 * p.lambda + 2.0 * p.mu) / (p.lambda + p.mu);
  const double nu = p.lambda / (2.0 * (p.lambda + p.mu));
  return {E, nu};
}

/// Relative residual of mu(2nu^2+1) + lambda/2 (2nu-1)^2 = E/2, the identity
/// that makes the laterally relaxed uniaxial state cost exactly (E/2) eps^2.
inline double verify_uniaxial_identity(const MaterialParams &p) {
  const auto [E, nu] = derived_moduli(p);
  const double lhs = p.mu * (2.0 * nu * nu + 1.0) +
                     0.5 * p.lambda * (2.0 * nu - 1.0) * (2.0 * nu - 1.0);
  return std::abs(lhs - 0.5 * E) / (0.5 * E);
}

enum class DegradationKind { QuadraticAT, Tabulated };
enum class DamageEnergyKind { AT1, AT2, Tabulated };

/// Monotone piecewise-cubic Hermite (Fritsch-Carlson PCHIP) interpolant of
/// values sampled on a uniform grid over [0,1].
class TabulatedCurve {
public:
  TabulatedCurve() = default;

  explicit TabulatedCurve(std::vector<double> values) : values_(std::move(values)) {
    const std::size_t n = values_.size();
    if (n < 3)
      throw ParameterError("tabulated law needs at least 3 samples");
    h_ = 1.0 / double(n - 1);
    std::vector<double> secant(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
      secant[i] = (values_[i + 1] - values_[i]) / h_;
    slopes_.assign(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double a = secant[i - 1], b = secant[i];
      // harmonic mean for equal spacing; zero at local extrema
      slopes_[i] = (a * b > 0.0) ? 2.0 * a * b / (a + b) : 0.0;
    }
    slopes_[0] = end_slope(secant[0], secant[1]);
    slopes_[n - 1] = end_slope(secant[n - 2], secant[n - 3]);
  }

  double operator()(double x) const {
    const auto [i, t] = locate(x);
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * values_[i] + (t3 - 2 * t2 + t) * h_ * slopes_[i] +
           (-2 * t3 + 3 * t2) * values_[i + 1] + (t3 - t2) * h_ * slopes_[i + 1];
  }
  double prime(double x) const {
    const auto [i, t] = locate(x);
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * values_[i] + (-6 * t2 + 6 * t) * values_[i + 1]) / h_ +
           (3 * t2 - 4 * t + 1) * slopes_[i] + (3 * t2 - 2 * t) * slopes_[i + 1];
  }
  const std::vector<double> &samples() const { return values_; }
  bool empty() const { return values_.empty(); }

private:
  // three-point end formula, limited to keep the end interval monotone
  static double end_slope(double s0, double s1) {
    double d = 0.5 * (3.0 * s0 - s1);
    if (d * s0 <= 0.0)
      return 0.0;
    if (s0 * s1 <= 0.0 && std::abs(d) > std::abs(3.0 * s0))
      return 3.0 * s0;
    return d;
  }
  std::pair<std::size_t, double> locate(double x) const {
    const double pos = std::clamp(x, 0.0, 1.0) / h_;
    const std::size_t i = std::min(std::size_t(pos), values_.size() - 2);
    return {i, pos - double(i)};
  }

  std::vector<double> values_;
  std::vector<double> slopes_;
  double h_ = 1.0;
};

/// Degradation a(alpha) and damage energy w(alpha), with first derivatives.
/// Immutable once built; tabulated curves are checked for the endpoint and
/// monotonicity axioms at construction.
class ConstitutiveLaw {
public:
  ConstitutiveLaw() = default;

  ConstitutiveLaw(DegradationKind deg, DamageEnergyKind dmg, double eta,
                  double w1, TabulatedCurve deg_table = {},
                  TabulatedCurve dmg_table = {})
      : deg_(deg), dmg_(dmg), eta_(eta), w1_(w1), deg_table_(std::move(deg_table)),
        dmg_table_(std::move(dmg_table)) {
    if (!(eta > 0.0 && eta < 1.0))
      throw ParameterError("ConstitutiveLaw: eta must lie in (0,1)");
    if (!(w1 > 0.0))
      throw ParameterError("ConstitutiveLaw: w1 must be > 0");
    if (deg_ == DegradationKind::Tabulated)
      check_table(deg_table_, 1.0, eta_, false, "degradation");
    if (dmg_ == DamageEnergyKind::Tabulated)
      check_table(dmg_table_, 0.0, w1_, true, "damage energy");
  }

  static ConstitutiveLaw from(const MaterialParams &p,
                              DegradationKind deg = DegradationKind::QuadraticAT,
                              DamageEnergyKind dmg = DamageEnergyKind::AT2) {
    return ConstitutiveLaw(deg, dmg, p.eta, p.w1);
  }

  DegradationKind degradation_kind() const { return deg_; }
  DamageEnergyKind damage_energy_kind() const { return dmg_; }
  double eta() const { return eta_; }
  double w1() const { return w1_; }

  // Unchecked kernels, called at quadrature points.
  double a(double alpha) const {
    if (deg_ == DegradationKind::QuadraticAT) {
      const double s = 1.0 - alpha;
      return s * s * (1.0 - eta_) + eta_;
    }
    return deg_table_(std::clamp(alpha, 0.0, 1.0));
  }
  double da(double alpha) const {
    if (deg_ == DegradationKind::QuadraticAT)
      return -2.0 * (1.0 - alpha) * (1.0 - eta_);
    return deg_table_.prime(std::clamp(alpha, 0.0, 1.0));
  }
  double w(double alpha) const {
    switch (dmg_) {
    case DamageEnergyKind::AT1:
      return w1_ * alpha;
    case DamageEnergyKind::AT2:
      return w1_ * alpha * alpha;
    default:
      return dmg_table_(std::clamp(alpha, 0.0, 1.0));
    }
  }
  double dw(double alpha) const {
    switch (dmg_) {
    case DamageEnergyKind::AT1:
      return w1_;
    case DamageEnergyKind::AT2:
      return 2.0 * w1_ * alpha;
    default:
      return dmg_table_.prime(std::clamp(alpha, 0.0, 1.0));
    }
  }

private:
  static void check_table(const TabulatedCurve &t, double at0, double at1,
                          bool increasing, const char *what) {
    using namespace std::string_literals;
    if (t.empty())
      throw ParameterError("missing "s + what + " table");
    const auto &v = t.samples();
    if (std::abs(v.front() - at0) > 1e-12 || std::abs(v.back() - at1) > 1e-12)
      throw ParameterError(what + " table violates its endpoint values"s);
    for (std::size_t i = 1; i < v.size(); ++i) {
      const double d = v[i] - v[i - 1];
      if (increasing ? !(d > 0.0) : !(d < 0.0))
        throw ParameterError(what + " table is not strictly monotone"s);
    }
    // PCHIP preserves monotone data; confirm on a dense sample anyway.
    double prev = t(0.0);
    for (int i = 1; i <= 4096; ++i) {
      const double cur = t(double(i) / 4096.0);
      if (increasing ? cur < prev : cur > prev)
        throw ParameterError(what + " interpolant is not monotone"s);
      prev = cur;
    }
  }

  DegradationKind deg_ = DegradationKind::QuadraticAT;
  DamageEnergyKind dmg_ = DamageEnergyKind::AT2;
  double eta_ = 0.01;
  double w1_ = 1.0;
  TabulatedCurve deg_table_;
  TabulatedCurve dmg_table_;
};

namespace detail {
inline void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw ParameterError("damage value outside [0,1]");
}
} // namespace detail

struct ValueAndSlope {
  double value;
  double slope;
};

inline ValueAndSlope eval_degradation(const ConstitutiveLaw &law, double alpha) {
  detail::check_alpha(alpha);
  return {law.a(alpha), law.da(alpha)};
}

inline ValueAndSlope eval_damage_energy(const ConstitutiveLaw &law, double alpha) {
  detail::check_alpha(alpha);
  return {law.w(alpha), law.dw(alpha)};
}

/// Strain at which the intact state stops being stable under the AT1 law:
/// sqrt(w1 / (E (1 - eta))).
inline double at1_threshold_strain(const MaterialParams &p) {
  const auto [E, nu] = derived_moduli(p);
  (void)nu;
  return std::sqrt(p.w1 / (E * (1.0 - p.eta)));
}

} // namespace rodlimit
