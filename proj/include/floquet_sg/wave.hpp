#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "floquet_sg/elliptic.hpp"
#include "floquet_sg/errors.hpp"
#include "floquet_sg/quadrature.hpp"

namespace floquet_sg {

// Periodic traveling waves f(z) of the sine-Gordon equation solve the
// pendulum equation (c^2-1) f'' + sin f = 0 with first integral
//   (1/2)(c^2-1) f'^2 + 1 - cos f = E.
// Waves are classified by speed (c^2 < 1 subluminal, c^2 > 1 superluminal)
// and by orbit type (rotational outside the separatrix, librational inside).

enum class SpeedRegime { Subluminal, Superluminal };
enum class MotionType { Rotational, Librational };

struct WaveClass {
  SpeedRegime speed_regime;
  MotionType motion_type;

  bool operator==(const WaveClass&) const = default;
  bool librational() const { return motion_type == MotionType::Librational; }
  bool subluminal() const { return speed_regime == SpeedRegime::Subluminal; }
};

inline std::string to_string(WaveClass w) {
  std::string s = w.subluminal() ? "subluminal-" : "superluminal-";
  s += w.librational() ? "librational" : "rotational";
  return s;
}

struct WaveParams {
  double c;
  double E;
};

// Margin around the separatrix and the luminal speed; closer parameters are
// rejected because the elliptic modulus degenerates to 1.
inline constexpr double kSeparatrixMargin = 1e-9;

inline WaveClass classify(double c, double E) {
  if (std::abs(std::abs(c) - 1.0) < kSeparatrixMargin)
    throw DomainError("luminal speed excluded");
  if (std::abs(E) < kSeparatrixMargin || std::abs(E - 2.0) < kSeparatrixMargin)
    throw DomainError("separatrix");
  const bool sub = c * c < 1.0;
  if (E > 0.0 && E < 2.0)
    return {sub ? SpeedRegime::Subluminal : SpeedRegime::Superluminal,
            MotionType::Librational};
  if (sub && E < 0.0)
    return {SpeedRegime::Subluminal, MotionType::Rotational};
  if (!sub && E > 2.0)
    return {SpeedRegime::Superluminal, MotionType::Rotational};
  throw DomainError("no real wave");
}

struct ProfilePoint {
  double cos_f;
  double sin_f;
  double f_prime;
};

/// A periodic traveling wave normalized by sin(f(0)) = 0, f'(0) > 0:
/// f(0) = 0 for superluminal waves and f(0) = pi for subluminal waves, which
/// makes cos(f(z)) an even function of z.  The profile is evaluated through
/// u = sn(scale*z, k); with this normalization sin f and f' come out as
/// products of Jacobi functions, so no quadrant bookkeeping is needed.
class WaveProfile {
 public:
  WaveProfile(double c, double E)
      : params_{c, E},
        wave_class_(classify(c, E)),
        gamma_(1.0 / (c * c - 1.0)),
        modulus_(make_modulus(wave_class_, E)),
        jacobi_(modulus_) {
    const double g = gamma_;
    if (wave_class_.librational()) {
      scale_ = std::sqrt(std::abs(g));
      period_ = 4.0 * jacobi_.quarter_period() / scale_;
    } else {
      scale_ = wave_class_.subluminal() ? std::sqrt(0.5 * (-g) * (2.0 - E))
                                        : std::sqrt(0.5 * g * E);
      period_ = 2.0 * jacobi_.quarter_period() / scale_;
    }
    v0_ = wave_class_.subluminal() ? std::sqrt(2.0 * (-g) * (2.0 - E))
                                   : std::sqrt(2.0 * g * E);
    f0_ = wave_class_.subluminal() ? std::numbers::pi : 0.0;
  }

  const WaveParams& params() const { return params_; }
  double c() const { return params_.c; }
  double E() const { return params_.E; }
  WaveClass wave_class() const { return wave_class_; }
  double gamma() const { return gamma_; }
  double period() const { return period_; }       // fundamental period T of f mod 2pi
  double modulus() const { return modulus_.value; }
  double scale() const { return scale_; }         // zeta = scale * z
  double f0() const { return f0_; }
  double v0() const { return v0_; }                // f'(0) > 0
  double quarter_period_K() const { return jacobi_.quarter_period(); }

  ProfilePoint operator()(double z) const {
    const auto [sn, cn, dn] = jacobi_(scale_ * z);
    const double E = params_.E;
    if (wave_class_.librational()) {
      if (wave_class_.subluminal())
        return {-1.0 + (2.0 - E) * sn * sn,
                -std::sqrt(2.0 * (2.0 - E)) * sn * dn, v0_ * cn};
      return {1.0 - E * sn * sn, std::sqrt(2.0 * E) * sn * dn, v0_ * cn};
    }
    if (wave_class_.subluminal())
      return {-1.0 + 2.0 * sn * sn, -2.0 * sn * cn, v0_ * dn};
    return {1.0 - 2.0 * sn * sn, 2.0 * sn * cn, v0_ * dn};
  }

  double cos_f(double z) const { return (*this)(z).cos_f; }

 private:
  static EllipticModulus make_modulus(WaveClass w, double E) {
    double ksq;
    if (w.librational())
      ksq = w.subluminal() ? 0.5 * (2.0 - E) : 0.5 * E;
    else
      ksq = w.subluminal() ? 2.0 / (2.0 - E) : 2.0 / E;
    return EllipticModulus(std::sqrt(ksq));
  }

  WaveParams params_;
  WaveClass wave_class_;
  double gamma_;
  EllipticModulus modulus_;
  JacobiElliptic jacobi_;
  double scale_;
  double period_;
  double v0_;
  double f0_;
};

namespace detail {

// P(X) = 2 * int_0^1 du / (sqrt(-X(u-1)^2 - 2(u-1)) sqrt(u)); the librational
// half-orbit time integral after the substitutions w = cos f, w = X(u-1)+1.
inline double librational_p(double X, const QuadratureSpec& spec) {
  return adaptive_quadrature(
      [X](double u) {
        const double um1 = u - 1.0;
        return 2.0 / (std::sqrt(-X * um1 * um1 - 2.0 * um1) * std::sqrt(u));
      },
      0.0, 1.0, spec);
}

inline double librational_p_prime(double X, const QuadratureSpec& spec) {
  return adaptive_quadrature(
      [X](double u) {
        const double um1 = u - 1.0;
        const double w = -X * um1 * um1 - 2.0 * um1;
        return um1 * um1 / (w * std::sqrt(w) * std::sqrt(u));
      },
      0.0, 1.0, spec);
}

}  // namespace detail

/// Fundamental period by quadrature.  Librational waves use the closed-form
/// half-orbit integral (T is twice the minimal period of cos f); rotational
/// waves integrate dz/df over a full 2*pi advance of f.
inline double fundamental_period(const WaveParams& params,
                                 const QuadratureSpec& spec = {}) {
  const WaveClass w = classify(params.c, params.E);
  const double c2m1 = params.c * params.c - 1.0;
  if (w.librational()) {
    const double X = w.subluminal() ? 2.0 - params.E : params.E;
    return std::sqrt(2.0 * std::abs(c2m1)) * detail::librational_p(X, spec);
  }
  return adaptive_quadrature(
      [&](double f) {
        return std::sqrt(c2m1 / (2.0 * (params.E - 1.0 + std::cos(f))));
      },
      0.0, 2.0 * std::numbers::pi, spec);
}

/// dT/dE.  Librational waves use the closed-form derivative of the period
/// integral; rotational waves use a Richardson-extrapolated central
/// difference of fundamental_period (documented accuracy ~1e-6 relative).
inline double period_energy_derivative(const WaveParams& params,
                                       const QuadratureSpec& spec = {}) {
  const WaveClass w = classify(params.c, params.E);
  const double c2m1 = params.c * params.c - 1.0;
  if (w.librational()) {
    const double pref = std::sqrt(2.0 * std::abs(c2m1));
    if (w.subluminal())
      return -pref * detail::librational_p_prime(2.0 - params.E, spec);
    return pref * detail::librational_p_prime(params.E, spec);
  }
  const double h = std::max(1e-6, 1e-6 * std::abs(params.E));
  auto central = [&](double step) {
    const double tp = fundamental_period({params.c, params.E + step}, spec);
    const double tm = fundamental_period({params.c, params.E - step}, spec);
    return (tp - tm) / (2.0 * step);
  };
  const double d_h = central(h);
  const double d_h2 = central(0.5 * h);
  return (4.0 * d_h2 - d_h) / 3.0;
}

}  // namespace floquet_sg
