#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "floquet_sg/errors.hpp"

namespace floquet_sg {

inline constexpr double kEps = 2.220446049250313e-16;

/// Elliptic modulus k with 0 <= k < 1.  The degenerate modulus k = 1
/// (separatrix) is rejected upstream by the wave classifier.
struct EllipticModulus {
  double value;

  explicit EllipticModulus(double k) : value(k) {
    if (!(k >= 0.0)) throw DomainError("elliptic modulus k must be >= 0");
    if (!(k < 1.0)) throw DomainError("elliptic modulus k must be < 1");
  }
};

/// Complete elliptic integral K(k) by the arithmetic-geometric mean.
inline double complete_elliptic_K(EllipticModulus k) {
  double a = 1.0;
  double b = std::sqrt((1.0 - k.value) * (1.0 + k.value));
  for (int i = 0; i < 64 && a - b > 2.0 * kEps * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return std::numbers::pi / (a + b);
}

struct JacobiPoint {
  double sn;
  double cn;
  double dn;
};

/// Jacobi elliptic functions of fixed modulus, evaluated by the descending
/// Landen (AGM) transformation seeded from the circular-function limit.
/// The AGM scale is precomputed once per modulus; evaluation reduces the
/// argument modulo the 4K period and runs the amplitude recursion.
class JacobiElliptic {
 public:
  explicit JacobiElliptic(EllipticModulus k) : k_(k.value), ksq_(k.value * k.value) {
    double a = 1.0;
    double b = std::sqrt((1.0 - k_) * (1.0 + k_));
    double c = k_;
    n_ = 0;
    a_[0] = a;
    c_[0] = c;
    while (c > 2.0 * kEps * a && n_ + 1 < static_cast<int>(a_.size())) {
      const double an = 0.5 * (a + b);
      c = 0.5 * (a - b);
      b = std::sqrt(a * b);
      a = an;
      ++n_;
      a_[n_] = a;
      c_[n_] = c;
    }
    quarter_period_ = std::numbers::pi / (2.0 * a_[n_]);
  }

  double quarter_period() const { return quarter_period_; }  // K(k)
  double modulus() const { return k_; }

  JacobiPoint operator()(double u) const {
    // reduce modulo 4K; sn and cn flip sign under a 2K shift, dn is 2K-periodic
    const double period = 4.0 * quarter_period_;
    double w = u - period * std::round(u / period);
    double sign = 1.0;
    if (w > 2.0 * quarter_period_) {
      w -= 2.0 * quarter_period_;
      sign = -1.0;
    } else if (w < -2.0 * quarter_period_) {
      w += 2.0 * quarter_period_;
      sign = -1.0;
    }
    double phi = std::ldexp(a_[n_] * w, n_);
    for (int i = n_; i >= 1; --i) {
      const double s = std::clamp(c_[i] / a_[i] * std::sin(phi), -1.0, 1.0);
      phi = 0.5 * (phi + std::asin(s));
    }
    const double sn = std::sin(phi);
    const double cn = std::cos(phi);
    const double dn = std::sqrt(std::max(1.0 - ksq_ * sn * sn, 0.0));
    return {sign * sn, sign * cn, dn};
  }

 private:
  double k_;
  double ksq_;
  int n_;
  std::array<double, 32> a_{};
  std::array<double, 32> c_{};
  double quarter_period_;
};

/// sn(zeta, k); odd in zeta and periodic with period 4K(k).
inline double jacobi_sn(double zeta, EllipticModulus k) {
  return JacobiElliptic(k)(zeta).sn;
}

}  // namespace floquet_sg
