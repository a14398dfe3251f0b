#pragma once

// Test-only oracles, independent of the library's evaluation paths:
// a fixed-step RK4 integrator for the pendulum equation, finite-difference
// derivatives, and a low-discrepancy point sequence.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <utility>

namespace oracles {

struct PendulumState {
  double f;
  double fp;
};

// One classical RK4 step of f'' = -gamma sin f.
inline PendulumState rk4_step(double gamma, const PendulumState& s, double h) {
  auto acc = [gamma](double f) { return -gamma * std::sin(f); };
  const double k1f = s.fp, k1v = acc(s.f);
  const double k2f = s.fp + 0.5 * h * k1v, k2v = acc(s.f + 0.5 * h * k1f);
  const double k3f = s.fp + 0.5 * h * k2v, k3v = acc(s.f + 0.5 * h * k2f);
  const double k4f = s.fp + h * k3v, k4v = acc(s.f + h * k3f);
  return {s.f + h / 6.0 * (k1f + 2 * k2f + 2 * k3f + k4f),
          s.fp + h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)};
}

inline PendulumState integrate_pendulum(double gamma, PendulumState s,
                                        double z_end, int n_steps) {
  const double h = z_end / n_steps;
  for (int i = 0; i < n_steps; ++i) s = rk4_step(gamma, s, h);
  return s;
}

// Period of a rotational wave: advance until f has increased by 2*pi, then
// polish the crossing time with Newton steps (f' > 0 throughout).
inline double rotational_period_by_integration(double gamma, double f0,
                                               double v0) {
  const double target = f0 + 2.0 * std::numbers::pi;
  PendulumState s{f0, v0};
  double z = 0.0;
  const double h = 1e-4;
  while (s.f < target) {
    s = rk4_step(gamma, s, h);
    z += h;
  }
  for (int i = 0; i < 60; ++i) {
    const double dz = (target - s.f) / s.fp;
    if (std::abs(dz) < 1e-15) break;
    s = rk4_step(gamma, s, dz);
    z += dz;
  }
  return z;
}

// 5-point central first derivative.
template <class F>
double central_derivative(const F& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) /
         (12.0 * h);
}

// 5-point central second derivative.
template <class F>
double central_second_derivative(const F& f, double x, double h) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) -
          f(x - 2 * h)) /
         (12.0 * h * h);
}

// Halton low-discrepancy sequence (bases 2 and 3) on the unit square.
inline double halton(std::uint32_t index, std::uint32_t base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * (index % base);
    index /= base;
  }
  return r;
}

inline std::pair<double, double> halton2(std::uint32_t index) {
  return {halton(index + 1, 2), halton(index + 1, 3)};
}

}  // namespace oracles
