#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "floquet_sg/errors.hpp"

namespace floquet_sg {

struct QuadratureSpec {
  double abs_tol = 1e-13;
  double rel_tol = 1e-13;
  int max_subdivisions = 400;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1] (positive half).
inline constexpr double kGk15Nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double kGk15Weights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kGauss7Weights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct GkResult {
  double integral;
  double error;
};

template <class F>
GkResult gauss_kronrod_15(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double kronrod = kGk15Weights[7] * f(mid);
  double gauss = kGauss7Weights[3] * f(mid);
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kGk15Nodes[i];
    const double fsum = f(mid - dx) + f(mid + dx);
    kronrod += kGk15Weights[i] * fsum;
    if (i % 2 == 1) gauss += kGauss7Weights[i / 2] * fsum;
  }
  kronrod *= half;
  gauss *= half;
  const double diff = std::abs(kronrod - gauss);
  // QUADPACK-style sharpened estimate
  const double err = std::min(diff, 200.0 * diff * std::sqrt(200.0 * diff));
  return {kronrod, std::max(err, std::abs(kronrod) * 1e-16)};
}

struct Interval {
  double a, b, integral, error;
};

// Plain adaptive refinement; the integrand must be finite on [a, b].
template <class F>
double adaptive_core(const F& f, double a, double b, const QuadratureSpec& spec) {
  std::vector<Interval> heap;
  auto r0 = gauss_kronrod_15(f, a, b);
  heap.push_back({a, b, r0.integral, r0.error});
  auto cmp = [](const Interval& x, const Interval& y) { return x.error < y.error; };
  int splits = 0;
  for (;;) {
    double total = 0.0, err = 0.0;
    for (const auto& iv : heap) {
      total += iv.integral;
      err += iv.error;
    }
    if (err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) return total;
    if (splits >= spec.max_subdivisions)
      throw ConvergenceError("adaptive quadrature: subdivision limit reached",
                             total, err);
    std::pop_heap(heap.begin(), heap.end(), cmp);
    const Interval worst = heap.back();
    heap.pop_back();
    const double m = 0.5 * (worst.a + worst.b);
    for (auto [lo, hi] : {std::pair{worst.a, m}, std::pair{m, worst.b}}) {
      auto r = gauss_kronrod_15(f, lo, hi);
      heap.push_back({lo, hi, r.integral, r.error});
      std::push_heap(heap.begin(), heap.end(), cmp);
    }
    ++splits;
  }
}

}  // namespace detail

/// Integrate f over (a, b).  Inverse-square-root endpoint singularities are
/// admissible: both halves are mapped through u = a + t^2 (resp. u = b - t^2),
/// which turns x^(-1/2) endpoint behavior into a bounded integrand.  Nodes of
/// the nested rule are interior, so f is never evaluated at a or b.
template <class F>
double adaptive_quadrature(const F& f, double a, double b,
                           const QuadratureSpec& spec = {}) {
  if (!(a < b)) throw DomainError("adaptive_quadrature: requires a < b");
  QuadratureSpec half_spec = spec;
  half_spec.abs_tol = 0.5 * spec.abs_tol;
  half_spec.max_subdivisions = spec.max_subdivisions;
  const double m = 0.5 * (a + b);
  const auto lower = [&](double t) { return 2.0 * t * f(a + t * t); };
  const auto upper = [&](double t) { return 2.0 * t * f(b - t * t); };
  double best_lo = 0.0, best_hi = 0.0;
  try {
    best_lo = detail::adaptive_core(lower, 0.0, std::sqrt(m - a), half_spec);
    best_hi = detail::adaptive_core(upper, 0.0, std::sqrt(b - m), half_spec);
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(e.what(), best_lo + best_hi + e.best_estimate,
                           e.error_bound);
  }
  return best_lo + best_hi;
}

}  // namespace floquet_sg
