#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "floquet_sg/monodromy.hpp"
#include "floquet_sg/parallel.hpp"
#include "floquet_sg/wave.hpp"

namespace floquet_sg {

// Real-mu analysis of the Hill form q'' + gamma cos(f) q = mu q.  The
// equation reduces to the nu = 1 Lame equation w'' + (h - 2 k^2 sn^2) w = 0
// in zeta = scale * z, whose band edges are exactly solvable: w = dn, cn, sn
// at h = k^2, 1, 1 + k^2.  The affine map h(mu) supplies exact edge
// positions, used as the independent oracle for the numerical scan.

struct Interval {
  double lo;
  double hi;
};

struct BandStructure {
  double mu0_0;                     // largest periodic eigenvalue
  std::optional<double> mu1_0;      // second edge (= 0, librational only)
  Interval gap;                     // the unique open gap below mu0_0
  double mu_star;                   // gap midpoint (< 0)
  double beta_star;                 // sqrt(-mu_star) / |gamma|
  std::optional<double> alpha_star; // sqrt(mu0_0) / |gamma|, librational only
  std::vector<double> edges;        // all |Delta_q| = 2 crossings, descending
  double period;                    // T used for the monodromy
  double half_period;               // T/2: minimal period of cos f when librational
  double d_delta_dmu_at_zero;       // central difference, step 1e-5
};

struct LameParams {
  double k;
  double h;
  double nu;  // always 1
  double scale;
  WaveClass case_tag;
};

/// Hill discriminant Delta_q(mu) for real mu.
inline double delta_q(const WaveProfile& wave, double mu, double rtol = 1e-10) {
  const auto md = monodromy_q(wave, cplx(mu, 0.0), rtol);
  if (std::abs(md.trace.imag()) > 1e-10)
    throw AccuracyError("delta_q: Hill trace has a nonreal part of " +
                        std::to_string(md.trace.imag()));
  return md.trace.real();
}

/// Lame parameters of the wave at spectral parameter mu.  In every case
/// h(mu) = h(0) - mu / scale^2 with h(0) = k^2 for rotational waves (dn edge
/// at mu = 0) and h(0) = 1 for librational waves (cn edge at mu = 0).
inline LameParams lame_params(const WaveProfile& wave, double mu) {
  const double s2 = wave.scale() * wave.scale();
  const double h0 =
      wave.wave_class().librational() ? 1.0 : wave.modulus() * wave.modulus();
  return {wave.modulus(), h0 - mu / s2, 1.0, wave.scale(), wave.wave_class()};
}

/// The three exact band-edge positions in mu, descending: h = k^2 (dn),
/// h = 1 (cn), h = 1 + k^2 (sn) pulled back through the affine h(mu).
inline std::array<double, 3> lame_band_edges(const WaveProfile& wave) {
  const double s2 = wave.scale() * wave.scale();
  const double ksq = wave.modulus() * wave.modulus();
  const double h0 = wave.wave_class().librational() ? 1.0 : ksq;
  return {s2 * (h0 - ksq), s2 * (h0 - 1.0), s2 * (h0 - 1.0 - ksq)};
}

namespace detail {

inline double bisect_delta(const WaveProfile& wave, double target, double a,
                           double b, double fa, double rtol) {
  // sign change of Delta_q - target is bracketed by [a, b]
  while (b - a > 1e-11) {
    const double m = 0.5 * (a + b);
    const double fm = delta_q(wave, m, rtol) - target;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

/// Locate all crossings of Delta_q = +-2 in [mu_min, mu0 + 1] by a uniform
/// sign scan refined with bisection, identify the unique open gap and the
/// distinguished points mu*, beta*, alpha*.  Closed gaps (tangencies of
/// Delta_q with +-2) produce no sign change and are correctly skipped.
inline BandStructure band_structure(const WaveProfile& wave,
                                    double mu_min = std::nan(""),
                                    double rtol = 1e-10) {
  const auto predicted = lame_band_edges(wave);
  if (std::isnan(mu_min)) mu_min = predicted[2] - 1.0;
  if (mu_min > predicted[2])
    throw DomainError(
        "band_structure: mu_min must lie below the predicted lower gap edge");
  const double mu_max = predicted[0] + 1.0;

  // grid fine enough to put several points inside the open gap
  const double gap_width = std::max(predicted[1] - predicted[2], 1e-8);
  int n = std::max(400, static_cast<int>(
                            std::ceil(4.0 * (mu_max - mu_min) / gap_width)));
  n = std::min(n, 20000);

  std::vector<double> mus(n), deltas(n);
  for (int i = 0; i < n; ++i)
    mus[i] = mu_min + (mu_max - mu_min) * i / (n - 1);
  parallel_for(n, [&](int i) { deltas[i] = delta_q(wave, mus[i], rtol); });

  std::vector<double> roots;
  for (int i = 0; i + 1 < n; ++i) {
    for (double target : {2.0, -2.0}) {
      const double fa = deltas[i] - target;
      const double fb = deltas[i + 1] - target;
      if ((fa < 0.0) != (fb < 0.0))
        roots.push_back(
            detail::bisect_delta(wave, target, mus[i], mus[i + 1], fa, rtol));
    }
  }
  std::sort(roots.begin(), roots.end(), std::greater<>());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double a, double b) { return a - b < 1e-9; }),
              roots.end());

  BandStructure bs;
  bs.edges = roots;
  bs.period = wave.period();
  bs.half_period = 0.5 * wave.period();
  if (roots.empty())
    throw StructureError("band_structure: no band edges located");
  bs.mu0_0 = roots.front();

  // open gaps sit between consecutive located edges where |Delta_q| > 2
  std::vector<Interval> gaps;
  for (size_t i = 0; i + 1 < roots.size(); ++i) {
    const double mid = 0.5 * (roots[i] + roots[i + 1]);
    if (std::abs(delta_q(wave, mid, rtol)) > 2.0 + 1e-9)
      gaps.push_back({roots[i + 1], roots[i]});
  }
  if (gaps.size() != 1)
    throw StructureError("band_structure: expected exactly one open gap, found " +
                         std::to_string(gaps.size()));
  bs.gap = gaps.front();
  bs.mu_star = 0.5 * (bs.gap.lo + bs.gap.hi);
  if (!(bs.mu_star < 0.0))
    throw StructureError("band_structure: gap midpoint is not negative");
  bs.beta_star = std::sqrt(-bs.mu_star) / std::abs(wave.gamma());

  const double step = 1e-5;
  bs.d_delta_dmu_at_zero =
      (delta_q(wave, step, rtol) - delta_q(wave, -step, rtol)) / (2.0 * step);

  if (wave.wave_class().librational()) {
    if (!(bs.mu0_0 > 0.0))
      throw StructureError(
          "band_structure: librational wave without a positive top edge");
    // the second periodic eigenvalue must sit at mu = 0
    double nearest = roots.front();
    for (double r : roots)
      if (std::abs(r) < std::abs(nearest)) nearest = r;
    if (std::abs(nearest) > 1e-6)
      throw StructureError("band_structure: no band edge found at mu = 0");
    bs.mu1_0 = nearest;
    bs.alpha_star = std::sqrt(bs.mu0_0) / std::abs(wave.gamma());
    if (!(bs.d_delta_dmu_at_zero < 0.0))
      throw StructureError(
          "band_structure: librational discriminant slope at 0 is not negative");
  }
  return bs;
}

struct MqZeroAudit {
  ComplexMat2 m;            // computed monodromy at mu = 0
  double residual;          // max-norm against the closed form
  double d_delta_dmu;       // central difference at mu = 0
  double energy_derivative; // T_E from the period module
};

/// Check the closed form of the Hill monodromy at mu = 0,
///   M_q(0) = [[1, -v0^2 (c^2-1) T_E], [0, 1]],
/// with T_E computed by quadrature: the two sides come from independent code
/// paths.  Also checks sign(dDelta_q/dmu|0) = -sign((c^2-1) T_E).
inline MqZeroAudit verify_mq_zero(const WaveProfile& wave, double rtol = 1e-10) {
  MqZeroAudit audit;
  audit.m = monodromy_q(wave, 0.0, rtol).m;
  audit.energy_derivative = period_energy_derivative(wave.params());
  const double c2m1 = wave.c() * wave.c() - 1.0;
  const double predicted12 =
      -wave.v0() * wave.v0() * c2m1 * audit.energy_derivative;
  const ComplexMat2 diff{audit.m.m11 - 1.0, audit.m.m12 - predicted12,
                         audit.m.m21, audit.m.m22 - 1.0};
  audit.residual = max_norm(diff);

  const double step = 1e-5;
  audit.d_delta_dmu =
      (delta_q(wave, step, rtol) - delta_q(wave, -step, rtol)) / (2.0 * step);

  if (audit.residual > 1e-6)
    throw AccuracyError("verify_mq_zero: monodromy residual " +
                        std::to_string(audit.residual) + " exceeds 1e-6");
  const double rhs = c2m1 * audit.energy_derivative;
  if (audit.d_delta_dmu * rhs >= 0.0)
    throw AccuracyError(
        "verify_mq_zero: discriminant slope sign does not oppose "
        "(c^2-1) T_E");
  return audit;
}

}  // namespace floquet_sg
