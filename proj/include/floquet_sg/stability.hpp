#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "floquet_sg/hill.hpp"
#include "floquet_sg/monodromy.hpp"
#include "floquet_sg/parallel.hpp"

namespace floquet_sg {

// Stability verdicts for the four wave families.  Subluminal rotational
// waves have purely imaginary spectrum; the other three families carry an
// eigenvalue with positive real part, located constructively by a sign
// change of G_p along a path from the imaginary axis into the right half
// plane (intermediate value theorem).

struct StabilityTolerances {
  double ode_rtol = 1e-10;
  double gp_tol = 1e-10;       // accept a bisection point once |G_p| drops below
  double bracket_tol = 1e-14;  // ... or once the bracket is this narrow
  int max_doublings = 15;      // cap for the real-axis endpoint search
  int audit_samples = 200;
};

struct InstabilityCertificate {
  cplx lambda_star;
  double gp_residual;          // |G_p(lambda_star)|
  cplx unimodular_multiplier;  // the multiplier on the unit circle
  cplx lambda0;                // path start, G_p < 0
  cplx lambda1;                // path end, G_p > 0
  int iterations;
};

struct AuditReport {
  int n_samples;
  double max_g_p;
  cplx worst_lambda;
};

struct StabilityVerdict {
  bool stable;
  std::optional<InstabilityCertificate> certificate;  // present when unstable
  std::optional<AuditReport> audit;                   // present when stable
};

struct ImagAxisSpectrum {
  std::vector<Interval> beta_intervals;  // beta >= 0 with i*beta in the spectrum
};

struct RealPeriodicEigenvalue {
  double lambda_star;
  cplx rho;  // multiplier closest to 1
  double gp_residual;
};

namespace detail {

inline double halton(std::uint32_t index, std::uint32_t base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * (index % base);
    index /= base;
  }
  return r;
}

inline cplx nearest_unimodular(const FloquetPair& fp) {
  return std::abs(fp.log_mod_plus) <= std::abs(fp.log_mod_minus)
             ? fp.rho_plus
             : fp.rho_minus;
}

// Bisection on G_p along the straight segment lambda0 (1-t) + lambda1 t.
// Only a sign change is guaranteed, so plain bisection rather than an
// interpolating method.
inline InstabilityCertificate bisect_gp(const WaveProfile& wave, cplx lambda0,
                                        cplx lambda1,
                                        const StabilityTolerances& tol) {
  auto seg = [&](double t) { return lambda0 * (1.0 - t) + lambda1 * t; };
  double a = 0.0, b = 1.0;
  double ga = g_p(wave, lambda0, tol.ode_rtol);
  double t_best = 0.5, g_best = 0.0;
  int iterations = 0;
  for (;;) {
    const double m = 0.5 * (a + b);
    const double gm = g_p(wave, seg(m), tol.ode_rtol);
    ++iterations;
    t_best = m;
    g_best = gm;
    if (std::abs(gm) < tol.gp_tol || b - a < tol.bracket_tol) break;
    if ((gm < 0.0) == (ga < 0.0)) {
      a = m;
      ga = gm;
    } else {
      b = m;
    }
  }
  InstabilityCertificate cert;
  cert.lambda_star = seg(t_best);
  cert.gp_residual = std::abs(g_best);
  cert.unimodular_multiplier = nearest_unimodular(
      floquet_multipliers(monodromy_p(wave, cert.lambda_star, tol.ode_rtol)));
  cert.lambda0 = lambda0;
  cert.lambda1 = lambda1;
  cert.iterations = iterations;
  return cert;
}

}  // namespace detail

/// Negative-definiteness audit for subluminal rotational waves: G_p must be
/// strictly negative at every sampled point of the open right quadrant.
inline AuditReport stability_audit_subluminal_rotational(
    const WaveProfile& wave, int n_samples = 200, double rtol = 1e-10) {
  const WaveClass wc = wave.wave_class();
  if (!(wc.subluminal() && !wc.librational()))
    throw DomainError(
        "stability audit requires a subluminal rotational wave, got " +
        to_string(wc));
  std::vector<double> values(n_samples);
  std::vector<cplx> points(n_samples);
  for (int i = 0; i < n_samples; ++i)
    points[i] = cplx(0.05 + 1.95 * detail::halton(i + 1, 2),
                     2.0 * detail::halton(i + 1, 3));
  parallel_for(n_samples,
               [&](int i) { values[i] = g_p(wave, points[i], rtol); });
  AuditReport report{n_samples, values[0], points[0]};
  for (int i = 1; i < n_samples; ++i)
    if (values[i] > report.max_g_p) {
      report.max_g_p = values[i];
      report.worst_lambda = points[i];
    }
  if (!(report.max_g_p < -1e-12))
    throw StructureError(
        "stability audit: nonnegative G_p sample at re=" +
        std::to_string(report.worst_lambda.real()) +
        " im=" + std::to_string(report.worst_lambda.imag()) +
        " (numerical failure)");
  return report;
}

/// Locate an eigenvalue with positive real part for the three unstable
/// families.  The path runs from i*beta* (inside the spectral gap on the
/// imaginary axis, G_p < 0) to a real point with G_p > 0: alpha* for
/// librational waves, a doubled real endpoint for superluminal rotational
/// waves.  For c = 0 the two spectral problems coincide and alpha* itself
/// is the eigenvalue.
inline InstabilityCertificate find_unstable_eigenvalue(
    const WaveProfile& wave, const StabilityTolerances& tol = {}) {
  const WaveClass wc = wave.wave_class();
  const bool eligible =
      wc.librational() || (!wc.subluminal() && !wc.librational());
  if (!eligible)
    throw SearchError("find_unstable_eigenvalue: " + to_string(wc) +
                      " wave is spectrally stable");

  const BandStructure bs = band_structure(wave, std::nan(""), tol.ode_rtol);

  if (std::abs(wave.c()) < 1e-9) {
    InstabilityCertificate cert;
    cert.lambda_star = *bs.alpha_star;
    const auto md = monodromy_p(wave, cert.lambda_star, tol.ode_rtol);
    cert.gp_residual = std::abs(floquet_multipliers(md).g_value);
    // alpha* is a periodic band edge: the multipliers are a coincident pair
    // whose well-conditioned value is the trace average
    cert.unimodular_multiplier = 0.5 * md.trace;
    cert.lambda0 = cert.lambda1 = cert.lambda_star;
    cert.iterations = 0;
    return cert;
  }

  const cplx lambda0(0.0, bs.beta_star);
  const double g0 = g_p(wave, lambda0, tol.ode_rtol);
  if (!(g0 < 0.0))
    throw SearchError("find_unstable_eigenvalue: G_p(i beta*) = " +
                      std::to_string(g0) + " is not negative");

  cplx lambda1;
  if (wc.librational()) {
    lambda1 = *bs.alpha_star;
    const double g1 = g_p(wave, lambda1, tol.ode_rtol);
    if (!(g1 > 0.0))
      throw SearchError("find_unstable_eigenvalue: G_p(alpha*) = " +
                        std::to_string(g1) + " is not positive");
  } else {
    double x = 1.0;
    int k = 0;
    while (k <= tol.max_doublings && !(g_p(wave, x, tol.ode_rtol) > 0.0)) {
      x *= 2.0;
      ++k;
    }
    if (k > tol.max_doublings)
      throw SearchError(
          "find_unstable_eigenvalue: no positive G_p found on the real axis "
          "within the doubling cap");
    lambda1 = x;
  }
  return detail::bisect_gp(wave, lambda0, lambda1, tol);
}

/// Verdict per wave family: subluminal rotational -> stable (backed by the
/// sampling audit), everything else -> unstable with a certificate.
inline StabilityVerdict classify_stability(const WaveProfile& wave,
                                           const StabilityTolerances& tol = {}) {
  const WaveClass wc = wave.wave_class();
  if (wc.subluminal() && !wc.librational()) {
    StabilityVerdict v{true, std::nullopt, std::nullopt};
    v.audit = stability_audit_subluminal_rotational(wave, tol.audit_samples,
                                                    tol.ode_rtol);
    return v;
  }
  return {false, find_unstable_eigenvalue(wave, tol), std::nullopt};
}

/// Maximal intervals of beta >= 0 with i*beta in the spectrum, from the band
/// criterion |Delta_q(-gamma^2 beta^2)| <= 2.
inline ImagAxisSpectrum imaginary_axis_spectrum(const WaveProfile& wave,
                                                double beta_max, int n,
                                                double rtol = 1e-10) {
  if (!(beta_max > 0.0) || n < 2)
    throw DomainError("imaginary_axis_spectrum: need beta_max > 0 and n >= 2");
  const double g2 = wave.gamma() * wave.gamma();
  auto in_band = [&](double beta) {
    return std::abs(delta_q(wave, -g2 * beta * beta, rtol)) <= 2.0 + 1e-9;
  };
  std::vector<std::uint8_t> flags(n);
  parallel_for(n, [&](int i) {
    flags[i] = in_band(beta_max * i / (n - 1)) ? 1 : 0;
  });
  auto refine = [&](double inside, double outside) {
    while (std::abs(outside - inside) > 1e-10) {
      const double m = 0.5 * (inside + outside);
      (in_band(m) ? inside : outside) = m;
    }
    return 0.5 * (inside + outside);
  };
  ImagAxisSpectrum spec;
  int i = 0;
  while (i < n) {
    if (!flags[i]) {
      ++i;
      continue;
    }
    int j = i;
    while (j + 1 < n && flags[j + 1]) ++j;
    const double grid = beta_max / (n - 1);
    double lo = i * grid;
    double hi = j * grid;
    if (i > 0) lo = refine(lo, lo - grid);
    if (j + 1 < n) hi = refine(hi, hi + grid);
    spec.beta_intervals.push_back({lo, hi});
    i = j + 1;
  }
  return spec;
}

/// Positive real periodic eigenvalue of subluminal librational waves: the
/// path runs from alpha* (G_p > 0) along the real axis to a doubled
/// endpoint with G_p < 0; the located eigenvalue carries a multiplier 1.
inline RealPeriodicEigenvalue real_periodic_eigenvalue(
    const WaveProfile& wave, const StabilityTolerances& tol = {}) {
  const WaveClass wc = wave.wave_class();
  if (!(wc.subluminal() && wc.librational()))
    throw SearchError("real_periodic_eigenvalue requires a subluminal "
                      "librational wave, got " +
                      to_string(wc));
  const BandStructure bs = band_structure(wave, std::nan(""), tol.ode_rtol);
  const double alpha = *bs.alpha_star;

  if (std::abs(wave.c()) < 1e-9) {
    const auto md = monodromy_p(wave, alpha, tol.ode_rtol);
    // coincident multiplier pair at the band edge: report the trace average
    return {alpha, 0.5 * md.trace,
            std::abs(floquet_multipliers(md).g_value)};
  }

  const double g0 = g_p(wave, alpha, tol.ode_rtol);
  if (!(g0 > 0.0))
    throw SearchError("real_periodic_eigenvalue: G_p(alpha*) = " +
                      std::to_string(g0) + " is not positive");
  double x = 2.0 * std::max(1.0, alpha);
  int k = 0;
  while (k <= tol.max_doublings && !(g_p(wave, x, tol.ode_rtol) < 0.0)) {
    x *= 2.0;
    ++k;
  }
  if (k > tol.max_doublings)
    throw SearchError(
        "real_periodic_eigenvalue: no negative G_p found on the real axis "
        "within the doubling cap");

  double a = alpha, b = x;
  double ga = g0;
  double best = 0.5 * (a + b), g_best = 0.0;
  for (;;) {
    const double m = 0.5 * (a + b);
    const double gm = g_p(wave, m, tol.ode_rtol);
    best = m;
    g_best = gm;
    if (std::abs(gm) < tol.gp_tol || b - a < tol.bracket_tol * std::max(1.0, x))
      break;
    if ((gm > 0.0) == (ga > 0.0)) {
      a = m;
      ga = gm;
    } else {
      b = m;
    }
  }
  const auto fp = floquet_multipliers(monodromy_p(wave, best, tol.ode_rtol));
  const cplx rho = std::abs(fp.rho_plus - 1.0) < std::abs(fp.rho_minus - 1.0)
                       ? fp.rho_plus
                       : fp.rho_minus;
  if (!(std::abs(rho - 1.0) < 1e-5))
    throw AccuracyError(
        "real_periodic_eigenvalue: located eigenvalue lacks a periodic "
        "multiplier");
  return {best, rho, std::abs(g_best)};
}

}  // namespace floquet_sg
