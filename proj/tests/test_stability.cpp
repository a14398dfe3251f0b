#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "floquet_sg/stability.hpp"

using namespace floquet_sg;

TEST_CASE("verdicts for the benchmark waves") {
  CHECK(classify_stability(WaveProfile(0.5, -1.0)).stable);
  CHECK(classify_stability(WaveProfile(0.8, -0.5)).stable);
  for (const WaveParams pr :
       {WaveParams{2.0, 3.0}, WaveParams{1.5, 5.0},
        WaveParams{std::sqrt(3.0), 1.0}, WaveParams{0.5, 1.0},
        WaveParams{0.0, 1.0}}) {
    const auto v = classify_stability(WaveProfile(pr.c, pr.E));
    CAPTURE(pr.c, pr.E);
    REQUIRE_FALSE(v.stable);
    REQUIRE(v.certificate.has_value());
    CHECK(v.certificate->lambda_star.real() > 0.0);
    CHECK(v.certificate->gp_residual < 1e-8);
    CHECK(std::abs(std::abs(v.certificate->unimodular_multiplier) - 1.0) <
          1e-6);
  }
}

TEST_CASE("certificate path endpoints for the benchmark librational wave") {
  const WaveProfile w(std::sqrt(3.0), 1.0);
  const auto cert = find_unstable_eigenvalue(w);
  // beta* = sqrt(1/8) / (1/2), alpha* = 1 from the exact gap (-1/4, 0)
  CHECK(cert.lambda0.real() == 0.0);
  CHECK(cert.lambda0.imag() == Catch::Approx(std::sqrt(0.5)).margin(1e-7));
  CHECK(cert.lambda1.imag() == 0.0);
  CHECK(cert.lambda1.real() == Catch::Approx(1.0).margin(1e-7));
  CHECK(cert.lambda_star.real() > 0.0);
  CHECK(cert.lambda_star.real() < 1.0);
  CHECK(cert.iterations > 0);
  // one and only one multiplier on the unit circle off the imaginary axis
  const auto fp = floquet_multipliers(monodromy_p(w, cert.lambda_star));
  const double d_plus = std::abs(std::abs(fp.rho_plus) - 1.0);
  const double d_minus = std::abs(std::abs(fp.rho_minus) - 1.0);
  CHECK(std::min(d_plus, d_minus) < 1e-6);
  CHECK(std::max(d_plus, d_minus) > 1e-3);
}

TEST_CASE("certificates are robust against tolerance refinement") {
  for (const WaveParams pr : {WaveParams{2.0, 3.0}, WaveParams{0.5, 1.0}}) {
    const WaveProfile w(pr.c, pr.E);
    const auto cert = find_unstable_eigenvalue(w);
    const double refined = g_p(w, cert.lambda_star, 1e-11);
    CAPTURE(pr.c, pr.E, cert.gp_residual);
    CHECK(std::abs(refined - (refined < 0 ? -cert.gp_residual
                                          : cert.gp_residual)) <=
          10.0 * cert.gp_residual);
  }
}

TEST_CASE("standing librational wave: eigenvalue at alpha* itself") {
  const WaveProfile w(0.0, 1.0);
  const auto cert = find_unstable_eigenvalue(w);
  CHECK(cert.lambda_star.imag() == 0.0);
  CHECK(cert.lambda_star.real() ==
        Catch::Approx(std::sqrt(0.5)).margin(1e-9));
  CHECK(cert.iterations == 0);
  CHECK(std::abs(cert.unimodular_multiplier - 1.0) < 1e-8);
  // both spectral problems coincide at c = 0; the multiplier pair is a
  // double root, so the individual roots split at the square root of the
  // integration error while the trace average stays sharp
  const auto md = monodromy_p(w, cert.lambda_star);
  const auto fp = floquet_multipliers(md);
  CHECK(std::abs(std::abs(fp.rho_plus) - 1.0) < 1e-4);
  CHECK(std::abs(std::abs(fp.rho_minus) - 1.0) < 1e-4);
  CHECK(std::abs(0.5 * md.trace - 1.0) < 1e-8);
}

TEST_CASE("stable classes refuse a certificate search") {
  CHECK_THROWS_AS(find_unstable_eigenvalue(WaveProfile(0.5, -1.0)),
                  SearchError);
}

TEST_CASE("coincident multipliers imply Hill multipliers +-1") {
  // at a discriminant zero of the traveling-frame problem the Hill
  // multipliers are a double +-1; check at alpha* and at the gap edge on
  // the imaginary axis
  const WaveProfile w(std::sqrt(3.0), 1.0);
  const auto bs = band_structure(w);
  const double g2 = w.gamma() * w.gamma();
  for (const cplx lam :
       {cplx(*bs.alpha_star, 0.0),
        cplx(0.0, std::sqrt(-bs.edges[2]) / std::abs(w.gamma()))}) {
    const auto mp = monodromy_p(w, lam);
    CAPTURE(lam.real(), lam.imag());
    // discriminant zero, judged against its own quadratic scale
    const double scale = std::norm(mp.trace) + 4.0 * std::abs(mp.det) + 1.0;
    CHECK(std::abs(mp.discriminant) / scale < 1e-8);
    // the Hill multipliers are then a double root +-1; its well-conditioned
    // value is the trace average, the split roots carry sqrt-of-error noise
    const auto mq = monodromy_q(w, g2 * lam * lam);
    const double avg_to_one = std::abs(0.5 * mq.trace - 1.0);
    const double avg_to_minus_one = std::abs(0.5 * mq.trace + 1.0);
    CHECK(std::min(avg_to_one, avg_to_minus_one) < 1e-6);
    const auto fq = floquet_multipliers(mq);
    const double to_one = std::abs(fq.rho_plus - 1.0);
    const double to_minus_one = std::abs(fq.rho_plus + 1.0);
    CHECK(std::min(to_one, to_minus_one) < 1e-4);
  }
}

TEST_CASE("imaginary axis spectrum of the rotational benchmark") {
  const WaveProfile w(2.0, 3.0);
  const auto spec = imaginary_axis_spectrum(w, 3.0, 400);
  REQUIRE(spec.beta_intervals.size() == 2);
  // gap (-1/2, -1/6) maps to beta in (3 sqrt(1/6), 3 sqrt(1/2))
  CHECK(spec.beta_intervals[0].lo == Catch::Approx(0.0).margin(1e-12));
  CHECK(spec.beta_intervals[0].hi ==
        Catch::Approx(3.0 * std::sqrt(1.0 / 6.0)).margin(1e-6));
  CHECK(spec.beta_intervals[1].lo ==
        Catch::Approx(3.0 * std::sqrt(0.5)).margin(1e-6));
  CHECK(spec.beta_intervals[1].hi == Catch::Approx(3.0).margin(1e-12));
}

TEST_CASE("imaginary axis spectrum of a librational wave") {
  // gap (-1/4, 0) in mu: the spectrum on the axis is {0} plus [1, inf)
  const WaveProfile w(std::sqrt(3.0), 1.0);
  const auto spec = imaginary_axis_spectrum(w, 2.0, 400);
  REQUIRE(spec.beta_intervals.size() >= 2);
  CHECK(spec.beta_intervals.front().lo == Catch::Approx(0.0).margin(1e-12));
  CHECK(spec.beta_intervals.front().hi < 2.0 / 399 + 1e-9);
  CHECK(spec.beta_intervals.back().lo == Catch::Approx(1.0).margin(1e-6));
  CHECK(spec.beta_intervals.back().hi == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("imaginary axis spectrum argument validation") {
  const WaveProfile w(2.0, 3.0);
  CHECK_THROWS_AS(imaginary_axis_spectrum(w, -1.0, 100), DomainError);
  CHECK_THROWS_AS(imaginary_axis_spectrum(w, 1.0, 1), DomainError);
}

TEST_CASE("real periodic eigenvalue of the subluminal librational wave") {
  const WaveProfile w(0.5, 1.0);
  const auto r = real_periodic_eigenvalue(w);
  const auto bs = band_structure(w);
  CHECK(r.lambda_star > *bs.alpha_star);
  CHECK(std::abs(r.rho - 1.0) < 1e-5);
  CHECK(std::abs(r.rho * r.rho - 1.0) < 1e-5);
  // frozen after first verified computation
  CHECK(r.lambda_star == Catch::Approx(0.70156584136399).margin(1e-9));
}

TEST_CASE("real periodic eigenvalue degenerates to alpha* at c = 0") {
  const WaveProfile w(0.0, 1.0);
  const auto r = real_periodic_eigenvalue(w);
  const auto bs = band_structure(w);
  CHECK(r.lambda_star == *bs.alpha_star);
  CHECK(std::abs(r.rho - 1.0) < 1e-8);
}

TEST_CASE("real periodic eigenvalue rejects other classes") {
  CHECK_THROWS_AS(real_periodic_eigenvalue(WaveProfile(2.0, 3.0)),
                  SearchError);
}

TEST_CASE("subluminal rotational negativity audit") {
  const WaveProfile w(0.5, -1.0);
  const auto report = stability_audit_subluminal_rotational(w, 200);
  CHECK(report.n_samples == 200);
  CHECK(report.max_g_p < -1e-12);
  // boundary consistency: on-axis band point is spectrum, gap point is not
  const auto bs = band_structure(w);
  const double beta_band = 0.75 * std::sqrt(0.3);  // mu = -0.3 inside a band
  CHECK(std::abs(g_p(w, cplx(0.0, beta_band))) < 1e-8);
  CHECK(g_p(w, cplx(0.0, bs.beta_star)) < 0.0);
}

TEST_CASE("audit rejects other wave classes") {
  CHECK_THROWS_AS(
      stability_audit_subluminal_rotational(WaveProfile(2.0, 3.0), 10),
      DomainError);
}
