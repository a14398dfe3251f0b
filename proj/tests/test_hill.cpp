#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "floquet_sg/hill.hpp"
#include "oracles.hpp"

using namespace floquet_sg;

namespace {

const WaveParams kRepresentatives[] = {
    {2.0, 3.0},
    {0.5, -1.0},
    {std::sqrt(3.0), 1.0},
    {0.5, 1.0},
};

// Residual of the Hill equation q'' + gamma cos(f) q = mu q for a candidate
// eigenfunction, with the second derivative taken by finite differences.
// Independent of the affine h(mu) map it is used to validate.
double hill_residual(const WaveProfile& w,
                     const std::function<double(double)>& q, double mu) {
  double worst = 0.0;
  for (int i = 1; i <= 20; ++i) {
    const double z = w.period() * i / 21.0;
    const double qpp = oracles::central_second_derivative(q, z, 1e-3);
    worst = std::max(worst,
                     std::abs(qpp + w.gamma() * w(z).cos_f * q(z) - mu * q(z)));
  }
  return worst;
}

}  // namespace

TEST_CASE("lame parameter map") {
  const WaveProfile suprot(2.0, 3.0);
  auto lp = lame_params(suprot, 0.0);
  CHECK(lp.k == Catch::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-14));
  CHECK(lp.h == Catch::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(lp.scale == Catch::Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK(lp.nu == 1.0);

  const WaveProfile suplib(std::sqrt(3.0), 1.0);
  lp = lame_params(suplib, 0.0);
  CHECK(lp.k == Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(lp.h == Catch::Approx(1.0).epsilon(1e-14));
  CHECK(lp.scale == Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));

  for (const WaveParams pr : kRepresentatives) {
    const WaveProfile w(pr.c, pr.E);
    CHECK(lame_params(w, 0.5).h < lame_params(w, 0.0).h);  // dh/dmu < 0
  }
}

TEST_CASE("lame band edges pass the eigenfunction-residual oracle") {
  for (const WaveParams pr : kRepresentatives) {
    const WaveProfile w(pr.c, pr.E);
    const auto edges = lame_band_edges(w);
    const JacobiElliptic je{EllipticModulus(w.modulus())};
    const double s = w.scale();
    const std::function<double(double)> eigenfunctions[3] = {
        [&](double z) { return je(s * z).dn; },
        [&](double z) { return je(s * z).cn; },
        [&](double z) { return je(s * z).sn; },
    };
    for (int e = 0; e < 3; ++e) {
      CAPTURE(pr.c, pr.E, e, edges[e]);
      REQUIRE(hill_residual(w, eigenfunctions[e], edges[e]) < 1e-6);
    }
  }
}

TEST_CASE("exact band edge values per wave class") {
  auto edges = lame_band_edges(WaveProfile(2.0, 3.0));
  CHECK(edges[0] == Catch::Approx(0.0).margin(1e-14));
  CHECK(edges[1] == Catch::Approx(-1.0 / 6.0).epsilon(1e-13));
  CHECK(edges[2] == Catch::Approx(-0.5).epsilon(1e-13));

  edges = lame_band_edges(WaveProfile(std::sqrt(3.0), 1.0));
  CHECK(edges[0] == Catch::Approx(0.25).epsilon(1e-13));
  CHECK(edges[1] == Catch::Approx(0.0).margin(1e-14));
  CHECK(edges[2] == Catch::Approx(-0.25).epsilon(1e-13));

  // subluminal rotational: validated against the eigenfunction oracle and
  // the superluminal dual wave (f -> f + pi, E -> 2 - E, gamma -> -gamma)
  edges = lame_band_edges(WaveProfile(0.5, -1.0));
  CHECK(edges[0] == Catch::Approx(0.0).margin(1e-14));
  CHECK(edges[1] == Catch::Approx(-2.0 / 3.0).epsilon(1e-13));
  CHECK(edges[2] == Catch::Approx(-2.0).epsilon(1e-13));

  edges = lame_band_edges(WaveProfile(0.5, 1.0));
  CHECK(edges[0] == Catch::Approx(2.0 / 3.0).epsilon(1e-13));
  CHECK(edges[1] == Catch::Approx(0.0).margin(1e-14));
  CHECK(edges[2] == Catch::Approx(-2.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("subluminal rotational edges agree with the dual superluminal wave") {
  // (c, E) subluminal rotational and the superluminal wave with
  // gamma~ = -gamma, E~ = 2 - E share the same Hill equation
  const WaveProfile sub(0.5, -1.0);
  const double gamma_dual = -sub.gamma();
  const double c_dual = std::sqrt(1.0 + 1.0 / gamma_dual);
  const WaveProfile dual(c_dual, 2.0 - sub.E());
  const auto e1 = lame_band_edges(sub);
  const auto e2 = lame_band_edges(dual);
  for (int i = 0; i < 3; ++i) {
    CAPTURE(i);
    CHECK(e1[i] == Catch::Approx(e2[i]).margin(1e-12));
  }
  for (double mu : {-0.4, -1.2, -2.5})
    CHECK(delta_q(sub, mu) == Catch::Approx(delta_q(dual, mu)).margin(1e-8));
}

TEST_CASE("discriminant at distinguished points") {
  for (const WaveParams pr : kRepresentatives) {
    const WaveProfile w(pr.c, pr.E);
    CAPTURE(pr.c, pr.E);
    CHECK(std::abs(delta_q(w, 0.0) - 2.0) < 1e-9);
  }
  const WaveProfile suprot(2.0, 3.0);
  CHECK(delta_q(suprot, 10.0) > 2.0);
  const auto fp = floquet_multipliers(monodromy_q(suprot, 10.0));
  CHECK(std::abs(fp.rho_plus) > 1.0 + 1e-3);
  CHECK(std::abs(delta_q(suprot, -50.0)) <= 2.0 + 1e-6);
}

TEST_CASE("band structure locates the Lame edges") {
  for (const WaveParams pr : kRepresentatives) {
    const WaveProfile w(pr.c, pr.E);
    const auto bs = band_structure(w);
    const auto oracle = lame_band_edges(w);
    CAPTURE(pr.c, pr.E);
    REQUIRE(bs.edges.size() == 3);
    for (int i = 0; i < 3; ++i) {
      CAPTURE(i);
      REQUIRE(std::abs(bs.edges[i] - oracle[i]) < 1e-7);
    }
    CHECK(bs.gap.lo == Catch::Approx(oracle[2]).margin(1e-7));
    CHECK(bs.gap.hi == Catch::Approx(oracle[1]).margin(1e-7));
    CHECK(bs.mu_star == Catch::Approx(0.5 * (oracle[1] + oracle[2])).margin(1e-7));
    CHECK(bs.beta_star ==
          Catch::Approx(std::sqrt(-bs.mu_star) / std::abs(w.gamma()))
              .epsilon(1e-12));
    CHECK(bs.period == w.period());
    CHECK(bs.half_period == 0.5 * w.period());
    if (w.wave_class().librational()) {
      REQUIRE(bs.mu1_0.has_value());
      CHECK(std::abs(*bs.mu1_0) < 1e-9);
      CHECK(bs.mu0_0 > 0.0);
      REQUIRE(bs.alpha_star.has_value());
      CHECK(bs.d_delta_dmu_at_zero < 0.0);
    } else {
      CHECK(std::abs(bs.mu0_0) < 1e-9);
      CHECK(!bs.mu1_0.has_value());
      CHECK(!bs.alpha_star.has_value());
    }
  }
}

TEST_CASE("alpha star of the benchmark librational wave is exactly 1") {
  const auto bs = band_structure(WaveProfile(std::sqrt(3.0), 1.0));
  REQUIRE(bs.alpha_star.has_value());
  CHECK(std::abs(*bs.alpha_star - 1.0) < 1e-7);
  CHECK(bs.mu_star == Catch::Approx(-0.125).margin(1e-7));
  CHECK(bs.beta_star == Catch::Approx(std::sqrt(0.5)).margin(1e-7));
}

TEST_CASE("a deep scan window still finds exactly one open gap") {
  const WaveProfile w(2.0, 3.0);
  const auto bs = band_structure(w, -50.0);
  CHECK(bs.gap.lo == Catch::Approx(-0.5).margin(1e-6));
  CHECK(bs.gap.hi == Catch::Approx(-1.0 / 6.0).margin(1e-6));
}

TEST_CASE("band structure rejects a window that misses the gap") {
  const WaveProfile w(2.0, 3.0);
  CHECK_THROWS_AS(band_structure(w, -0.1), DomainError);
}

TEST_CASE("discriminant varies smoothly on the scan grid") {
  const WaveProfile w(std::sqrt(3.0), 1.0);
  const auto pred = lame_band_edges(w);
  const int n = 400;
  const double lo = pred[2] - 1.0, hi = pred[0] + 1.0;
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i)
    d[i] = delta_q(w, lo + (hi - lo) * i / (n - 1), 1e-9);
  for (int i = 1; i + 2 < n; ++i) {
    const double step = std::abs(d[i + 1] - d[i]);
    const double local = std::max(std::abs(d[i] - d[i - 1]),
                                  std::abs(d[i + 2] - d[i + 1]));
    CAPTURE(i);
    REQUIRE(step < 10.0 * local + 1e-6);
  }
}

TEST_CASE("monodromy closed form at mu = 0") {
  for (const WaveParams pr :
       {WaveParams{std::sqrt(3.0), 1.0}, WaveParams{0.5, 1.0}}) {
    const WaveProfile w(pr.c, pr.E);
    const auto audit = verify_mq_zero(w);
    CAPTURE(pr.c, pr.E);
    CHECK(audit.residual < 1e-6);
    CHECK(audit.d_delta_dmu < 0.0);
    CHECK((pr.c * pr.c - 1.0) * audit.energy_derivative > 0.0);
  }
  // frozen cross-stack values for the (1,2) entry: -v0^2 (c^2-1) T_E
  const auto m1 = monodromy_q(WaveProfile(std::sqrt(3.0), 1.0), 0.0).m;
  CHECK(m1.m12.real() == Catch::Approx(-4.7925609389423692).epsilon(1e-7));
  const auto m2 = monodromy_q(WaveProfile(0.5, 1.0), 0.0).m;
  CHECK(m2.m12.real() == Catch::Approx(-2.9348322154006624).epsilon(1e-7));

  for (const WaveParams pr : kRepresentatives) {
    const WaveProfile w(pr.c, pr.E);
    const auto audit = verify_mq_zero(w);
    CAPTURE(pr.c, pr.E);
    CHECK(std::abs(audit.m.m11 - 1.0) < 1e-8);
    CHECK(std::abs(audit.m.m22 - 1.0) < 1e-8);
    CHECK(std::abs(audit.m.m21) < 1e-8);
  }
}
