#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <utility>

#include "floquet_sg/errors.hpp"
#include "floquet_sg/wave.hpp"

namespace floquet_sg {

using cplx = std::complex<double>;

struct ComplexMat2 {
  cplx m11, m12, m21, m22;
};

inline ComplexMat2 operator*(const ComplexMat2& a, const ComplexMat2& b) {
  return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
          a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
}

inline double max_norm(const ComplexMat2& a) {
  return std::max(std::max(std::abs(a.m11), std::abs(a.m12)),
                  std::max(std::abs(a.m21), std::abs(a.m22)));
}

enum class WhichSystem { P, Q };

/// Monodromy matrix of one of the two linearized systems together with the
/// derived scalars.  `det` is accumulated in factored form by the integrator,
/// so it stays accurate (and finite in log form) even when the two Floquet
/// multipliers differ by many orders of magnitude.
struct MonodromyData {
  ComplexMat2 m;
  cplx trace;
  cplx det;
  cplx discriminant;  // trace^2 - 4 det
  cplx lambda;        // spectral parameter (lambda for P, mu for Q)
  WhichSystem which;
  double log_abs_det;
  double abel_residual;  // relative defect against the exact determinant
  int steps;
};

struct FloquetPair {
  cplx rho_plus;
  cplx rho_minus;
  double log_mod_plus;
  double log_mod_minus;
  double g_value;  // log|rho+| * log|rho-|
};

namespace detail {

// Fundamental solution Y(z) of Y' = A(z) Y, Y(0) = I, maintained as
// Y = Q * [[exp(l1), r12], [0, exp(l2)]] with Q unitary.  The triangular
// factor absorbs all growth: the determinant is det(Q) * exp(l1 + l2) with
// no cancellation, and the columns handed to the stepper stay O(1).
struct FactoredFundamental {
  cplx q11{1.0}, q12{0.0}, q21{0.0}, q22{1.0};
  cplx r12{0.0};
  double l1 = 0.0, l2 = 0.0;
  int steps = 0;

  cplx det_q() const { return q11 * q22 - q12 * q21; }
  double log_abs_det() const { return l1 + l2 + std::log(std::abs(det_q())); }
  cplx det() const { return det_q() * std::exp(cplx(l1 + l2)); }

  ComplexMat2 assemble() const {
    const double e1 = std::exp(l1), e2 = std::exp(l2);
    return {q11 * e1, q11 * r12 + q12 * e2, q21 * e1, q21 * r12 + q22 * e2};
  }

  cplx trace() const {
    return q11 * std::exp(l1) + q21 * r12 + q22 * std::exp(l2);
  }
};

// Dormand-Prince 5(4) coefficients.
inline constexpr double kDp5A21 = 1.0 / 5.0;
inline constexpr double kDp5A31 = 3.0 / 40.0, kDp5A32 = 9.0 / 40.0;
inline constexpr double kDp5A41 = 44.0 / 45.0, kDp5A42 = -56.0 / 15.0,
                        kDp5A43 = 32.0 / 9.0;
inline constexpr double kDp5A51 = 19372.0 / 6561.0, kDp5A52 = -25360.0 / 2187.0,
                        kDp5A53 = 64448.0 / 6561.0, kDp5A54 = -212.0 / 729.0;
inline constexpr double kDp5A61 = 9017.0 / 3168.0, kDp5A62 = -355.0 / 33.0,
                        kDp5A63 = 46732.0 / 5247.0, kDp5A64 = 49.0 / 176.0,
                        kDp5A65 = -5103.0 / 18656.0;
inline constexpr double kDp5B1 = 35.0 / 384.0, kDp5B3 = 500.0 / 1113.0,
                        kDp5B4 = 125.0 / 192.0, kDp5B5 = -2187.0 / 6784.0,
                        kDp5B6 = 11.0 / 84.0;
inline constexpr double kDp5E1 = 71.0 / 57600.0, kDp5E3 = -71.0 / 16695.0,
                        kDp5E4 = 71.0 / 1920.0, kDp5E5 = -17253.0 / 339200.0,
                        kDp5E6 = 22.0 / 525.0, kDp5E7 = -1.0 / 40.0;

struct State4 {
  cplx y[4];  // two columns of the 2x2 matrix solution
};

// One evaluation of the right-hand side Y' = A(z) Y for companion-form
// A = [[0, 1], [a21, a22]].
template <class Coeff>
inline State4 companion_rhs(const Coeff& coeff, double z, const State4& s) {
  const auto [a21, a22] = coeff(z);
  return {{s.y[1], a21 * s.y[0] + a22 * s.y[1], s.y[3],
           a21 * s.y[2] + a22 * s.y[3]}};
}

// Adaptive integration of the factored fundamental solution over [0, z_end].
template <class Coeff>
FactoredFundamental integrate_fundamental(const Coeff& coeff, double z_end,
                                          double tol, const char* label) {
  constexpr int kMaxSteps = 1000000;
  const double atol = 1e-3 * tol;

  FactoredFundamental f;
  double z = 0.0;

  // initial step from the local coefficient scale
  {
    const auto [a21, a22] = coeff(0.0);
    const double omega =
        std::sqrt(std::abs(a21)) + std::abs(a22) + 1e-3;
    double h = std::min(z_end / 50.0, 0.3 / omega);
    State4 y{{f.q11, f.q21, f.q12, f.q22}};
    State4 k1 = companion_rhs(coeff, z, y);
    bool have_k1 = true;
    bool rejected = false;

    while (z < z_end) {
      if (f.steps++ > kMaxSteps)
        throw ConvergenceError(std::string(label) +
                                   ": step limit exceeded in monodromy "
                                   "integration",
                               0.0, 0.0);
      if (h < 4.0 * std::numeric_limits<double>::epsilon() * z_end)
        throw ConvergenceError(
            std::string(label) + ": step size underflow in monodromy "
                                 "integration",
            0.0, 0.0);
      const bool last = z + h >= z_end;
      if (last) h = z_end - z;

      if (!have_k1) {
        k1 = companion_rhs(coeff, z, y);
        have_k1 = true;
      }
      State4 t;
      for (int i = 0; i < 4; ++i) t.y[i] = y.y[i] + h * kDp5A21 * k1.y[i];
      const State4 k2 = companion_rhs(coeff, z + h / 5.0, t);
      for (int i = 0; i < 4; ++i)
        t.y[i] = y.y[i] + h * (kDp5A31 * k1.y[i] + kDp5A32 * k2.y[i]);
      const State4 k3 = companion_rhs(coeff, z + 3.0 * h / 10.0, t);
      for (int i = 0; i < 4; ++i)
        t.y[i] = y.y[i] + h * (kDp5A41 * k1.y[i] + kDp5A42 * k2.y[i] +
                               kDp5A43 * k3.y[i]);
      const State4 k4 = companion_rhs(coeff, z + 4.0 * h / 5.0, t);
      for (int i = 0; i < 4; ++i)
        t.y[i] = y.y[i] + h * (kDp5A51 * k1.y[i] + kDp5A52 * k2.y[i] +
                               kDp5A53 * k3.y[i] + kDp5A54 * k4.y[i]);
      const State4 k5 = companion_rhs(coeff, z + 8.0 * h / 9.0, t);
      for (int i = 0; i < 4; ++i)
        t.y[i] = y.y[i] + h * (kDp5A61 * k1.y[i] + kDp5A62 * k2.y[i] +
                               kDp5A63 * k3.y[i] + kDp5A64 * k4.y[i] +
                               kDp5A65 * k5.y[i]);
      const State4 k6 = companion_rhs(coeff, z + h, t);
      State4 ynew;
      for (int i = 0; i < 4; ++i)
        ynew.y[i] = y.y[i] + h * (kDp5B1 * k1.y[i] + kDp5B3 * k3.y[i] +
                                  kDp5B4 * k4.y[i] + kDp5B5 * k5.y[i] +
                                  kDp5B6 * k6.y[i]);
      const State4 k7 = companion_rhs(coeff, z + h, ynew);

      double err = 0.0;
      for (int i = 0; i < 4; ++i) {
        const cplx e = h * (kDp5E1 * k1.y[i] + kDp5E3 * k3.y[i] +
                            kDp5E4 * k4.y[i] + kDp5E5 * k5.y[i] +
                            kDp5E6 * k6.y[i] + kDp5E7 * k7.y[i]);
        const double sc =
            atol + tol * std::max(std::abs(y.y[i]), std::abs(ynew.y[i]));
        const double r = std::abs(e) / sc;
        err += r * r;
      }
      err = std::sqrt(err / 4.0);

      if (err <= 1.0) {
        z += h;
        // re-orthonormalize: factor the advanced columns as Q_new * R_step
        const cplx v1[2] = {ynew.y[0], ynew.y[1]};
        const cplx v2[2] = {ynew.y[2], ynew.y[3]};
        const double n1 = std::sqrt(std::norm(v1[0]) + std::norm(v1[1]));
        const cplx q1[2] = {v1[0] / n1, v1[1] / n1};
        const cplx p = std::conj(q1[0]) * v2[0] + std::conj(q1[1]) * v2[1];
        cplx w[2] = {v2[0] - p * q1[0], v2[1] - p * q1[1]};
        const double n2 = std::sqrt(std::norm(w[0]) + std::norm(w[1]));
        f.q11 = q1[0];
        f.q21 = q1[1];
        f.q12 = w[0] / n2;
        f.q22 = w[1] / n2;
        f.r12 = n1 * f.r12 + p * std::exp(f.l2);
        f.l1 += std::log(n1);
        f.l2 += std::log(n2);
        y = State4{{f.q11, f.q21, f.q12, f.q22}};
        // FSAL: k1 at the renormalized state is k7 * R_step^{-1}
        k1.y[0] = k7.y[0] / n1;
        k1.y[1] = k7.y[1] / n1;
        k1.y[2] = (k7.y[2] - (p / n1) * k7.y[0]) / n2;
        k1.y[3] = (k7.y[3] - (p / n1) * k7.y[1]) / n2;
        have_k1 = true;
        const double fac =
            std::min(rejected ? 1.0 : 5.0,
                     std::max(0.2, 0.9 * std::pow(err, -0.2)));
        h *= fac;
        rejected = false;
      } else {
        h *= std::max(0.2, std::min(1.0, 0.9 * std::pow(err, -0.2)));
        rejected = true;
        have_k1 = true;  // k1 unchanged at the same z
      }
      if (!std::isfinite(f.l1) || !std::isfinite(f.l2) ||
          !std::isfinite(std::abs(f.r12)))
        throw ConvergenceError(
            std::string(label) + ": non-finite state in monodromy integration",
            0.0, 0.0);
    }
  }
  return f;
}

inline double internal_tolerance(double rtol) {
  return std::clamp(rtol * 1e-3, 5e-15, 1e-9);
}

inline void check_rtol(double rtol) {
  if (!(rtol >= 1e-13 && rtol <= 1e-6))
    throw DomainError("monodromy rtol must lie in [1e-13, 1e-6]");
}

inline MonodromyData finish(const FactoredFundamental& f, cplx lambda,
                            WhichSystem which, cplx exact_det, double rtol,
                            const char* label) {
  MonodromyData md;
  md.m = f.assemble();
  md.trace = f.trace();
  md.det = f.det();
  md.discriminant = md.trace * md.trace - 4.0 * md.det;
  md.lambda = lambda;
  md.which = which;
  md.log_abs_det = f.log_abs_det();
  md.steps = f.steps;
  md.abel_residual = std::abs(md.det - exact_det) / std::abs(exact_det);
  if (!(md.abel_residual <= 10.0 * rtol))
    throw AccuracyError(std::string(label) +
                        ": Abel determinant residual " +
                        std::to_string(md.abel_residual) +
                        " exceeds 10*rtol");
  return md;
}

}  // namespace detail

/// Monodromy matrix of the traveling-frame spectral problem
///   p'' - 2 c gamma lambda p' + gamma (lambda^2 + cos f) p = 0
/// over one fundamental period.  Accuracy is certified a posteriori against
/// the Abel determinant exp(2 c gamma lambda T).
inline MonodromyData monodromy_p(const WaveProfile& wave, cplx lambda,
                                 double rtol = 1e-10) {
  detail::check_rtol(rtol);
  const double g = wave.gamma();
  const cplx a22 = 2.0 * wave.c() * g * lambda;
  const cplx lam2 = lambda * lambda;
  auto coeff = [&](double z) {
    return std::pair<cplx, cplx>(-g * (lam2 + wave.cos_f(z)), a22);
  };
  auto f = detail::integrate_fundamental(coeff, wave.period(),
                                         detail::internal_tolerance(rtol), "P");
  const cplx exact_det =
      std::exp(2.0 * wave.c() * g * lambda * wave.period());
  return detail::finish(f, lambda, WhichSystem::P, exact_det, rtol, "P");
}

/// Monodromy matrix of the Hill form q'' + gamma cos(f) q = mu q over one
/// fundamental period; det is certified against the exact value 1.
inline MonodromyData monodromy_q(const WaveProfile& wave, cplx mu,
                                 double rtol = 1e-10) {
  detail::check_rtol(rtol);
  const double g = wave.gamma();
  auto coeff = [&](double z) {
    return std::pair<cplx, cplx>(mu - g * wave.cos_f(z), cplx(0.0));
  };
  auto f = detail::integrate_fundamental(coeff, wave.period(),
                                         detail::internal_tolerance(rtol), "Q");
  return detail::finish(f, mu, WhichSystem::Q, cplx(1.0), rtol, "Q");
}

/// Roots of rho^2 - trace*rho + det = 0.  The larger-magnitude root comes
/// from the branch-stable quadratic formula, the other from det/rho; the
/// log-moduli use the factored determinant so they remain meaningful when
/// the multipliers are far from unit scale.
inline FloquetPair floquet_multipliers(const MonodromyData& m) {
  FloquetPair fp;
  const cplx tr = m.trace;
  const double atr = std::abs(tr);
  if (atr < 1e-150) {
    fp.rho_plus = std::sqrt(-m.det);
    fp.rho_minus = -fp.rho_plus;
    fp.log_mod_plus = 0.5 * m.log_abs_det;
    fp.log_mod_minus = fp.log_mod_plus;
  } else {
    const cplx t = (m.det / tr) / tr;
    const cplx s = std::sqrt(1.0 - 4.0 * t);
    const cplx w = (std::abs(1.0 + s) >= std::abs(1.0 - s)) ? 1.0 + s : 1.0 - s;
    fp.rho_plus = 0.5 * tr * w;
    fp.rho_minus = m.det / fp.rho_plus;
    fp.log_mod_plus = std::log(atr) + std::log(0.5 * std::abs(w));
    fp.log_mod_minus = m.log_abs_det - fp.log_mod_plus;
  }
  fp.g_value = fp.log_mod_plus * fp.log_mod_minus;
  return fp;
}

/// G_p(lambda) = log|rho+| log|rho-|; zero exactly on the spectrum of the
/// traveling-frame problem.
inline double g_p(const WaveProfile& wave, cplx lambda, double rtol = 1e-10) {
  return floquet_multipliers(monodromy_p(wave, lambda, rtol)).g_value;
}

/// G_q(lambda) = log|eta+| log|eta-| for the Hill form at mu = gamma^2
/// lambda^2; nonpositive for every lambda.
inline double g_q(const WaveProfile& wave, cplx lambda, double rtol = 1e-10) {
  const double g = wave.gamma();
  return floquet_multipliers(monodromy_q(wave, g * g * lambda * lambda, rtol))
      .g_value;
}

/// Max-norm of M_q - exp(-c gamma lambda T) H M_p H^{-1} with
/// H = [[1, 0], [-c gamma lambda, 1]]; the two integrations are independent,
/// so this is the primary cross-check of the integrator.
inline double conjugation_residual(const WaveProfile& wave, cplx lambda,
                                   double rtol = 1e-10) {
  const double g = wave.gamma();
  const MonodromyData mp = monodromy_p(wave, lambda, rtol);
  const MonodromyData mq =
      monodromy_q(wave, g * g * lambda * lambda, rtol);
  const cplx cgl = wave.c() * g * lambda;
  const ComplexMat2 h{1.0, 0.0, -cgl, 1.0};
  const ComplexMat2 hinv{1.0, 0.0, cgl, 1.0};
  ComplexMat2 pred = h * mp.m * hinv;
  const cplx scale = std::exp(-cgl * wave.period());
  pred.m11 *= scale;
  pred.m12 *= scale;
  pred.m21 *= scale;
  pred.m22 *= scale;
  const ComplexMat2 diff{mq.m.m11 - pred.m11, mq.m.m12 - pred.m12,
                         mq.m.m21 - pred.m21, mq.m.m22 - pred.m22};
  return max_norm(diff);
}

}  // namespace floquet_sg
