// Command-line front end: classify | spectrum | bands | hill | imag-spectrum
// | certify | selfcheck.  All outputs are deterministic for fixed flags:
// fixed sample ordering, 17-significant-digit float formatting, no
// timestamps.  Exit codes: 0 success, 2 domain error, 3 I/O error,
// 4 convergence/accuracy error.

#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "floquet_sg/floquet_sg.hpp"

using namespace floquet_sg;

namespace {

struct RunConfig {
  double c = 0.0;
  double E = 0.0;
  double rtol = 1e-10;
  std::vector<double> box;
  int nx = 200, ny = 200;
  double mu_min = std::nan("");
  double mu_max = 0.5;
  int hill_n = 300;
  int imag_n = 400;
  int selfcheck_n = 20;
  double beta_max = 3.0;
  std::string out;
  std::string format = "csv";
};

Json config_echo(const std::string& command, const RunConfig& cfg) {
  auto j = Json::object()
               .set("command", command)
               .set("c", cfg.c)
               .set("E", cfg.E)
               .set("rtol", cfg.rtol);
  if (command == "spectrum") {
    auto box = Json::array();
    for (double b : cfg.box) box.push(b);
    j.set("box", std::move(box))
        .set("nx", cfg.nx)
        .set("ny", cfg.ny)
        .set("format", cfg.format)
        .set("out", cfg.out.empty() ? "spectrum" : cfg.out);
  } else if (command == "bands") {
    if (!std::isnan(cfg.mu_min)) j.set("mu_min", cfg.mu_min);
  } else if (command == "hill") {
    j.set("mu_min", cfg.mu_min).set("mu_max", cfg.mu_max).set("n", cfg.hill_n);
  } else if (command == "imag-spectrum") {
    j.set("beta_max", cfg.beta_max).set("n", cfg.imag_n);
  } else if (command == "selfcheck") {
    j.set("n", cfg.selfcheck_n);
  }
  return j;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out_path, std::ios::binary);
  if (!os) throw IoError("cannot open output file: " + out_path);
  os << text;
  if (!os) throw IoError("write failed: " + out_path);
}

Json certificate_json(const InstabilityCertificate& cert) {
  return Json::object()
      .set("lambda_star", json_complex(cert.lambda_star))
      .set("gp_residual", cert.gp_residual)
      .set("unimodular_multiplier", json_complex(cert.unimodular_multiplier))
      .set("unimodular_defect",
           std::abs(std::abs(cert.unimodular_multiplier) - 1.0))
      .set("path", Json::object()
                       .set("lambda0", json_complex(cert.lambda0))
                       .set("lambda1", json_complex(cert.lambda1)))
      .set("iterations", cert.iterations);
}

Json audit_json(const AuditReport& audit) {
  return Json::object()
      .set("n_samples", audit.n_samples)
      .set("max_g_p", audit.max_g_p)
      .set("worst_lambda", json_complex(audit.worst_lambda));
}

int run_classify(const RunConfig& cfg) {
  const WaveProfile wave(cfg.c, cfg.E);
  StabilityTolerances tol;
  tol.ode_rtol = cfg.rtol;
  const auto verdict = classify_stability(wave, tol);
  auto j = Json::object()
               .set("config", config_echo("classify", cfg))
               .set("c", cfg.c)
               .set("E", cfg.E)
               .set("gamma", wave.gamma())
               .set("class", to_string(wave.wave_class()))
               .set("T", wave.period())
               .set("verdict", verdict.stable ? "stable" : "unstable");
  if (verdict.certificate)
    j.set("certificate", certificate_json(*verdict.certificate));
  if (verdict.audit) j.set("audit", audit_json(*verdict.audit));
  emit(j.dump(2) + "\n", cfg.out);
  return 0;
}

int run_spectrum(const RunConfig& cfg) {
  const WaveProfile wave(cfg.c, cfg.E);
  const GridSpec grid{cfg.box[0], cfg.box[1], cfg.box[2], cfg.box[3], cfg.nx,
                      cfg.ny};
  const auto sc = spectrum_contours(wave, grid, cfg.rtol);

  const std::string base = cfg.out.empty() ? "spectrum" : cfg.out;
  auto files = Json::array();
  {
    std::ofstream os(base + "_grid.csv", std::ios::binary);
    if (!os) throw IoError("cannot open " + base + "_grid.csv");
    write_grid_csv(os, sc);
    files.push(base + "_grid.csv");
  }
  {
    std::ofstream os(base + "_contours.csv", std::ios::binary);
    if (!os) throw IoError("cannot open " + base + "_contours.csv");
    write_contours_csv(os, sc);
    files.push(base + "_contours.csv");
  }
  if (cfg.format == "svg") {
    std::ofstream os(base + ".svg", std::ios::binary);
    if (!os) throw IoError("cannot open " + base + ".svg");
    write_contour_svg(os, sc,
                      "zero level set of G_p, c=" + fmt17(cfg.c) +
                          ", E=" + fmt17(cfg.E));
    files.push(base + ".svg");
  }
  auto j =
      Json::object()
          .set("config", config_echo("spectrum", cfg))
          .set("class", to_string(wave.wave_class()))
          .set("files", std::move(files))
          .set("failed_points", sc.failed_points)
          .set("polylines", static_cast<std::int64_t>(sc.polylines.size()));
  std::cout << j.dump(2) << "\n";
  return 0;
}

int run_bands(const RunConfig& cfg) {
  const WaveProfile wave(cfg.c, cfg.E);
  const auto bs = band_structure(wave, cfg.mu_min, cfg.rtol);
  const auto oracle = lame_band_edges(wave);
  auto edges = Json::array();
  for (double e : bs.edges) edges.push(e);
  auto oracle_edges = Json::array();
  auto deltas = Json::array();
  for (int i = 0; i < 3; ++i) {
    oracle_edges.push(oracle[i]);
    deltas.push(i < static_cast<int>(bs.edges.size())
                    ? Json(bs.edges[i] - oracle[i])
                    : Json());
  }
  auto j = Json::object()
               .set("config", config_echo("bands", cfg))
               .set("class", to_string(wave.wave_class()))
               .set("T", bs.period)
               .set("half_period", bs.half_period)
               .set("edges", std::move(edges))
               .set("gap",
                    Json::object().set("lo", bs.gap.lo).set("hi", bs.gap.hi))
               .set("mu0_0", bs.mu0_0);
  if (bs.mu1_0) j.set("mu1_0", *bs.mu1_0);
  j.set("mu_star", bs.mu_star).set("beta_star", bs.beta_star);
  if (bs.alpha_star) j.set("alpha_star", *bs.alpha_star);
  j.set("d_delta_dmu_at_zero", bs.d_delta_dmu_at_zero)
      .set("lame_oracle", Json::object()
                              .set("edges", std::move(oracle_edges))
                              .set("edge_deltas", std::move(deltas)));
  emit(j.dump(2) + "\n", cfg.out);
  return 0;
}

int run_hill(const RunConfig& cfg) {
  const WaveProfile wave(cfg.c, cfg.E);
  if (!(cfg.mu_min < cfg.mu_max) || cfg.hill_n < 2)
    throw DomainError("hill: need mu_min < mu_max and n >= 2");
  std::vector<double> mu(cfg.hill_n), delta(cfg.hill_n);
  for (int i = 0; i < cfg.hill_n; ++i)
    mu[i] = cfg.mu_min + (cfg.mu_max - cfg.mu_min) * i / (cfg.hill_n - 1);
  parallel_for(cfg.hill_n,
               [&](int i) { delta[i] = delta_q(wave, mu[i], cfg.rtol); });
  std::ostringstream os;
  write_hill_csv(os, mu, delta);
  emit(os.str(), cfg.out);
  return 0;
}

int run_imag_spectrum(const RunConfig& cfg) {
  const WaveProfile wave(cfg.c, cfg.E);
  const auto spec =
      imaginary_axis_spectrum(wave, cfg.beta_max, cfg.imag_n, cfg.rtol);
  auto intervals = Json::array();
  for (const auto& iv : spec.beta_intervals)
    intervals.push(Json::object().set("lo", iv.lo).set("hi", iv.hi));
  auto j = Json::object()
               .set("config", config_echo("imag-spectrum", cfg))
               .set("class", to_string(wave.wave_class()))
               .set("beta_intervals", std::move(intervals));
  emit(j.dump(2) + "\n", cfg.out);
  return 0;
}

int run_certify(const RunConfig& cfg) {
  const WaveProfile wave(cfg.c, cfg.E);
  StabilityTolerances tol;
  tol.ode_rtol = cfg.rtol;
  const auto cert = find_unstable_eigenvalue(wave, tol);
  auto j = Json::object()
               .set("config", config_echo("certify", cfg))
               .set("class", to_string(wave.wave_class()))
               .set("certificate", certificate_json(cert));
  emit(j.dump(2) + "\n", cfg.out);
  return 0;
}

int run_selfcheck(const RunConfig& cfg) {
  const WaveProfile wave(cfg.c, cfg.E);
  const int n = cfg.selfcheck_n;
  const double rtol = cfg.rtol;
  // two sample pools: a wide one for the determinant identities, and one
  // scaled so the assembled matrix entries stay O(1) for the entrywise and
  // indicator identities
  std::mt19937_64 rng(1234567);
  std::uniform_real_distribution<double> wide(-2.0, 2.0);
  const double radius =
      std::min(2.0, 3.5 / (std::abs(wave.gamma()) * wave.period()));
  std::uniform_real_distribution<double> local(-radius, radius);
  std::vector<cplx> wide_lams(n), local_lams(n);
  for (int i = 0; i < n; ++i) wide_lams[i] = cplx(wide(rng), wide(rng));
  for (int i = 0; i < n; ++i) local_lams[i] = cplx(local(rng), local(rng));

  struct Check {
    std::string name;
    double value;
    double threshold;
    bool ok() const { return value < threshold; }
  };
  std::vector<Check> checks;

  double abel_p = 0.0, abel_q = 0.0;
  const cplx factor = 2.0 * wave.c() * wave.gamma() * wave.period();
  for (const cplx lam : wide_lams) {
    const auto mp = monodromy_p(wave, lam, rtol);
    const cplx exact = std::exp(factor * lam);
    abel_p = std::max(abel_p, std::abs(mp.det - exact) / std::abs(exact));
    const auto mq = monodromy_q(wave, lam, rtol);
    abel_q = std::max(abel_q, std::abs(mq.det - 1.0));
  }
  checks.push_back({"abel_determinant_p", abel_p, 1e-8});
  checks.push_back({"abel_determinant_q", abel_q, 1e-8});

  double conj_res = 0.0, sym_res = 0.0, identity_res = 0.0, gq_max = -1e300;
  const double cgT = wave.c() * wave.gamma() * wave.period();
  for (const cplx lam : local_lams) {
    conj_res = std::max(conj_res, conjugation_residual(wave, lam, rtol));
    const double gp = g_p(wave, lam, rtol);
    const double gq = g_q(wave, lam, rtol);
    sym_res =
        std::max(sym_res, std::abs(gp - g_p(wave, std::conj(lam), rtol)));
    sym_res = std::max(sym_res, std::abs(gp - g_p(wave, -lam, rtol)));
    const double drift = cgT * lam.real();
    identity_res = std::max(identity_res, std::abs(gp - drift * drift - gq));
    gq_max = std::max(gq_max, gq);
  }
  checks.push_back({"conjugation_identity", conj_res, 1e-8});
  checks.push_back({"gp_symmetry", sym_res, 1e-8});
  checks.push_back({"gp_gq_identity", identity_res, 1e-8});
  checks.push_back({"gq_nonpositive", gq_max, 1e-12});

  try {
    const auto audit = verify_mq_zero(wave, rtol);
    checks.push_back({"mq_zero_form", audit.residual, 1e-6});
  } catch (const AccuracyError&) {
    checks.push_back({"mq_zero_form", 1.0, 1e-6});
  }

  const auto bs = band_structure(wave, std::nan(""), rtol);
  const auto oracle = lame_band_edges(wave);
  double edge_res = 1.0;
  if (bs.edges.size() == 3) {
    edge_res = 0.0;
    for (int i = 0; i < 3; ++i)
      edge_res = std::max(edge_res, std::abs(bs.edges[i] - oracle[i]));
  }
  checks.push_back({"lame_band_edges", edge_res, 1e-7});

  bool all_ok = true;
  for (const auto& ch : checks) {
    all_ok = all_ok && ch.ok();
    std::cout << (ch.ok() ? "ok   " : "FAIL ") << ch.name
              << "  value=" << fmt17(ch.value)
              << "  threshold=" << fmt17(ch.threshold) << "\n";
  }
  std::cout << (all_ok ? "selfcheck passed" : "selfcheck FAILED")
            << " for c=" << fmt17(cfg.c) << " E=" << fmt17(cfg.E) << "\n";
  return all_ok ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Floquet spectra and spectral stability of periodic traveling waves "
      "of the sine-Gordon equation"};
  app.require_subcommand(1);

  RunConfig cfg;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--c", cfg.c, "wave speed")->required();
    sub->add_option("--E", cfg.E, "total energy")->required();
    sub->add_option("--rtol", cfg.rtol, "ODE tolerance (default 1e-10)")
        ->envname("FLOQUET_SG_RTOL");
  };

  auto* classify_cmd =
      app.add_subcommand("classify", "wave class and stability verdict");
  add_common(classify_cmd);
  classify_cmd->add_option("--out", cfg.out, "write JSON to a file");

  auto* spectrum_cmd = app.add_subcommand(
      "spectrum", "G_p on a grid plus its zero-level contours");
  add_common(spectrum_cmd);
  spectrum_cmd->add_option("--box", cfg.box, "RE_MIN RE_MAX IM_MIN IM_MAX")
      ->expected(4)
      ->required();
  spectrum_cmd->add_option("--nx", cfg.nx, "grid points (real axis)");
  spectrum_cmd->add_option("--ny", cfg.ny, "grid points (imaginary axis)");
  spectrum_cmd->add_option("--format", cfg.format, "csv or svg")
      ->check(CLI::IsMember({"csv", "svg"}));
  spectrum_cmd->add_option("--out", cfg.out, "output base name");

  auto* bands_cmd =
      app.add_subcommand("bands", "Hill band structure and gap data");
  add_common(bands_cmd);
  bands_cmd->add_option("--mu-min", cfg.mu_min, "scan window lower end");
  bands_cmd->add_option("--out", cfg.out, "write JSON to a file");

  auto* hill_cmd =
      app.add_subcommand("hill", "table of the Hill discriminant");
  add_common(hill_cmd);
  hill_cmd->add_option("--mu-min", cfg.mu_min, "table start")->required();
  hill_cmd->add_option("--mu-max", cfg.mu_max, "table end")->required();
  hill_cmd->add_option("--n", cfg.hill_n, "number of samples (default 300)");
  hill_cmd->add_option("--out", cfg.out, "write CSV to a file");

  auto* imag_cmd = app.add_subcommand(
      "imag-spectrum", "spectrum intervals on the imaginary axis");
  add_common(imag_cmd);
  imag_cmd->add_option("--beta-max", cfg.beta_max, "scan limit")->required();
  imag_cmd->add_option("--n", cfg.imag_n, "number of samples (default 400)");
  imag_cmd->add_option("--out", cfg.out, "write JSON to a file");

  auto* certify_cmd =
      app.add_subcommand("certify", "instability certificate");
  add_common(certify_cmd);
  certify_cmd->add_option("--out", cfg.out, "write JSON to a file");

  auto* selfcheck_cmd = app.add_subcommand(
      "selfcheck", "run the identity suite and report residuals");
  add_common(selfcheck_cmd);
  selfcheck_cmd->add_option("--n", cfg.selfcheck_n,
                            "samples per identity (default 20)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (classify_cmd->parsed()) return run_classify(cfg);
    if (spectrum_cmd->parsed()) return run_spectrum(cfg);
    if (bands_cmd->parsed()) return run_bands(cfg);
    if (hill_cmd->parsed()) return run_hill(cfg);
    if (imag_cmd->parsed()) return run_imag_spectrum(cfg);
    if (certify_cmd->parsed()) return run_certify(cfg);
    if (selfcheck_cmd->parsed()) return run_selfcheck(cfg);
  } catch (const DomainError& e) {
    std::cout << Json::object().set("error", e.what()).dump(2) << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cout << Json::object().set("error", e.what()).dump(2) << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cout << Json::object().set("error", e.what()).dump(2) << "\n";
    return 4;
  }
  return 1;
}
