// Command-line front end: steady-state dumps, kernel tables, the invariant
// verification report, full closed-loop runs, and one-parameter sweeps.

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "axonctl/diagnostics.hpp"
#include "axonctl/simulator.hpp"

using namespace axonctl;

namespace {

Config load_or_default(const std::string& path) {
  if (path.empty()) return Config{};
  return load_config(path);
}

struct Components {
  LinearSystem ls;
  SteadyState ss;
  AugmentedSystem aug;
  LyapunovPair lp;
  LyapunovWeights lw;
};

Components build_components(const Config& cfg) {
  Components comp;
  comp.ls = build_linear_system(cfg.bio, cfg.control);
  comp.ss = build_steady_state(cfg.bio, cfg.scenario.l_s);
  comp.aug = build_augmented(comp.ls, cfg.bio);
  comp.lp = solve_lyapunov(comp.ls, Eigen::Matrix2d::Identity());
  comp.lw = lyapunov_weights(cfg.bio, cfg.control, comp.ls, comp.lp,
                             2.0 * comp.ss.l_s);
  return comp;
}

int cmd_steady(const Config& cfg, double from, double to, int points,
               const std::string& out_path) {
  const SteadyState ss = build_steady_state(cfg.bio, cfg.scenario.l_s);
  if (to <= from) to = ss.l_s;
  std::printf("steady state for l_s = %.4f um\n", ss.l_s * 1e6);
  std::printf("  lambda+ = %.9g 1/m   lambda- = %.9g 1/m\n", ss.lambda_plus,
              ss.lambda_minus);
  std::printf("  K+ = %.9g   K- = %.9g\n", ss.K_plus, ss.K_minus);
  std::printf("  q_s* = %.9g mol/m^4\n", ss.q_s_star);
  std::printf("  residual over 101 points: %.3e\n",
              steady_residual(ss, cfg.bio, 101));
  std::FILE* f = std::fopen(out_path.c_str(), "w");
  if (!f) {
    std::fprintf(stderr, "cannot open %s\n", out_path.c_str());
    return 1;
  }
  std::fprintf(f, "x,c_eq,c_eq_prime\n");
  for (int i = 0; i < points; ++i) {
    const double x = from + (to - from) * i / (points - 1);
    std::fprintf(f, "%.17g,%.17g,%.17g\n", x, c_eq(ss, cfg.bio, x),
                 c_eq_prime(ss, cfg.bio, x));
  }
  std::fclose(f);
  std::printf("wrote %s (%d rows)\n", out_path.c_str(), points);
  return 0;
}

int cmd_kernel(const Config& cfg, int points, const std::string& out_path) {
  const Components comp = build_components(cfg);
  const double l = comp.ss.l_s;
  const KernelTables T(comp.aug, cfg.control.gamma, l, points);
  std::FILE* f = std::fopen(out_path.c_str(), "w");
  if (!f) {
    std::fprintf(stderr, "cannot open %s\n", out_path.c_str());
    return 1;
  }
  // phi sampled at the transform argument x - l_s; p at the control
  // position x.
  std::fprintf(f, "x,phi1,phi2,dphi1,dphi2,p1,p2\n");
  for (int i = 0; i < points; ++i) {
    const double x = i * T.spacing();
    const Eigen::Vector2d phi = T.phi(points - 1 - i);
    const Eigen::Vector2d dphi = T.phi_prime(points - 1 - i);
    const Eigen::RowVector2d p = T.p_row(i);
    std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", x, phi(0),
                 phi(1), dphi(0), dphi(1), p(0), p(1));
  }
  std::fclose(f);
  std::printf("wrote %s (%d rows)\n", out_path.c_str(), points);

  const KernelResidualReport rep = kernel_residuals(comp.aug, l, points);
  std::printf("kernel residual report (normalized, %d samples):\n", points);
  std::printf("  pde          %.3e\n", rep.pde);
  std::printf("  diagonal     %.3e\n", rep.diagonal);
  std::printf("  moving end   %.3e\n", rep.boundary);
  std::printf("  phi ODE      %.3e\n", rep.phi_ode);
  std::printf("  phi(0)       %.3e\n", rep.phi_bc_value);
  std::printf("  phi'(0)      %.3e\n", rep.phi_bc_deriv);
  std::printf("  inverse ODE  %.3e\n", rep.inverse_ode);
  return rep.max() < 1e-8 ? 0 : 1;
}

int cmd_verify(const Config& cfg) {
  int failures = 0;
  auto check = [&](const char* label, double value, double bound) {
    const bool ok = value < bound;
    std::printf("%s  %-46s %.3e (< %.0e)\n", ok ? "PASS" : "FAIL", label,
                value, bound);
    if (!ok) ++failures;
  };

  const Components comp = build_components(cfg);
  const Eigen::IOFormat fmt(9, 0, ", ", "; ", "[", "]");
  std::cout << "linearized system:\n";
  std::cout << "  a_tilde = " << comp.ls.a_tilde
            << " 1/s, beta = " << comp.ls.beta << " m/s\n";
  std::cout << "  A = " << comp.ls.A.format(fmt) << "\n";
  std::cout << "  B = " << comp.ls.B.transpose().format(fmt)
            << "^T, C = " << comp.ls.C.transpose().format(fmt) << "^T\n";
  std::cout << "  K = " << comp.ls.K.transpose().format(fmt) << "\n";
  std::cout << "  eigenvalues of A+BK^T: "
            << comp.ls.closed_loop().eigenvalues().transpose() << "\n";
  {
    ControlParams published;
    published.k1 = -0.1;
    published.k2 = 1e13;
    try {
      build_linear_system(cfg.bio, published);
      std::cout << "  published gains (-0.1, 1e13): Hurwitz\n";
    } catch (const NotHurwitzError& e) {
      std::cout << "  published gains (-0.1, 1e13): NOT Hurwitz ("
                << e.what() << ")\n";
    }
  }
  std::cout << "  P = " << comp.lp.P.format(fmt)
            << ", lambda(P) in [" << comp.lp.lambda_min_P << ", "
            << comp.lp.lambda_max_P << "]\n";
  std::cout << "  energy constants: d1 = " << comp.lw.d1
            << ", d2 = " << comp.lw.d2 << ", alpha = " << comp.lw.alpha
            << ", v_bar = " << comp.lw.v_bar << "\n\n";

  check("steady residual (101 pts)",
        steady_residual(comp.ss, cfg.bio, 101), 1e-10);

  const Eigen::Matrix2d res =
      comp.ls.closed_loop().transpose() * comp.lp.P +
      comp.lp.P * comp.ls.closed_loop() + comp.lp.Q;
  check("Lyapunov equation residual", res.norm() / comp.lp.P.norm(), 1e-10);

  const KernelResidualReport rep =
      kernel_residuals(comp.aug, comp.ss.l_s, 201);
  check("kernel residual report, max of 7", rep.max(), 1e-8);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(-2.0 * comp.ss.l_s,
                                             2.0 * comp.ss.l_s);
  double worst = 0;
  for (int i = 0; i < 50; ++i) {
    worst = std::max(worst, semigroup_residual(comp.aug, uni(rng), uni(rng)));
  }
  check("semigroup residual", worst, 1e-11);

  // Transform checks on random compatible states.
  const int n = cfg.scenario.n_grid;
  const KernelTables T(comp.aug, cfg.control.gamma, comp.ss.l_s, n);
  std::uniform_real_distribution<double> u01(-1.0, 1.0);
  double worst_rt = 0, worst_wl = 0;
  bool sanity_ok = true;
  for (int trial = 0; trial < 20; ++trial) {
    const double a0 = u01(rng), a1 = u01(rng), b1 = u01(rng), b2 = u01(rng);
    const double p1 = u01(rng), p2 = u01(rng);
    std::vector<double> u(n);
    for (int i = 0; i < n; ++i) {
      const double s = i / double(n - 1);
      u[i] = a0 + a1 * s + b1 * std::sin(M_PI * s + p1) +
             b2 * std::sin(2.0 * M_PI * s + p2);
    }
    Eigen::Vector2d X;
    X(1) = u01(rng) * 1e-6;
    X(0) = u[n - 1] - comp.ls.C(1) * X(1);
    for (double& v : u) v *= 1e-3;
    X *= 1e-3;
    double umax = 0;
    for (double v : u) umax = std::max(umax, std::abs(v));
    const TargetField tf = forward_transform(u, X, T, kDefaultRule);
    worst_wl = std::max(worst_wl, tf.bcl_residual / umax);
    worst_rt = std::max(worst_rt, round_trip(u, X, T, kDefaultRule));
    const SanityChecks sc = sanity_inequalities(tf, cfg.control.gamma,
                                                comp.ss.l_s,
                                                2.0 * comp.ss.l_s);
    sanity_ok = sanity_ok && sc.poincare_w.ok() && sc.poincare_wx.ok() &&
                sc.agmon.ok();
  }
  check("transform moving-end residual", worst_wl, 1e-8);
  check("transform round trip", worst_rt, 1e-6);
  std::printf("%s  %-46s (inequality spot checks)\n",
              sanity_ok ? "PASS" : "FAIL",
              "Poincare/Agmon inequalities on sampled fields");
  if (!sanity_ok) ++failures;

  std::printf("\n%d check(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}

int cmd_run(const Config& cfg) {
  const Components comp = build_components(cfg);
  Controller ctl(comp.aug, comp.ss, cfg.control.gamma, cfg.scenario.n_grid,
                 kDefaultRule);
  SnapshotWriter snapshots(cfg.output.snapshot_path);
  RunHooks hooks;
  hooks.snapshots = &snapshots;
  hooks.snapshot_every = cfg.scenario.snapshot_every;
  SimState final_state;
  hooks.final_state = &final_state;

  const std::vector<RunRecord> records =
      run(cfg, comp.ss, comp.lp, comp.lw, ctl, hooks);
  write_timeseries(records, cfg.output.timeseries_path);
  write_plot_script(cfg.output.plot_script_path, cfg.output.timeseries_path,
                    cfg.output.snapshot_path);

  const RunRecord& last = records.back();
  std::printf("mode %s, %zu records\n", to_string(cfg.control.mode).c_str(),
              records.size());
  std::printf("  l: %.4f um -> %.4f um (set point %.4f um, rel err %.3e)\n",
              records.front().l * 1e6, last.l * 1e6, comp.ss.l_s * 1e6,
              std::abs(last.l - comp.ss.l_s) / comp.ss.l_s);
  std::printf("  c_c: %.6g -> %.6g mol/m^3 (c_inf %.6g)\n",
              records.front().c_c, last.c_c, cfg.bio.c_inf);
  std::printf("  final U = %.3e mol/m^4, q_s = %.3e mol/m^4\n", last.U,
              last.q_s);
  try {
    std::vector<double> t, Z;
    for (const RunRecord& r : records) {
      t.push_back(r.t);
      Z.push_back(r.Z);
    }
    const DecayFit fit = decay_fit(t, Z, 0.2 * cfg.scenario.t_final,
                                   0.8 * cfg.scenario.t_final);
    std::printf("  H1 decay fit on [0.2, 0.8] T: kappa = %.4g 1/s, R^2 = "
                "%.6f\n",
                fit.kappa, fit.r2);
  } catch (const std::exception& e) {
    std::printf("  H1 decay fit unavailable: %s\n", e.what());
  }
  std::printf("wrote %s, %s, %s\n", cfg.output.timeseries_path.c_str(),
              cfg.output.snapshot_path.c_str(),
              cfg.output.plot_script_path.c_str());
  return 0;
}

int cmd_sweep(Config cfg, const std::string& param, double from, double to,
              int count, bool log_spacing, const std::string& out_path) {
  std::map<std::string, double*> params{
      {"bio.D", &cfg.bio.D},
      {"bio.a", &cfg.bio.a},
      {"bio.g", &cfg.bio.g},
      {"bio.r_g", &cfg.bio.r_g},
      {"bio.rtilde_g", &cfg.bio.rtilde_g},
      {"bio.l_c", &cfg.bio.l_c},
      {"bio.c_inf", &cfg.bio.c_inf},
      {"control.gamma", &cfg.control.gamma},
      {"control.k1", &cfg.control.k1},
      {"control.k2", &cfg.control.k2},
      {"scenario.l_s", &cfg.scenario.l_s},
      {"scenario.l_0", &cfg.scenario.l_0},
      {"scenario.t_final", &cfg.scenario.t_final},
      {"scenario.dt", &cfg.scenario.dt},
      {"scenario.theta", &cfg.scenario.theta},
  };
  auto it = params.find(param);
  if (it == params.end()) {
    std::fprintf(stderr, "unknown sweep parameter '%s'\n", param.c_str());
    return 1;
  }
  std::FILE* f = std::fopen(out_path.c_str(), "w");
  if (!f) {
    std::fprintf(stderr, "cannot open %s\n", out_path.c_str());
    return 1;
  }
  std::fprintf(f, "%s,final_rel_len_err,kappa,r2\n", param.c_str());
  for (int i = 0; i < count; ++i) {
    const double frac = count == 1 ? 0.0 : i / double(count - 1);
    const double value = log_spacing
                             ? from * std::pow(to / from, frac)
                             : from + (to - from) * frac;
    *it->second = value;
    try {
      const Components comp = build_components(cfg);
      Controller ctl(comp.aug, comp.ss, cfg.control.gamma,
                     cfg.scenario.n_grid, kDefaultRule);
      const auto records = run(cfg, comp.ss, comp.lp, comp.lw, ctl);
      const double lerr =
          std::abs(records.back().l - comp.ss.l_s) / comp.ss.l_s;
      double kappa = std::nan(""), r2 = std::nan("");
      try {
        std::vector<double> t, Z;
        for (const RunRecord& r : records) {
          t.push_back(r.t);
          Z.push_back(r.Z);
        }
        const DecayFit fit = decay_fit(t, Z, 0.2 * cfg.scenario.t_final,
                                       0.8 * cfg.scenario.t_final);
        kappa = fit.kappa;
        r2 = fit.r2;
      } catch (const std::exception&) {
      }
      std::fprintf(f, "%.17g,%.17g,%.17g,%.17g\n", value, lerr, kappa, r2);
      std::printf("%s = %-12.6g  final rel len err %.3e  kappa %.4g\n",
                  param.c_str(), value, lerr, kappa);
    } catch (const std::exception& e) {
      std::fprintf(f, "%.17g,nan,nan,nan\n", value);
      std::printf("%s = %-12.6g  failed: %s\n", param.c_str(), value,
                  e.what());
    }
  }
  std::fclose(f);
  std::printf("wrote %s\n", out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"boundary-controlled axon growth simulator"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("-c,--config", config_path, "config file (defaults apply)")
      ->check(CLI::ExistingFile);

  auto* steady = app.add_subcommand("steady", "steady-state profile dump");
  double from = 0.0, to = -1.0;
  int points = 201;
  std::string out = "steady.csv";
  steady->add_option("--from", from, "range start [m]");
  steady->add_option("--to", to, "range end [m] (default l_s)");
  steady->add_option("--points", points, "sample count");
  steady->add_option("-o,--output", out, "output CSV");

  auto* kernel = app.add_subcommand("kernel", "gain-kernel tables and "
                                              "residual report");
  int kpoints = 201;
  std::string kout = "kernel.csv";
  kernel->add_option("--points", kpoints, "sample count");
  kernel->add_option("-o,--output", kout, "output CSV");

  auto* verify =
      app.add_subcommand("verify", "system report and invariant suite");

  auto* runcmd = app.add_subcommand("run", "simulate the configured scenario");

  auto* sweep = app.add_subcommand("sweep", "vary one parameter over a range");
  std::string param;
  double sfrom = 0, sto = 0;
  int scount = 5;
  bool slog = false;
  std::string sout = "sweep.csv";
  sweep->add_option("--param", param, "e.g. control.gamma")->required();
  sweep->add_option("--from", sfrom, "first value")->required();
  sweep->add_option("--to", sto, "last value")->required();
  sweep->add_option("--count", scount, "number of runs");
  sweep->add_flag("--log", slog, "logarithmic spacing");
  sweep->add_option("-o,--output", sout, "output CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    const Config cfg = load_or_default(config_path);
    if (steady->parsed()) return cmd_steady(cfg, from, to, points, out);
    if (kernel->parsed()) return cmd_kernel(cfg, kpoints, kout);
    if (verify->parsed()) return cmd_verify(cfg);
    if (runcmd->parsed()) return cmd_run(cfg);
    if (sweep->parsed()) {
      return cmd_sweep(cfg, param, sfrom, sto, scount, slog, sout);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
