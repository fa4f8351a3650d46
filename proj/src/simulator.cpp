#include "axonctl/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "axonctl/diagnostics.hpp"

namespace axonctl {

namespace {

void fault(const std::string& what, double t, double value) {
  std::ostringstream os;
  os << "solver fault at t = " << t << ": " << what << " (value " << value
     << ")";
  throw SolverFault(os.str());
}

}  // namespace

void check_scheme(const SchemeParams& sch, const BioParams& bio, double l_0) {
  if (sch.theta >= 0.5) return;
  const double h = 1.0 / (sch.n_grid - 1);
  const double number = sch.dt * bio.D / (l_0 * h * l_0 * h);
  const double cone_number = 1.5 * sch.dt * bio.D / (bio.l_c * l_0 * h);
  if (number > 0.5 || cone_number > 0.5) {
    std::ostringstream os;
    os << "scheme: theta = " << sch.theta
       << " is explicit-dominant but dt D/(l0 h)^2 = " << number
       << " and the cone-row number 1.5 dt D/(l_c l0 h) = " << cone_number
       << " must both stay below 0.5; use theta >= 0.5 or shrink dt";
    throw ConfigError(os.str());
  }
}

void theta_step(const BioParams& bio, const ThetaStepArgs& args,
                std::vector<double>& c) {
  const int n = static_cast<int>(c.size());
  if (n < 4) {
    throw std::invalid_argument("theta_step: need at least 4 nodes");
  }
  const double h = 1.0 / (n - 1);
  const double alpha = bio.D / (args.l * args.l);
  const double dt = args.dt;
  const double th = args.theta;
  const bool cone = args.right == RightBC::cone;

  // Unknowns: interior plus the flux end; the far end is data for a
  // Dirichlet condition and an unknown otherwise (ghost Neumann or the cone
  // balance row).
  const int m = args.right == RightBC::dirichlet ? n - 1 : n;

  auto vel = [&](int i) { return (i * h * args.ldot - bio.a) / args.l; };
  auto lower_of = [&](int i) { return alpha / (h * h) - vel(i) / (2.0 * h); };
  auto upper_of = [&](int i) { return alpha / (h * h) + vel(i) / (2.0 * h); };
  const double diag_c = -2.0 * alpha / (h * h) - bio.g;

  // Cone balance row (only the stiff, linear-in-c part; the quadratic
  // microtubule reaction is evaluated at the old cone value):
  //   cdot_{n-1} = cone_d c_{n-1} + cone_m c_{n-2} + cone_mm c_{n-3} + N
  const double grad_scale = bio.D / (args.l * bio.l_c * 2.0 * h);
  const double cone_d = (bio.a - bio.g * bio.l_c) / bio.l_c - 3.0 * grad_scale;
  const double cone_m = 4.0 * grad_scale;
  const double cone_mm = -grad_scale;
  const double cone_N =
      cone ? -(bio.r_g * c[n - 1] + bio.rtilde_g * bio.l_c) *
                 (c[n - 1] - bio.c_inf) / bio.l_c
           : 0.0;

  // Affine spatial operator applied to a field with given boundary data.
  auto apply_affine = [&](const std::vector<double>& f, double grad0,
                          double dirichlet, double grad1,
                          std::vector<double>& out) {
    out[0] = (2.0 * alpha / (h * h)) * (f[1] - f[0]) - bio.g * f[0] +
             (vel(0) - 2.0 * alpha / h) * grad0;
    for (int i = 1; i <= m - 2; ++i) {
      out[i] = lower_of(i) * f[i - 1] + diag_c * f[i] + upper_of(i) * f[i + 1];
    }
    switch (args.right) {
      case RightBC::dirichlet: {
        const int i = m - 1;
        out[i] = lower_of(i) * f[i - 1] + diag_c * f[i] +
                 upper_of(i) * dirichlet;
        break;
      }
      case RightBC::neumann: {
        const int i = m - 1;
        out[i] = (2.0 * alpha / (h * h)) * (f[i - 1] - f[i]) - bio.g * f[i] +
                 (vel(i) + 2.0 * alpha / h) * grad1;
        break;
      }
      case RightBC::cone: {
        const int i = m - 1;
        out[i] = cone_d * f[i] + cone_m * f[i - 1] + cone_mm * f[i - 2] +
                 cone_N;
        break;
      }
    }
  };

  std::vector<double> expl(m);
  apply_affine(c, args.grad0_old, args.dirichlet_old, args.grad1_old, expl);

  std::vector<double> rhs(m);
  for (int i = 0; i < m; ++i) {
    rhs[i] = c[i] + (1.0 - th) * dt * expl[i];
    if (!args.source_old.empty()) {
      rhs[i] += (1.0 - th) * dt * args.source_old[i];
    }
    if (!args.source_new.empty()) rhs[i] += th * dt * args.source_new[i];
  }
  // Implicit-side boundary sources (the affine part at the new level).
  rhs[0] += th * dt * (vel(0) - 2.0 * alpha / h) * args.grad0_new;
  switch (args.right) {
    case RightBC::dirichlet:
      rhs[m - 1] += th * dt * upper_of(m - 1) * args.dirichlet_new;
      break;
    case RightBC::neumann:
      rhs[m - 1] += th * dt * (vel(m - 1) + 2.0 * alpha / h) * args.grad1_new;
      break;
    case RightBC::cone:
      rhs[m - 1] += th * dt * cone_N;
      break;
  }

  // Matrix I - theta dt A, rows 0..m-2 tridiagonal.
  std::vector<double> lo(m), di(m), up(m);
  di[0] = 1.0 - th * dt * diag_c;
  up[0] = -th * dt * (2.0 * alpha / (h * h));
  for (int i = 1; i < m - 1; ++i) {
    lo[i] = -th * dt * lower_of(i);
    di[i] = 1.0 - th * dt * diag_c;
    up[i] = -th * dt * upper_of(i);
  }

  // Forward elimination through row m-2 leaves c_i + up'_i c_{i+1} = r'_i.
  auto eliminate_through = [&](int rows) {
    for (int i = 1; i <= rows; ++i) {
      const double w = lo[i] / di[i - 1];
      di[i] -= w * up[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
  };

  if (args.right != RightBC::cone) {
    const int i = m - 1;
    di[i] = 1.0 - th * dt * diag_c;
    up[i] = 0.0;
    if (args.right == RightBC::dirichlet) {
      lo[i] = -th * dt * lower_of(i);
    } else {
      lo[i] = -th * dt * (2.0 * alpha / (h * h));
    }
    eliminate_through(m - 1);
    rhs[m - 1] /= di[m - 1];
    for (int i2 = m - 2; i2 >= 0; --i2) {
      rhs[i2] = (rhs[i2] - up[i2] * rhs[i2 + 1]) / di[i2];
    }
  } else {
    // The cone row reaches two nodes in: eliminate the tridiagonal block,
    // then substitute the last two relations into the cone row.
    eliminate_through(m - 2);
    const double A3 = -th * dt * cone_mm;  // coefficient of c_{n-3}
    const double A2 = -th * dt * cone_m;
    const double A1 = 1.0 - th * dt * cone_d;
    // normalized relations: c_i = (rhs_i - up_i c_{i+1}) / di_i
    const double r3 = rhs[m - 3] / di[m - 3], u3 = up[m - 3] / di[m - 3];
    const double r2 = rhs[m - 2] / di[m - 2];
    const double u2 = up[m - 2] / di[m - 2];
    // substitute c_{n-3} = r3 - u3 c_{n-2}:
    const double B2 = A2 - A3 * u3;
    double Rlast = rhs[m - 1] - A3 * r3;
    // substitute c_{n-2} = r2 - u2 c_{n-1}:
    const double B1 = A1 - B2 * u2;
    Rlast -= B2 * r2;
    const double c_last = Rlast / B1;
    rhs[m - 1] = c_last;
    rhs[m - 2] = r2 - u2 * c_last;
    for (int i2 = m - 3; i2 >= 0; --i2) {
      rhs[i2] = (rhs[i2] - up[i2] * rhs[i2 + 1]) / di[i2];
    }
  }

  for (int i = 0; i < m; ++i) c[i] = rhs[i];
  if (args.right == RightBC::dirichlet) c[n - 1] = args.dirichlet_new;
}

SimState step(const SimState& state, const BioParams& bio, double q_s,
              const SchemeParams& sch) {
  const int n = static_cast<int>(state.c.size());
  if (!(state.l > 0) || !std::isfinite(state.l)) {
    fault("length must stay positive and finite", state.t, state.l);
  }
  if (state.l >= 1.0) fault("length left the modeled range", state.t, state.l);
  if (!std::isfinite(state.c_c)) {
    fault("cone concentration", state.t, state.c_c);
  }
  if (!std::isfinite(q_s)) fault("applied flux", state.t, q_s);

  SimState next = state;
  const double ldot = bio.r_g * (state.c_c - bio.c_inf);

  // The cone balance joins the theta-implicit solve as the last matrix row:
  // through the implicit diffusion step the whole profile equilibrates to
  // the boundary data within one dt, so any explicit treatment of the
  // cone/gradient coupling is a delayed feedback loop with gain far above
  // one at the default discretization.
  ThetaStepArgs args;
  args.l = state.l;
  args.ldot = ldot;
  args.dt = sch.dt;
  args.theta = sch.theta;
  args.grad0_old = args.grad0_new = -state.l * q_s;
  args.right = RightBC::cone;
  theta_step(bio, args, next.c);

  next.c_c = next.c[n - 1];
  next.l = state.l + sch.dt * ldot;  // discrete length law, start-of-step rate
  next.ldot = bio.r_g * (next.c_c - bio.c_inf);
  next.t = state.t + sch.dt;

  if (!(next.l > 0)) fault("length collapsed", next.t, next.l);
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(next.c[i])) {
      fault("concentration at node " + std::to_string(i), next.t, next.c[i]);
    }
  }
  return next;
}

double closed_loop_flux(const SimState& state, const BioParams& bio,
                        const SteadyState& ss, Controller& controller,
                        const SchemeParams& sch) {
  auto residual = [&](double q) {
    const SimState trial = step(state, bio, q, sch);
    auto [u, X] = error_field(trial, ss, bio);
    const double U =
        control_U(controller.tables_for(trial.l), u, X, controller.rule());
    return (ss.q_s_star - U) - q;
  };
  auto [u0, X0] = error_field(state, ss, bio);
  const double q0 =
      ss.q_s_star -
      control_U(controller.tables_for(state.l), u0, X0, controller.rule());
  const double r0 = residual(q0);
  if (r0 == 0.0) return q0;
  const double dq = std::abs(q0) > 1e-12 ? 0.5 * std::abs(q0) : 1e-12;
  const double r1 = residual(q0 + dq);
  const double slope = (r1 - r0) / dq;
  if (slope == 0.0 || !std::isfinite(slope)) return q0;
  return q0 - r0 / slope;
}

SimState initial_state(const BioParams& bio, const ScenarioConfig& sc) {
  SimState s;
  s.t = 0;
  s.l = sc.l_0;
  s.c.resize(sc.n_grid);
  const double h = 1.0 / (sc.n_grid - 1);
  for (int i = 0; i < sc.n_grid; ++i) {
    s.c[i] = sc.c0.value_at(i * h, bio.c_inf);
    if (!(s.c[i] > 0)) {
      throw ConfigError("initial concentration must be positive everywhere");
    }
  }
  s.c_c = s.c.back();
  s.ldot = bio.r_g * (s.c_c - bio.c_inf);
  return s;
}

std::vector<RunRecord> run(const Config& cfg, const SteadyState& ss,
                           const LyapunovPair& lp, const LyapunovWeights& lw,
                           Controller& controller, RunHooks hooks) {
  const BioParams& bio = cfg.bio;
  const ScenarioConfig& sc = cfg.scenario;
  SchemeParams sch{sc.theta, sc.n_grid, sc.dt};
  check_scheme(sch, bio, sc.l_0);

  SimState state = hooks.initial ? *hooks.initial : initial_state(bio, sc);
  const long n_steps = std::lround(sc.t_final / sc.dt);
  std::vector<RunRecord> records;
  records.reserve(n_steps + 1);

  const double q_s_open = std::isfinite(cfg.control.q_s_const)
                              ? cfg.control.q_s_const
                              : ss.q_s_star;

  std::vector<double> sigma(sc.n_grid);
  for (int i = 0; i < sc.n_grid; ++i) sigma[i] = i / double(sc.n_grid - 1);

  for (long k = 0; true; ++k) {
    double q_s = 0;
    switch (cfg.control.mode) {
      case ControlMode::closed_loop:
        q_s = closed_loop_flux(state, bio, ss, controller, sch);
        break;
      case ControlMode::open_loop_constant:
        q_s = q_s_open;
        break;
      case ControlMode::zero_input:
        q_s = ss.q_s_star;
        break;
    }
    const double U = -(q_s - ss.q_s_star);

    // Bind the tables only after the flux search: probing may rebuild the
    // controller's cache.
    auto [u, X] = error_field(state, ss, bio);
    const KernelTables& tables = controller.tables_for(state.l);

    const TargetField tf = forward_transform(u, X, tables, controller.rule());
    RunRecord rec;
    rec.t = state.t;
    rec.l = state.l;
    rec.c_c = state.c_c;
    rec.q_s = q_s;
    rec.U = U;
    rec.Z = h1_norm(u, X, state.l);
    rec.V = lyapunov_value(tf, X, lp, lw, cfg.control.gamma, state.l).V;
    rec.w0 = tf.w0;
    rec.wx_l = tf.wx_l;
    rec.bc_residual = tf.bc0_residual;
    records.push_back(rec);

    if (hooks.snapshots && hooks.snapshot_every > 0 &&
        (k % hooks.snapshot_every == 0 || k == n_steps)) {
      hooks.snapshots->append(state.t, state.l, sigma, state.c, u, tf.w);
    }

    if (k == n_steps) break;
    state = step(state, bio, q_s, sch);
  }
  if (hooks.final_state) *hooks.final_state = state;
  return records;
}

}  // namespace axonctl
