#include "axonctl/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace axonctl {

namespace {

double trapz_sq(std::span<const double> f, double h) {
  double s = 0.5 * (f.front() * f.front() + f.back() * f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i] * f[i];
  return s * h;
}

}  // namespace

std::pair<std::vector<double>, Eigen::Vector2d> error_field(
    const SimState& state, const SteadyState& ss, const BioParams& bio) {
  const int n = static_cast<int>(state.c.size());
  std::vector<double> u(n);
  const double h = 1.0 / (n - 1);
  for (int i = 0; i < n; ++i) {
    u[i] = state.c[i] - c_eq(ss, bio, i * h * state.l);
  }
  Eigen::Vector2d X(state.c_c - bio.c_inf, state.l - ss.l_s);
  return {std::move(u), X};
}

std::vector<double> gradient_sigma(std::span<const double> f) {
  const int n = static_cast<int>(f.size());
  const double h = 1.0 / (n - 1);
  std::vector<double> g(n);
  g[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  for (int i = 1; i < n - 1; ++i) g[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  g[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  return g;
}

TargetField forward_transform(std::span<const double> u,
                              const Eigen::Vector2d& X,
                              const KernelTables& tables,
                              QuadratureRule rule) {
  const int n = tables.size();
  if (static_cast<int>(u.size()) != n) {
    throw std::invalid_argument("forward_transform: grid size mismatch");
  }
  const std::vector<double> I =
      tables.volterra_integral(u, KernelSide::forward, rule);
  TargetField tf;
  tf.w.resize(n);
  for (int i = 0; i < n; ++i) {
    tf.w[i] = u[i] - I[i] - tables.phi(n - 1 - i).dot(X);
  }
  const std::vector<double> ws = gradient_sigma(tf.w);
  const double l = tables.length();
  tf.w0 = tf.w[0];
  tf.wx0 = ws[0] / l;
  tf.wx_l = ws[n - 1] / l;
  tf.bc0_residual = std::abs(tf.wx0 - tables.gamma() * tf.w0);
  tf.bcl_residual = std::abs(tf.w[n - 1]);
  return tf;
}

std::vector<double> inverse_transform(std::span<const double> w,
                                      const Eigen::Vector2d& X,
                                      const KernelTables& tables,
                                      QuadratureRule rule) {
  const int n = tables.size();
  if (static_cast<int>(w.size()) != n) {
    throw std::invalid_argument("inverse_transform: grid size mismatch");
  }
  const std::vector<double> I =
      tables.volterra_integral(w, KernelSide::inverse, rule);
  std::vector<double> u(n);
  for (int i = 0; i < n; ++i) {
    u[i] = w[i] + I[i] + tables.phi_tilde(n - 1 - i).dot(X);
  }
  return u;
}

double round_trip(std::span<const double> u, const Eigen::Vector2d& X,
                  const KernelTables& tables, QuadratureRule rule) {
  const TargetField tf = forward_transform(u, X, tables, rule);
  const std::vector<double> rec = inverse_transform(tf.w, X, tables, rule);
  double err = 0, scale = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    err = std::max(err, std::abs(rec[i] - u[i]));
    scale = std::max(scale, std::abs(u[i]));
  }
  return scale > 0 ? err / scale : err;
}

double h1_norm(std::span<const double> u, std::span<const double> u_x,
               const Eigen::Vector2d& X, double l) {
  const double h = 1.0 / (static_cast<double>(u.size()) - 1.0);
  return l * trapz_sq(u, h) + l * trapz_sq(u_x, h) + X.squaredNorm();
}

double h1_norm(std::span<const double> u, const Eigen::Vector2d& X, double l) {
  std::vector<double> us = gradient_sigma(u);
  for (double& v : us) v /= l;  // d/dx = (1/l) d/dsigma
  return h1_norm(u, us, X, l);
}

EnergyReport lyapunov_value(const TargetField& tf, const Eigen::Vector2d& X,
                            const LyapunovPair& lp, const LyapunovWeights& lw,
                            double gamma, double l) {
  const double h = 1.0 / (static_cast<double>(tf.w.size()) - 1.0);
  std::vector<double> ws = gradient_sigma(tf.w);
  for (double& v : ws) v /= l;
  EnergyReport rep;
  rep.V1 = 0.5 * l * trapz_sq(tf.w, h);
  rep.V2 = 0.5 * l * trapz_sq(ws, h);
  rep.V3 = X.dot(lp.P * X);
  rep.V = lw.d1 * rep.V1 + rep.V2 + 0.5 * gamma * tf.w0 * tf.w0 +
          lw.d2 * rep.V3;
  return rep;
}

DecayFit decay_fit(std::span<const double> t, std::span<const double> Z,
                   double t_lo, double t_hi) {
  if (t.size() != Z.size() || t.empty()) {
    throw std::invalid_argument("decay_fit: mismatched or empty series");
  }
  double st = 0, sy = 0, stt = 0, sty = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || t[i] > t_hi) continue;
    if (!(Z[i] > 0)) {
      throw std::invalid_argument(
          "decay_fit: Z must be positive on the fit window");
    }
    const double y = std::log(Z[i]);
    st += t[i];
    sy += y;
    stt += t[i] * t[i];
    sty += t[i] * y;
    ++n;
  }
  if (n < 2) {
    throw std::invalid_argument("decay_fit: window contains fewer than 2 "
                                "samples");
  }
  const double den = n * stt - st * st;
  const double slope = (n * sty - st * sy) / den;
  const double intercept = (sy - slope * st) / n;

  double ss_res = 0, ss_tot = 0;
  const double ybar = sy / n;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || t[i] > t_hi) continue;
    const double y = std::log(Z[i]);
    const double fit = intercept + slope * t[i];
    ss_res += (y - fit) * (y - fit);
    ss_tot += (y - ybar) * (y - ybar);
  }
  DecayFit out;
  out.kappa = -slope;
  out.c = std::exp(intercept) / Z.front();
  out.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  out.rmse = std::sqrt(ss_res / n);
  return out;
}

double f_term(const KernelTables& tables, double x, const Eigen::Vector2d& X) {
  const AugmentedSystem& aug = tables.system();
  const auto [phi, dphi] = phi_and_prime(aug, x - tables.length());
  const double k = k_of(aug, x, tables.length());
  return (dphi.transpose() - k * aug.ls.C.transpose()).dot(X);
}

SanityChecks sanity_inequalities(const TargetField& tf, double gamma,
                                 double l, double l_bar) {
  const int n = static_cast<int>(tf.w.size());
  const double h = 1.0 / (n - 1);
  std::vector<double> ws = gradient_sigma(tf.w);
  for (double& v : ws) v /= l;
  std::vector<double> wss = gradient_sigma(ws);
  for (double& v : wss) v /= l;

  const double w2 = l * trapz_sq(tf.w, h);
  const double wx2 = l * trapz_sq(ws, h);
  const double wxx2 = l * trapz_sq(wss, h);
  const double w0sq = tf.w0 * tf.w0;

  SanityChecks s;
  s.poincare_w = {w2, 4.0 * l_bar * l_bar * wx2};
  s.poincare_wx = {wx2, 2.0 * l_bar * gamma * gamma * w0sq +
                            4.0 * l_bar * l_bar * wxx2};
  s.agmon = {tf.wx_l * tf.wx_l,
             2.0 * gamma * gamma * w0sq + 4.0 * l_bar * wxx2};
  return s;
}

}  // namespace axonctl
