#include "axonctl/linsys.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "axonctl/steady_state.hpp"

namespace axonctl {

namespace {

// Right-hand side of the cone balance, written as a function of the cone
// error z1 and the error-field gradient v = u_x(l) with the length frozen
// at l_s. Used only for the startup Jacobian self-check.
double cone_rhs(const BioParams& bio, double ceq_prime_ls, double z1,
                double v) {
  const double cc = bio.c_inf + z1;
  return ((bio.a - bio.g * bio.l_c) * cc - bio.D * (v + ceq_prime_ls) -
          (bio.r_g * cc + bio.rtilde_g * bio.l_c) * (cc - bio.c_inf)) /
         bio.l_c;
}

}  // namespace

bool is_hurwitz(const Eigen::Matrix2d& M) {
  // trace/determinant criterion, exact for 2x2
  return M.trace() < 0.0 && M.determinant() > 0.0;
}

LinearSystem build_linear_system(const BioParams& bio,
                                 const ControlParams& ctrl) {
  bio.validate();
  LinearSystem ls;
  ls.a_tilde = ((bio.a - bio.g * bio.l_c) -
                (bio.r_g * bio.c_inf + bio.rtilde_g * bio.l_c)) /
               bio.l_c;
  ls.beta = bio.D / bio.l_c;
  ls.A << ls.a_tilde, 0.0, bio.r_g, 0.0;
  ls.B << -ls.beta, 0.0;
  ls.C << 1.0, -(bio.a - bio.g * bio.l_c) * bio.c_inf / bio.D;
  ls.K << ctrl.k1, ctrl.k2;

  // Self-check: a_tilde and beta must match the finite-difference Jacobian
  // of the nonlinear cone balance at the equilibrium. The balance is
  // quadratic in z1 and linear in v, so central differences are exact.
  {
    const SteadyState ss = build_steady_state(bio, bio.l_c);  // any l_s > 0
    const double cp = c_eq_prime(ss, bio, ss.l_s);
    const double hz = 1e-6 * bio.c_inf;
    const double hv = 1e-6 * bio.c_inf / bio.l_c;
    const double fd_a = (cone_rhs(bio, cp, hz, 0.0) -
                         cone_rhs(bio, cp, -hz, 0.0)) /
                        (2.0 * hz);
    const double fd_b = (cone_rhs(bio, cp, 0.0, hv) -
                         cone_rhs(bio, cp, 0.0, -hv)) /
                        (2.0 * hv);
    const double scale = std::abs(ls.a_tilde) + bio.g;
    if (std::abs(fd_a - ls.a_tilde) > 1e-6 * scale ||
        std::abs(fd_b + ls.beta) > 1e-6 * ls.beta) {
      std::ostringstream os;
      os << "build_linear_system: linearization self-check failed: a_tilde="
         << ls.a_tilde << " vs FD " << fd_a << ", -beta=" << -ls.beta
         << " vs FD " << fd_b;
      throw std::logic_error(os.str());
    }
  }

  const Eigen::Matrix2d M = ls.closed_loop();
  if (!is_hurwitz(M)) {
    const Eigen::Vector2cd ev = M.eigenvalues();
    std::ostringstream os;
    os << "gains (k1=" << ctrl.k1 << ", k2=" << ctrl.k2
       << ") do not stabilize the length dynamics: eigenvalues of A+BK^T are "
       << ev(0) << " and " << ev(1) << "; require k1 > a_tilde/beta = "
       << ls.a_tilde / ls.beta << " and k2 > 0";
    throw NotHurwitzError(os.str());
  }
  return ls;
}

LyapunovPair solve_lyapunov(const LinearSystem& ls, const Eigen::Matrix2d& Q) {
  const Eigen::Matrix2d M = ls.closed_loop();
  if (!is_hurwitz(M)) {
    throw std::invalid_argument("solve_lyapunov: A+BK^T is not Hurwitz");
  }
  if (std::abs(Q(0, 1) - Q(1, 0)) >
      1e-12 * std::max(1.0, Q.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("solve_lyapunov: Q must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> qe(Q);
  if (qe.eigenvalues()(0) <= 0.0) {
    throw std::invalid_argument("solve_lyapunov: Q must be positive definite");
  }

  // M^T P + P M = -Q with P = [[p1, p2], [p2, p3]]: three linear equations.
  Eigen::Matrix3d S;
  S << 2.0 * M(0, 0), 2.0 * M(1, 0), 0.0,
       M(0, 1), M(0, 0) + M(1, 1), M(1, 0),
       0.0, 2.0 * M(0, 1), 2.0 * M(1, 1);
  const Eigen::Vector3d rhs(-Q(0, 0), -Q(0, 1), -Q(1, 1));
  const Eigen::Vector3d p = S.fullPivLu().solve(rhs);

  LyapunovPair lp;
  lp.Q = 0.5 * (Q + Q.transpose());
  lp.P << p(0), p(1), p(1), p(2);

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> pe(lp.P);
  lp.lambda_min_P = pe.eigenvalues()(0);
  lp.lambda_max_P = pe.eigenvalues()(1);
  lp.lambda_min_Q = qe.eigenvalues()(0);
  if (lp.lambda_min_P <= 0.0) {
    throw std::logic_error("solve_lyapunov: computed P is not positive "
                           "definite; closed loop likely near-singular");
  }
  return lp;
}

LyapunovWeights lyapunov_weights(const BioParams& bio,
                                 const ControlParams& ctrl,
                                 const LinearSystem& ls,
                                 const LyapunovPair& lp, double l_bar) {
  if (!(l_bar > 0)) {
    throw std::invalid_argument("lyapunov_weights: l_bar must be > 0");
  }
  LyapunovWeights w;
  w.d1 = std::max(2.0 * bio.a * bio.a / (bio.D * bio.D), 1.0);

  const double bp2 = (ls.B.transpose() * lp.P).squaredNorm();
  double d2 = bio.D * lp.lambda_min_Q / (64.0 * l_bar * bp2);
  if (bio.a > 0.0) {
    d2 = std::min(d2, bio.g * bio.D * lp.lambda_min_Q / (16.0 * bio.a * bp2));
  }
  w.d2 = d2;

  w.alpha = std::min({2.0 * bio.g + bio.D / (4.0 * l_bar),
                      (4.0 * bio.g + w.d1 * bio.D) / 2.0,
                      lp.lambda_min_Q / (2.0 * lp.lambda_max_P),
                      w.d2 * (2.0 * w.d1 * bio.D + bio.g) / 4.0});
  w.v_bar = std::min(bio.g / (4.0 * ctrl.gamma), bio.D / (8.0 * l_bar));
  return w;
}

}  // namespace axonctl
