#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "axonctl/params.hpp"

namespace axonctl {

/// Raised when A + B K^T fails the eigenvalue test. The message carries the
/// offending eigenvalues and the gain bounds k1 > a_tilde/beta, k2 > 0.
class NotHurwitzError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Linearization of the cone/length dynamics about (c_inf, l_s):
///   Xdot = A X + B u_x(l, t),  u(l, t) = C^T X,  X = [c_c - c_inf, l - l_s].
/// a_tilde and beta come from differentiating the cone balance; the
/// construction self-checks them against a finite-difference Jacobian.
struct LinearSystem {
  Eigen::Matrix2d A = Eigen::Matrix2d::Zero();
  Eigen::Vector2d B = Eigen::Vector2d::Zero();
  Eigen::Vector2d C = Eigen::Vector2d::Zero();
  Eigen::Vector2d K = Eigen::Vector2d::Zero();
  double a_tilde = 0;  // 1/s
  double beta = 0;     // m/s

  Eigen::Matrix2d closed_loop() const { return A + B * K.transpose(); }
};

LinearSystem build_linear_system(const BioParams& bio,
                                 const ControlParams& ctrl);

/// True iff both eigenvalues of M have strictly negative real part.
bool is_hurwitz(const Eigen::Matrix2d& M);

struct LyapunovPair {
  Eigen::Matrix2d P = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d Q = Eigen::Matrix2d::Zero();
  double lambda_min_P = 0;
  double lambda_max_P = 0;
  double lambda_min_Q = 0;
};

/// Solves (A+BK^T)^T P + P (A+BK^T) = -Q in closed form (three unknowns).
/// Requires the closed loop Hurwitz and Q symmetric positive definite.
LyapunovPair solve_lyapunov(const LinearSystem& ls, const Eigen::Matrix2d& Q);

/// The constants of the energy estimate: weights d1, d2, decay constant
/// alpha and the boundary-speed bound v_bar, all for a length bound
/// l_bar > l_s.
struct LyapunovWeights {
  double d1 = 0;
  double d2 = 0;
  double alpha = 0;
  double v_bar = 0;
};

LyapunovWeights lyapunov_weights(const BioParams& bio,
                                 const ControlParams& ctrl,
                                 const LinearSystem& ls,
                                 const LyapunovPair& lp, double l_bar);

}  // namespace axonctl
