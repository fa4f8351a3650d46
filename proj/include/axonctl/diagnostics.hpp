#pragma once

#include <span>
#include <utility>
#include <vector>

#include "axonctl/kernel.hpp"
#include "axonctl/simulator.hpp"
#include "axonctl/steady_state.hpp"

namespace axonctl {

/// u(sigma_i) = c(sigma_i) - c_eq(sigma_i l) and X = [c_c - c_inf, l - l_s].
std::pair<std::vector<double>, Eigen::Vector2d> error_field(
    const SimState& state, const SteadyState& ss, const BioParams& bio);

/// Second-order nodal derivative d/dsigma: centered interiorly, one-sided
/// three-point stencils at the ends (same stencils as the simulator).
std::vector<double> gradient_sigma(std::span<const double> f);

/// The transformed field w = u - int_x^l k(x,y) u dy - phi(x-l)^T X and its
/// boundary data.
struct TargetField {
  std::vector<double> w;
  double w0 = 0;            // w(0)
  double wx0 = 0;           // w_x(0)
  double wx_l = 0;          // w_x(l)
  double bc0_residual = 0;  // |w_x(0) - gamma w(0)|
  double bcl_residual = 0;  // |w(l)|
};

TargetField forward_transform(std::span<const double> u,
                              const Eigen::Vector2d& X,
                              const KernelTables& tables,
                              QuadratureRule rule);

/// u = w + int_x^l q(x,y) w dy + phitilde(x-l)^T X.
std::vector<double> inverse_transform(std::span<const double> w,
                                      const Eigen::Vector2d& X,
                                      const KernelTables& tables,
                                      QuadratureRule rule);

/// Forward then inverse; returns max |u_rec - u| / max |u|.
double round_trip(std::span<const double> u, const Eigen::Vector2d& X,
                  const KernelTables& tables, QuadratureRule rule);

/// Z = ||u||^2 + ||u_x||^2 + X^T X with trapezoid integrals over [0, l].
double h1_norm(std::span<const double> u, std::span<const double> u_x,
               const Eigen::Vector2d& X, double l);

/// Convenience overload computing u_x from the nodal field.
double h1_norm(std::span<const double> u, const Eigen::Vector2d& X, double l);

struct EnergyReport {
  double V1 = 0;  // ||w||^2 / 2
  double V2 = 0;  // ||w_x||^2 / 2
  double V3 = 0;  // X^T P X
  double V = 0;   // d1 V1 + V2 + (gamma/2) w(0)^2 + d2 V3
};

EnergyReport lyapunov_value(const TargetField& tf, const Eigen::Vector2d& X,
                            const LyapunovPair& lp, const LyapunovWeights& lw,
                            double gamma, double l);

struct DecayFit {
  double kappa = 0;  // decay rate from the log-linear fit
  double c = 0;      // prefactor relative to Z(0)
  double r2 = 0;     // coefficient of determination of the fit
  double rmse = 0;   // RMS residual of log Z about the fit line
};

/// Least-squares line on (t, log Z) over [t_lo, t_hi]. Z(0) is the first
/// sample of the series. Throws std::invalid_argument on nonpositive Z in
/// the window or an empty window.
DecayFit decay_fit(std::span<const double> t, std::span<const double> Z,
                   double t_lo, double t_hi);

/// F(x, X) = (phi'(x - l)^T - k(x, l) C^T) X, the moving-boundary remainder
/// of the target dynamics.
double f_term(const KernelTables& tables, double x, const Eigen::Vector2d& X);

/// Numeric spot checks of the functional inequalities used by the energy
/// estimate (they presume w(l) = 0 and w_x(0) = gamma w(0), so they are
/// meaningful on transform output only).
struct InequalityCheck {
  double lhs = 0;
  double rhs = 0;
  bool ok() const { return lhs <= rhs; }
};

struct SanityChecks {
  InequalityCheck poincare_w;    // ||w||^2 <= 4 lbar^2 ||w_x||^2
  InequalityCheck poincare_wx;   // ||w_x||^2 <= 2 lbar g^2 w0^2 + 4 lbar^2 ||w_xx||^2
  InequalityCheck agmon;         // w_x(l)^2 <= 2 g^2 w0^2 + 4 lbar ||w_xx||^2
};

SanityChecks sanity_inequalities(const TargetField& tf, double gamma,
                                 double l, double l_bar);

}  // namespace axonctl
