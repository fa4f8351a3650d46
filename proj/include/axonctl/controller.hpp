#pragma once

#include <memory>
#include <span>

#include "axonctl/kernel.hpp"
#include "axonctl/steady_state.hpp"

namespace axonctl {

/// Raised by the controller on non-finite state.
class SolverFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Boundary feedback on the discrete state:
///   U = (gamma - beta/D) u(0) - (1/D) int_0^l p(x) B u(x) dx + p(l) X.
double control_U(const KernelTables& tables, std::span<const double> u,
                 const Eigen::Vector2d& X, QuadratureRule rule);

/// Maps the error input to the applied soma flux, q_s = q_s* - U. The
/// simulator imposes c_x(0,t) = -q_s.
double applied_flux(double U, const SteadyState& ss);

/// Owns the kernel tables for the current length and refreshes them when
/// the length has moved more than a relative tolerance since the last
/// rebuild; the incremental table construction keeps refreshes cheap.
class Controller {
 public:
  Controller(const AugmentedSystem& aug, const SteadyState& ss, double gamma,
             int n_grid, QuadratureRule rule,
             double refresh_rel_tol = 1e-6);

  /// Kernel tables consistent with length l (shared with the diagnostics so
  /// transform and control law use the same quadrature data).
  const KernelTables& tables_for(double l);

  double evaluate(std::span<const double> u, const Eigen::Vector2d& X,
                  double l);

  double last_U() const { return last_U_; }
  QuadratureRule rule() const { return rule_; }
  const SteadyState& steady() const { return ss_; }

 private:
  AugmentedSystem aug_;
  SteadyState ss_;
  double gamma_;
  int n_grid_;
  QuadratureRule rule_;
  double refresh_rel_tol_;
  double l_cached_ = -1.0;
  double last_U_ = 0.0;
  std::unique_ptr<KernelTables> tables_;
};

}  // namespace axonctl
