#include "axonctl/controller.hpp"

#include <cmath>
#include <sstream>

namespace axonctl {

double control_U(const KernelTables& tables, std::span<const double> u,
                 const Eigen::Vector2d& X, QuadratureRule rule) {
  if (!X.allFinite()) {
    throw SolverFault("control_U: non-finite ODE state");
  }
  for (double v : u) {
    if (!std::isfinite(v)) {
      throw SolverFault("control_U: non-finite error field");
    }
  }
  const AugmentedSystem& aug = tables.system();
  const double gamma = tables.gamma();
  const double boundary = (gamma - aug.ls.beta / aug.D) * u.front();
  const double integral = tables.p_integral(u, rule) / aug.D;
  const double ode_term = tables.p_row(tables.size() - 1).dot(X);
  return boundary - integral + ode_term;
}

double applied_flux(double U, const SteadyState& ss) {
  return ss.q_s_star - U;
}

Controller::Controller(const AugmentedSystem& aug, const SteadyState& ss,
                       double gamma, int n_grid, QuadratureRule rule,
                       double refresh_rel_tol)
    : aug_(aug),
      ss_(ss),
      gamma_(gamma),
      n_grid_(n_grid),
      rule_(rule),
      refresh_rel_tol_(refresh_rel_tol) {}

const KernelTables& Controller::tables_for(double l) {
  if (!(l > 0) || !std::isfinite(l)) {
    std::ostringstream os;
    os << "Controller: invalid length " << l;
    throw SolverFault(os.str());
  }
  if (!tables_ || std::abs(l - l_cached_) / l_cached_ > refresh_rel_tol_) {
    tables_ = std::make_unique<KernelTables>(aug_, gamma_, l, n_grid_);
    l_cached_ = l;
  }
  return *tables_;
}

double Controller::evaluate(std::span<const double> u,
                            const Eigen::Vector2d& X, double l) {
  last_U_ = control_U(tables_for(l), u, X, rule_);
  return last_U_;
}

}  // namespace axonctl
