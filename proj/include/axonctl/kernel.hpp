#pragma once

#include <Eigen/Dense>
#include <span>
#include <utility>
#include <vector>

#include "axonctl/linsys.hpp"

namespace axonctl {

/// Matrix exponential by scaling-and-squaring with a degree-13 Pade
/// approximant. The input is halved until its 1-norm drops below 0.5, so
/// accuracy holds far beyond the norms this plant produces.
Eigen::Matrix4d mat_exp(const Eigen::Matrix4d& M);

/// e^{N h} together with the first four moments int_0^h tau^k e^{N tau} dtau,
/// computed by a scaled Taylor series plus interval doubling. The moments
/// drive product integration of exponential kernels against polynomial
/// field interpolants.
struct Propagator {
  Eigen::Matrix4d E;   // e^{N h}
  Eigen::Matrix4d M0;  // k = 0 moment
  Eigen::Matrix4d M1;
  Eigen::Matrix4d M2;
  Eigen::Matrix4d M3;
};

Propagator propagator_with_moments(const Eigen::Matrix4d& N, double h);

/// Orientation of the inverse-kernel ODE. `derived` is the form obtained by
/// matching the inverse transformation against the target dynamics (the
/// companion matrix right-multiplies the row [phi~^T, phi~'^T], mirroring
/// the forward kernel); `printed` treats the state matrix as acting on the
/// column phi~ instead. Only `derived` passes the round-trip identity; the
/// alternative is retained for verification.
enum class InverseVariant { derived, printed };

/// Companion-form realization of both gain-kernel ODEs. Rows Y = [phi^T,
/// phi'^T] evolve by right multiplication: Y(x) = Y0 e^{N1 x}, and likewise
/// Ytilde(x) = Ytilde0 e^{N2 x} for the inverse kernel.
struct AugmentedSystem {
  Eigen::Matrix4d N1;
  Eigen::Matrix4d N2;
  Eigen::RowVector4d Y0;
  Eigen::RowVector4d Ytilde0;
  LinearSystem ls;
  double D = 0;
  double a = 0;
  double g = 0;
};

AugmentedSystem build_augmented(const LinearSystem& ls, const BioParams& bio,
                                InverseVariant variant =
                                    InverseVariant::derived);

/// phi(x) and phi'(x) by a direct matrix exponential (negative x is the
/// common case; p(x) reads the kernel at -x).
std::pair<Eigen::Vector2d, Eigen::Vector2d> phi_and_prime(
    const AugmentedSystem& aug, double x);

std::pair<Eigen::Vector2d, Eigen::Vector2d> phi_tilde_and_prime(
    const AugmentedSystem& aug, double x);

/// Forward gain kernel k(x,y) = -(1/D) phi(x-y)^T B on the Volterra domain
/// x <= y; zero outside by convention.
double k_of(const AugmentedSystem& aug, double x, double y);

/// Inverse gain kernel q(x,y) = -(1/D) phitilde(x-y)^T B, same convention.
double q_of(const AugmentedSystem& aug, double x, double y);

/// p(x) = phi'(-x)^T - gamma phi(-x)^T, the row vector of the control law.
Eigen::RowVector2d p_of(const AugmentedSystem& aug, double gamma, double x);

/// Quadrature used for every kernel integral (control law, transform and
/// its inverse). All variants are O(n) thanks to the exponential structure
/// of the kernels.
///  - trapezoid:      plain composite trapezoid on nodal products.
///  - product_linear: exact exponential moments against the piecewise-linear
///                    field interpolant (order 2 in the field, exact in the
///                    kernel). Default; same field order as the PDE scheme.
///  - product_cubic:  exact moments against piecewise-cubic interpolation
///                    (order 4 in the field).
enum class QuadratureRule { trapezoid, product_linear, product_cubic };

/// Project-wide default. The gain kernels vary on the cone-ratio length
/// scale D/beta, which a 201-node grid resolves only marginally; exact
/// kernel moments with cubic field interpolation keep transform round-trip
/// errors at the 1e-9 level where nodal trapezoid stalls near 1e-4.
inline constexpr QuadratureRule kDefaultRule = QuadratureRule::product_cubic;

enum class KernelSide { forward, inverse };

/// Kernel rows sampled on the uniform grid x_i = i h, h = l/(n-1):
/// rows_fwd[i] = Y0 e^{-N1 i h} (so phi(-x_i) sits at index i), plus the
/// matching inverse-kernel rows and the cached step propagators.
class KernelTables {
 public:
  KernelTables(const AugmentedSystem& aug, double gamma, double l, int n);

  int size() const { return n_; }
  double length() const { return l_; }
  double spacing() const { return h_; }
  double gamma() const { return gamma_; }
  const AugmentedSystem& system() const { return aug_; }

  /// Y0 e^{-N1 i h}; phi/phi' slots of the forward kernel at s = -i h.
  const Eigen::RowVector4d& row(int i) const { return rows_fwd_[i]; }
  const Eigen::RowVector4d& row_inverse(int i) const { return rows_inv_[i]; }

  Eigen::Vector2d phi(int i) const { return rows_fwd_[i].head<2>(); }
  Eigen::Vector2d phi_prime(int i) const { return rows_fwd_[i].tail<2>(); }
  Eigen::Vector2d phi_tilde(int i) const { return rows_inv_[i].head<2>(); }
  Eigen::Vector2d phi_tilde_prime(int i) const {
    return rows_inv_[i].tail<2>();
  }
  /// p(x_i) = phi'(-x_i)^T - gamma phi(-x_i)^T.
  Eigen::RowVector2d p_row(int i) const {
    return rows_fwd_[i].tail<2>().transpose() -
           gamma_ * rows_fwd_[i].head<2>().transpose();
  }

  const Propagator& step_forward() const { return fwd_; }
  const Propagator& step_inverse() const { return inv_; }

  /// I(x_i) = int_{x_i}^{l} kappa(x_i, y) field(y) dy at every node, with
  /// kappa = k (forward) or q (inverse).
  std::vector<double> volterra_integral(std::span<const double> field,
                                        KernelSide side,
                                        QuadratureRule rule) const;

  /// int_0^l p(x) B u(x) dx, the integral term of the control law.
  double p_integral(std::span<const double> u, QuadratureRule rule) const;

 private:
  AugmentedSystem aug_;
  double gamma_;
  double l_;
  double h_;
  int n_;
  Propagator fwd_;  // propagator and moments of e^{-N1 tau}
  Propagator inv_;  // propagator and moments of e^{-N2 tau}
  std::vector<Eigen::RowVector4d> rows_fwd_;
  std::vector<Eigen::RowVector4d> rows_inv_;
};

/// Normalized consistency residuals of the five kernel conditions plus the
/// inverse-kernel ODE, each evaluated by mixing the incremental-table and
/// direct matrix-exponential paths so that wiring errors cannot cancel.
struct KernelResidualReport {
  double pde = 0;           // k_xx - k_yy = (a/D)(k_x + k_y)
  double diagonal = 0;      // k_x(x,x) + k_y(x,x) = 0
  double boundary = 0;      // k(x,l) = -(1/D) phi(x-l)^T B
  double phi_ode = 0;       // second-order phi ODE
  double phi_bc_value = 0;  // phi(0) = C
  double phi_bc_deriv = 0;  // phi'(0) = k(l,l) C + K
  double inverse_ode = 0;   // second-order phitilde ODE

  double max() const;
};

KernelResidualReport kernel_residuals(const AugmentedSystem& aug, double l,
                                      int n);

/// || e^{N1 (x+y)} - e^{N1 x} e^{N1 y} || / || e^{N1 (x+y)} ||.
double semigroup_residual(const AugmentedSystem& aug, double x, double y);

}  // namespace axonctl
