#pragma once

#include "axonctl/params.hpp"

namespace axonctl {

/// Closed-form steady state of the plant for a set-point length l_s:
///   c_eq(x) = c_inf (K+ e^{lam+ (x-l_s)} + K- e^{lam- (x-l_s)}),
/// with lam+- the roots of D lam^2 - a lam - g = 0 and K+ + K- = 1.
struct SteadyState {
  double lambda_plus = 0;   // 1/m, > 0
  double lambda_minus = 0;  // 1/m, < 0
  double K_plus = 0;
  double K_minus = 0;
  double l_s = 0;           // m
  double q_s_star = 0;      // steady soma flux, mol/m^4
};

SteadyState build_steady_state(const BioParams& bio, double l_s);

/// The profile, its derivative and second derivative. The formula is entire
/// in x; evaluation outside [0, l_s] is legitimate (the error field needs it
/// whenever l(t) != l_s).
double c_eq(const SteadyState& ss, const BioParams& bio, double x);
double c_eq_prime(const SteadyState& ss, const BioParams& bio, double x);
double c_eq_second(const SteadyState& ss, const BioParams& bio, double x);

/// Max normalized residual of the steady equations over n_check sample
/// points on [0, l_s]: |D c_eq'' - a c_eq' - g c_eq| plus the steady cone
/// balance |(a - g l_c) c_inf - D c_eq'(l_s)|, both divided by g c_inf.
/// n_check must be >= 2.
double steady_residual(const SteadyState& ss, const BioParams& bio,
                       int n_check);

}  // namespace axonctl
