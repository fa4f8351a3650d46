#include "axonctl/steady_state.hpp"

#include <cmath>
#include <stdexcept>

namespace axonctl {

SteadyState build_steady_state(const BioParams& bio, double l_s) {
  bio.validate();
  if (!(l_s > 0)) {
    throw std::invalid_argument("build_steady_state: l_s must be > 0");
  }
  // One shared root keeps lam+ lam- = -g/D and K+ + K- = 1 exact to rounding.
  const double root = std::sqrt(bio.a * bio.a + 4.0 * bio.D * bio.g);
  SteadyState ss;
  ss.l_s = l_s;
  ss.lambda_plus = (bio.a + root) / (2.0 * bio.D);
  ss.lambda_minus = (bio.a - root) / (2.0 * bio.D);
  const double skew = (bio.a - 2.0 * bio.g * bio.l_c) / (2.0 * root);
  ss.K_plus = 0.5 + skew;
  ss.K_minus = 0.5 - skew;
  ss.q_s_star = -bio.c_inf * (ss.K_plus * ss.lambda_plus *
                                  std::exp(-ss.lambda_plus * l_s) +
                              ss.K_minus * ss.lambda_minus *
                                  std::exp(-ss.lambda_minus * l_s));
  return ss;
}

double c_eq(const SteadyState& ss, const BioParams& bio, double x) {
  const double d = x - ss.l_s;
  return bio.c_inf * (ss.K_plus * std::exp(ss.lambda_plus * d) +
                      ss.K_minus * std::exp(ss.lambda_minus * d));
}

double c_eq_prime(const SteadyState& ss, const BioParams& bio, double x) {
  const double d = x - ss.l_s;
  return bio.c_inf *
         (ss.K_plus * ss.lambda_plus * std::exp(ss.lambda_plus * d) +
          ss.K_minus * ss.lambda_minus * std::exp(ss.lambda_minus * d));
}

double c_eq_second(const SteadyState& ss, const BioParams& bio, double x) {
  const double d = x - ss.l_s;
  return bio.c_inf * (ss.K_plus * ss.lambda_plus * ss.lambda_plus *
                          std::exp(ss.lambda_plus * d) +
                      ss.K_minus * ss.lambda_minus * ss.lambda_minus *
                          std::exp(ss.lambda_minus * d));
}

double steady_residual(const SteadyState& ss, const BioParams& bio,
                       int n_check) {
  if (n_check < 2) {
    throw std::invalid_argument("steady_residual: n_check must be >= 2");
  }
  const double scale = bio.g * bio.c_inf;
  double worst = 0.0;
  for (int i = 0; i < n_check; ++i) {
    const double x = ss.l_s * static_cast<double>(i) / (n_check - 1);
    const double r = bio.D * c_eq_second(ss, bio, x) -
                     bio.a * c_eq_prime(ss, bio, x) - bio.g * c_eq(ss, bio, x);
    worst = std::max(worst, std::abs(r) / scale);
  }
  const double cone = (bio.a - bio.g * bio.l_c) * bio.c_inf -
                      bio.D * c_eq_prime(ss, bio, ss.l_s);
  return worst + std::abs(cone) / scale;
}

}  // namespace axonctl
