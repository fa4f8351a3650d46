#include <cmath>
#include <random>

#include "axonctl/controller.hpp"
#include "doctest.h"

using namespace axonctl;
using Eigen::Vector2d;

namespace {

struct Rig {
  BioParams bio;
  ControlParams ctrl;
  LinearSystem ls;
  SteadyState ss;
  AugmentedSystem aug;

  Rig() {
    ctrl.k1 = 1.0;
    ctrl.k2 = 1e4;
    ls = build_linear_system(bio, ctrl);
    ss = build_steady_state(bio, 12e-6);
    aug = build_augmented(ls, bio);
  }
};

}  // namespace

TEST_SUITE_BEGIN("controller");

TEST_CASE("equilibrium state produces zero input") {
  const Rig rig;
  const KernelTables T(rig.aug, rig.ctrl.gamma, rig.ss.l_s, 201);
  const std::vector<double> u(201, 0.0);
  CHECK(control_U(T, u, Vector2d::Zero(), kDefaultRule) == 0.0);
}

TEST_CASE("pure ODE feedback term") {
  const Rig rig;
  const KernelTables T(rig.aug, rig.ctrl.gamma, rig.ss.l_s, 201);
  const std::vector<double> u(201, 0.0);
  const double U1 = control_U(T, u, Vector2d(1, 0), kDefaultRule);
  CHECK(U1 == doctest::Approx(T.p_row(200)(0)).epsilon(1e-14));
  const double U2 = control_U(T, u, Vector2d(0, 1), kDefaultRule);
  CHECK(U2 == doctest::Approx(T.p_row(200)(1)).epsilon(1e-14));
}

TEST_CASE("profile-shaped field matches a refined-grid quadrature") {
  const Rig rig;
  auto field = [&](double x) {
    return 0.1 * (c_eq(rig.ss, rig.bio, x) - rig.bio.c_inf) +
           1e-4 * std::sin(3.0 * x / rig.ss.l_s);
  };
  auto U_at = [&](int n) {
    const KernelTables T(rig.aug, rig.ctrl.gamma, rig.ss.l_s, n);
    std::vector<double> u(n);
    for (int i = 0; i < n; ++i) u[i] = field(i * T.spacing());
    return control_U(T, u, Vector2d::Zero(), kDefaultRule);
  };
  const double U = U_at(201);
  const double Uf = U_at(1601);  // 8x refinement as the reference
  CHECK(std::abs(U - Uf) / std::max(std::abs(Uf), 1e-12) < 1e-7);
}

TEST_CASE("applied flux mapping") {
  const Rig rig;
  CHECK(applied_flux(0.0, rig.ss) == rig.ss.q_s_star);
  CHECK(applied_flux(rig.ss.q_s_star, rig.ss) == 0.0);
}

TEST_CASE("the control law is linear in (u, X)") {
  const Rig rig;
  const int n = 101;
  const KernelTables T(rig.aug, rig.ctrl.gamma, rig.ss.l_s, n);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> u1(n), u2(n), sum(n);
  for (int i = 0; i < n; ++i) {
    u1[i] = uni(rng) * 1e-3;
    u2[i] = uni(rng) * 1e-3;
  }
  const Vector2d X1(uni(rng) * 1e-3, uni(rng) * 1e-6);
  const Vector2d X2(uni(rng) * 1e-3, uni(rng) * 1e-6);
  const double a = 1.7, b = -0.6;
  for (int i = 0; i < n; ++i) sum[i] = a * u1[i] + b * u2[i];
  const double lhs = control_U(T, sum, a * X1 + b * X2, kDefaultRule);
  const double rhs = a * control_U(T, u1, X1, kDefaultRule) +
                     b * control_U(T, u2, X2, kDefaultRule);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("degenerate configuration: gamma = beta/D with a null kernel row") {
  const Rig rig;
  AugmentedSystem null_aug = rig.aug;
  null_aug.Y0.setZero();  // phi == 0, hence p == 0 and no integral term
  const double gamma = rig.ls.beta / rig.bio.D;
  const KernelTables T(null_aug, gamma, rig.ss.l_s, 101);
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<double> u(101);
  for (double& v : u) v = uni(rng);
  const Vector2d X(uni(rng), uni(rng));
  CHECK(control_U(T, u, X, kDefaultRule) == 0.0);
}

TEST_CASE("non-finite state faults with a diagnostic") {
  const Rig rig;
  const KernelTables T(rig.aug, rig.ctrl.gamma, rig.ss.l_s, 101);
  std::vector<double> u(101, 0.0);
  u[50] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(control_U(T, u, Vector2d::Zero(), kDefaultRule),
                  SolverFault);
  const std::vector<double> ok(101, 0.0);
  const Vector2d bad(std::numeric_limits<double>::infinity(), 0.0);
  CHECK_THROWS_AS(control_U(T, ok, bad, kDefaultRule), SolverFault);
}

TEST_CASE("table cache refreshes on relative length drift") {
  const Rig rig;
  Controller ctl(rig.aug, rig.ss, rig.ctrl.gamma, 101, kDefaultRule);
  const KernelTables* t1 = &ctl.tables_for(1e-5);
  const KernelTables* t2 = &ctl.tables_for(1e-5 * (1.0 + 5e-7));
  CHECK(t1 == t2);  // below tolerance: reuse
  CHECK(t2->length() == 1e-5);
  const KernelTables& t3 = ctl.tables_for(1e-5 * (1.0 + 5e-6));
  CHECK(t3.length() == 1e-5 * (1.0 + 5e-6));
}

TEST_SUITE_END();
