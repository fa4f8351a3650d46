#pragma once

#include <span>
#include <vector>

#include "axonctl/config_io.hpp"
#include "axonctl/controller.hpp"
#include "axonctl/linsys.hpp"
#include "axonctl/steady_state.hpp"

namespace axonctl {

/// Front-fixed plant state: the concentration lives on the uniform grid
/// sigma = x/l(t) in [0, 1], so the moving domain never remeshes.
struct SimState {
  double t = 0;     // s
  double l = 0;     // m
  double c_c = 0;   // cone concentration, mol/m^3
  double ldot = 0;  // current growth rate, m/s
  std::vector<double> c;  // nodal concentration on sigma grid, mol/m^3

  // invariant: c.back() == c_c after every step
};

struct SchemeParams {
  double theta = 1.0;  // implicitness weight; diffusion is theta-implicit
  int n_grid = 201;
  double dt = 1e-3;  // s
};

/// Rejects configurations whose explicit part cannot be stable at the
/// initial length (theta < 0.5 with dt D / (l0 h)^2 > 0.5).
void check_scheme(const SchemeParams& sch, const BioParams& bio, double l_0);

/// Far-end treatment of the theta step. `dirichlet` and `neumann` serve
/// verification problems (manufactured solutions, conservation checks);
/// `cone` appends the cone tubulin balance as the last row of the implicit
/// system, with its one-sided boundary-gradient stencil inside the matrix.
enum class RightBC { dirichlet, neumann, cone };

/// One theta-weighted step of the transformed PDE
///   c_t = (D/l^2) c_ss + ((s ldot - a)/l) c_s - g c + S
/// on the fixed sigma grid, with a second-order ghost Neumann condition on
/// the left. Coefficients (l, ldot) are frozen over the step; boundary
/// data and the optional source are taken at both time levels so theta=1/2
/// retains second order in time. For RightBC::cone the quadratic
/// microtubule reaction is evaluated at the old cone value; everything
/// else in the cone row is theta-implicit.
struct ThetaStepArgs {
  double l = 0;
  double ldot = 0;
  double dt = 0;
  double theta = 1.0;
  double grad0_old = 0;  // sigma-gradient at sigma=0 (equals -l q_s)
  double grad0_new = 0;
  RightBC right = RightBC::dirichlet;
  double dirichlet_old = 0;
  double dirichlet_new = 0;
  double grad1_old = 0;  // sigma-gradient at sigma=1 when Neumann
  double grad1_new = 0;
  std::span<const double> source_old;  // per node; empty means zero
  std::span<const double> source_new;
};

void theta_step(const BioParams& bio, const ThetaStepArgs& args,
                std::vector<double>& c);

/// Advances the coupled plant by one dt: length rate from the cone error,
/// then one theta-implicit solve of the PDE together with the cone balance
/// row, then the length update. Throws SolverFault on non-finite values or
/// a collapsed domain, naming the offending quantity.
SimState step(const SimState& state, const BioParams& bio, double q_s,
              const SchemeParams& sch);

/// Builds the initial state from the scenario descriptor.
SimState initial_state(const BioParams& bio, const ScenarioConfig& sc);

struct RunHooks {
  SnapshotWriter* snapshots = nullptr;
  int snapshot_every = 0;
  // Replaces the scenario's initial state when set (verification runs start
  // from the discrete equilibrium, which the config format cannot express).
  const SimState* initial = nullptr;
  // Receives the end-of-run state when set.
  SimState* final_state = nullptr;
};

/// Soma flux consistent with the end-of-step state: the root of the affine
/// residual q - (q_s* - U(step(state, q))). Because the theta step is affine
/// in q_s and the feedback functional is linear in the state, two probe
/// steps determine the root exactly; this is the implicit counterpart of
/// the boundary condition u_x(0, t) = U(t). Closing the loop on the
/// start-of-step state instead builds a one-step-delayed loop whose gain
/// exceeds one here: implicit diffusion equilibrates the whole (micron,
/// seconds-horizon) domain within a single dt.
double closed_loop_flux(const SimState& state, const BioParams& bio,
                        const SteadyState& ss, Controller& controller,
                        const SchemeParams& sch);

/// Full experiment loop: per step evaluates the controller on the
/// start-of-step state, records the diagnostic row (H1 norm, transform
/// boundary values, Lyapunov value), then advances the plant. The record
/// sequence includes the final state.
std::vector<RunRecord> run(const Config& cfg, const SteadyState& ss,
                           const LyapunovPair& lp, const LyapunovWeights& lw,
                           Controller& controller, RunHooks hooks = {});

}  // namespace axonctl
