#include "axonctl/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace axonctl {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void BioParams::validate() const {
  require(std::isfinite(D) && D > 0, "bio.D must be > 0 (got " + num(D) + ")");
  require(std::isfinite(g) && g > 0, "bio.g must be > 0 (got " + num(g) + ")");
  require(std::isfinite(r_g) && r_g > 0,
          "bio.r_g must be > 0 (got " + num(r_g) + ")");
  require(std::isfinite(l_c) && l_c > 0,
          "bio.l_c must be > 0 (got " + num(l_c) + ")");
  require(std::isfinite(c_inf) && c_inf > 0,
          "bio.c_inf must be > 0 (got " + num(c_inf) + ")");
  require(std::isfinite(a) && a >= 0, "bio.a must be >= 0 (got " + num(a) + ")");
  require(std::isfinite(rtilde_g), "bio.rtilde_g must be finite");
}

std::string to_string(ControlMode mode) {
  switch (mode) {
    case ControlMode::closed_loop: return "closed_loop";
    case ControlMode::open_loop_constant: return "open_loop_constant";
    case ControlMode::zero_input: return "zero_input";
  }
  return "closed_loop";
}

ControlMode control_mode_from_string(const std::string& s) {
  if (s == "closed_loop") return ControlMode::closed_loop;
  if (s == "open_loop_constant") return ControlMode::open_loop_constant;
  if (s == "zero_input") return ControlMode::zero_input;
  throw ConfigError("control.mode must be one of closed_loop, "
                    "open_loop_constant, zero_input (got '" + s + "')");
}

void ControlParams::validate(const BioParams& bio) const {
  require(std::isfinite(gamma) && gamma > 0,
          "control.gamma must be > 0 (got " + num(gamma) + ")");
  const double bound = bio.a / bio.D;
  require(gamma >= bound,
          "control.gamma must satisfy gamma >= a/D = " + num(bound) +
              " (stability hypothesis of the boundary design); got " +
              num(gamma));
  require(std::isfinite(k1), "control.k1 must be finite");
  require(std::isfinite(k2), "control.k2 must be finite");
}

double InitialProfile::value_at(double s, double c_inf) const {
  if (kind == Kind::constant_scale) return scale * c_inf;
  // Tabulated: piecewise-linear interpolation, clamped at the ends.
  if (s <= sigma.front()) return c.front();
  if (s >= sigma.back()) return c.back();
  auto it = std::upper_bound(sigma.begin(), sigma.end(), s);
  const std::size_t j = static_cast<std::size_t>(it - sigma.begin());
  const double t = (s - sigma[j - 1]) / (sigma[j] - sigma[j - 1]);
  return (1.0 - t) * c[j - 1] + t * c[j];
}

void ScenarioConfig::validate() const {
  require(std::isfinite(l_0) && l_0 > 0,
          "scenario.l_0 must be > 0 (got " + num(l_0) + ")");
  // Front-fixing handles any positive length; 1 m is far outside the regime
  // this model describes and almost certainly a unit mistake.
  require(l_0 < 1.0, "scenario.l_0 must be < 1 m (got " + num(l_0) +
                         "); lengths are expected in meters");
  require(std::isfinite(l_s) && l_s > 0,
          "scenario.l_s must be > 0 (got " + num(l_s) + ")");
  require(l_s < 1.0, "scenario.l_s must be < 1 m (got " + num(l_s) + ")");
  require(n_grid >= 11, "scenario.n_grid must be >= 11 (got " +
                            std::to_string(n_grid) + ")");
  require(std::isfinite(theta) && theta >= 0.0 && theta <= 1.0,
          "scenario.theta must lie in [0, 1] (got " + num(theta) + ")");
  require(std::isfinite(dt) && dt > 0,
          "scenario.dt must be > 0 (got " + num(dt) + ")");
  require(std::isfinite(t_final) && t_final > 0,
          "scenario.t_final must be > 0 (got " + num(t_final) + ")");
  require(snapshot_every >= 0, "scenario.snapshot_every must be >= 0");
  if (c0.kind == InitialProfile::Kind::constant_scale) {
    require(std::isfinite(c0.scale) && c0.scale > 0,
            "scenario.c0 constant scale must be > 0 (got " + num(c0.scale) +
                ")");
  } else {
    require(c0.sigma.size() >= 2 && c0.sigma.size() == c0.c.size(),
            "scenario.c0 tabulated profile needs >= 2 (sigma, c) rows");
    require(std::is_sorted(c0.sigma.begin(), c0.sigma.end()),
            "scenario.c0 tabulated profile must have ascending sigma");
    for (double v : c0.c) {
      require(std::isfinite(v) && v > 0,
              "scenario.c0 tabulated profile must be positive everywhere");
    }
  }
}

}  // namespace axonctl
