#include "qsl/time_grid.hpp"

#include <cmath>

namespace qsl {

VecXd TimeGrid::midpoints() const {
  VecXd t(n_steps);
  for (int k = 0; k < n_steps; ++k) t[k] = midpoint(k);
  return t;
}

void TimeGrid::validate() const {
  if (n_steps <= 0) throw ConfigError("TimeGrid: n_steps must be positive");
  if (!(t1_ns > t0_ns)) throw ConfigError("TimeGrid: t1 must exceed t0");
}

TimeGrid TimeGrid::over(double t0_ns, double t1_ns, int n_steps) {
  TimeGrid g{t0_ns, t1_ns, n_steps};
  g.validate();
  return g;
}

ShapeFunction make_shape(const TimeGrid& grid, double ramp_fraction) {
  grid.validate();
  if (ramp_fraction < 0.0 || ramp_fraction >= 0.5)
    throw ConfigError("make_shape: ramp_fraction must lie in [0, 0.5)");

  ShapeFunction shape{grid, VecXd::Ones(grid.n_steps), ramp_fraction};
  if (ramp_fraction == 0.0) return shape;

  const double ramp = ramp_fraction * grid.duration();
  for (int k = 0; k < grid.n_steps; ++k) {
    const double from_start = grid.midpoint(k) - grid.t0_ns;
    const double from_end = grid.t1_ns - grid.midpoint(k);
    if (from_start < ramp) {
      const double s = std::sin(0.5 * M_PI * from_start / ramp);
      shape.values[k] = s * s;
    } else if (from_end < ramp) {
      const double s = std::sin(0.5 * M_PI * from_end / ramp);
      shape.values[k] = s * s;
    }
  }
  return shape;
}

}  // namespace qsl
