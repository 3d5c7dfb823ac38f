#pragma once

#include "qsl/types.hpp"

namespace qsl {

// Uniform time grid on [t0, t1]. Field samples live at the midpoints of the
// n_steps intervals; propagated states live at the n_steps+1 boundaries.
struct TimeGrid {
  double t0_ns = 0.0;
  double t1_ns = 0.0;
  int n_steps = 0;

  double duration() const { return t1_ns - t0_ns; }
  double dt() const { return duration() / n_steps; }
  double boundary(int k) const { return t0_ns + k * dt(); }
  double midpoint(int k) const { return t0_ns + (k + 0.5) * dt(); }
  VecXd midpoints() const;

  bool valid() const { return n_steps > 0 && t1_ns > t0_ns; }
  void validate() const;

  static TimeGrid over(double t0_ns, double t1_ns, int n_steps);

  friend bool operator==(const TimeGrid& a, const TimeGrid& b) {
    return a.t0_ns == b.t0_ns && a.t1_ns == b.t1_ns && a.n_steps == b.n_steps;
  }
};

// Krotov update shape: flat top of 1 with smooth sine-squared ramps covering
// ramp_fraction * duration at each end. Strictly positive on every sample so
// the lambda/S division in the running cost is always defined.
struct ShapeFunction {
  TimeGrid grid;
  VecXd values;
  double ramp_fraction = 0.0;
};

ShapeFunction make_shape(const TimeGrid& grid, double ramp_fraction);

}  // namespace qsl
