#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsl/time_grid.hpp"
#include "qsl/types.hpp"

namespace qsl {

enum class FieldRole {
  rabi_amplitude,
  laser_phase,
  detuning,
  qubit_frequency,
  coupling,
  x_drive_re,
  x_drive_im,
};

const char* to_string(FieldRole role);

struct Bounds {
  double lo = 0.0;
  double hi = 0.0;
};

// A named, time-gridded real control. One value per grid interval (sampled at
// the interval midpoint). Frozen fields are never touched by the optimizer;
// an update mask can additionally pin individual samples (used by the
// sequential field configuration, which is active only on half the grid).
struct ControlField {
  std::string name;
  FieldRole role = FieldRole::rabi_amplitude;
  TimeGrid grid;
  VecXd values;
  std::optional<Bounds> bounds;
  bool frozen = false;
  std::vector<std::uint8_t> update_mask;  // empty = every sample updatable

  bool sample_updatable(int k) const {
    return update_mask.empty() || update_mask[static_cast<std::size_t>(k)] != 0;
  }
  void validate() const;
};

// tanh reparametrization of a bounded control. The unbounded variable u is
// what the optimizer updates; mapping back can never leave (lo, hi). The tanh
// is capped at 1 - 1e-12 since it saturates to exactly 1.0 in doubles near
// |u| ~ 19, which would put the value on the bound itself.
template <typename T>
T from_unbounded(T u, const Bounds& b) {
  constexpr T cap = 1.0 - 1e-12;
  const T t = std::clamp<T>(std::tanh(u), -cap, cap);
  return 0.5 * (b.hi - b.lo) * t + 0.5 * (b.hi + b.lo);
}

double to_unbounded(double value, const Bounds& b);

// d(value)/du at a given u; vanishes as the field saturates at its bounds.
inline double bound_slope(double u, const Bounds& b) {
  const double t = std::tanh(u);
  return 0.5 * (b.hi - b.lo) * (1.0 - t * t);
}

struct RandomFieldSpec {
  int m_min = 1;
  int m_max = 20;
  std::uint64_t seed = 0;
  double scale = 1.0;

  void validate() const;
};

// Smooth random field: truncated Fourier series on [t0, t1] with a DC offset,
// m drawn uniformly from [m_min, m_max] and all coefficients from N(0, sigma)
// with variance sigma = 1/(2m+1), so the field itself has unit variance at
// every instant. Deterministic for a fixed seed.
ControlField generate_random_field(const RandomFieldSpec& spec, const TimeGrid& grid);

// Same series evaluated for explicitly given coefficients (test hook).
VecXd fourier_field_values(double a0, const VecXd& a, const VecXd& b, const TimeGrid& grid);

}  // namespace qsl
