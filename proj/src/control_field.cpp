#include "qsl/control_field.hpp"

#include "qsl/rng.hpp"

namespace qsl {

const char* to_string(FieldRole role) {
  switch (role) {
    case FieldRole::rabi_amplitude: return "rabi_amplitude";
    case FieldRole::laser_phase: return "laser_phase";
    case FieldRole::detuning: return "detuning";
    case FieldRole::qubit_frequency: return "qubit_frequency";
    case FieldRole::coupling: return "coupling";
    case FieldRole::x_drive_re: return "x_drive_re";
    case FieldRole::x_drive_im: return "x_drive_im";
  }
  return "?";
}

void ControlField::validate() const {
  grid.validate();
  if (values.size() != grid.n_steps)
    throw ConfigError("ControlField '" + name + "': values length must equal n_steps");
  if (!values.allFinite())
    throw ConfigError("ControlField '" + name + "': non-finite values");
  if (bounds) {
    if (!(bounds->lo < bounds->hi))
      throw ConfigError("ControlField '" + name + "': bounds min must be below max");
    if ((values.array() < bounds->lo).any() || (values.array() > bounds->hi).any())
      throw ConfigError("ControlField '" + name + "': values violate bounds");
  }
  if (!update_mask.empty() && update_mask.size() != static_cast<std::size_t>(grid.n_steps))
    throw ConfigError("ControlField '" + name + "': update_mask length mismatch");
}

double to_unbounded(double value, const Bounds& b) {
  if (!(b.lo < b.hi)) throw ConfigError("bounds min must be below max");
  const double x = (2.0 * value - b.hi - b.lo) / (b.hi - b.lo);
  if (x <= -1.0 || x >= 1.0)
    throw std::domain_error("to_unbounded: value must lie strictly inside the bounds");
  return std::atanh(x);
}

void RandomFieldSpec::validate() const {
  if (m_min < 1 || m_max < m_min)
    throw ConfigError("RandomFieldSpec: m range must be nonempty with m >= 1");
}

VecXd fourier_field_values(double a0, const VecXd& a, const VecXd& b, const TimeGrid& grid) {
  grid.validate();
  if (a.size() != b.size()) throw ConfigError("fourier_field_values: coefficient size mismatch");
  const double period = grid.duration();
  VecXd values = VecXd::Constant(grid.n_steps, a0);
  for (int k = 0; k < grid.n_steps; ++k) {
    const double t = grid.midpoint(k) - grid.t0_ns;
    double acc = 0.0;
    for (int j = 1; j <= a.size(); ++j) {
      const double arg = kTwoPi * j * t / period;
      acc += a[j - 1] * std::cos(arg) + b[j - 1] * std::sin(arg);
    }
    values[k] += std::sqrt(2.0) * acc;
  }
  return values;
}

ControlField generate_random_field(const RandomFieldSpec& spec, const TimeGrid& grid) {
  spec.validate();
  grid.validate();

  Rng rng(spec.seed);
  const int m = rng.uniform_int(spec.m_min, spec.m_max);
  const double stddev = std::sqrt(1.0 / (2.0 * m + 1.0));

  const double a0 = rng.normal(0.0, stddev);
  VecXd a(m), b(m);
  for (int j = 0; j < m; ++j) {
    a[j] = rng.normal(0.0, stddev);
    b[j] = rng.normal(0.0, stddev);
  }

  ControlField field;
  field.name = "random_guess";
  field.grid = grid;
  field.values = spec.scale * fourier_field_values(a0, a, b, grid);
  return field;
}

}  // namespace qsl
