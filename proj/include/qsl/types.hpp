#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qsl {

using Complex = std::complex<double>;
using VecXc = Eigen::VectorXcd;
using MatXc = Eigen::MatrixXcd;
using VecXd = Eigen::VectorXd;
using MatXd = Eigen::MatrixXd;

inline constexpr double kTwoPi = 6.28318530717958647692528676655900577;

// All internal frequencies are angular, in rad/ns. User-facing values are
// ordinary frequencies in MHz (the 2*pi is applied here and nowhere else).
inline constexpr double radns_from_mhz(double f_mhz) { return kTwoPi * f_mhz * 1e-3; }
inline constexpr double mhz_from_radns(double w_radns) { return w_radns / (kTwoPi * 1e-3); }

// Invalid configuration or input (maps to CLI exit code 2).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qsl
