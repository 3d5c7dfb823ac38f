#pragma once

#include <utility>
#include <vector>

#include "qsl/atoms.hpp"  // FieldConfiguration
#include "qsl/control_field.hpp"
#include "qsl/hamiltonian.hpp"

namespace qsl {

// Plaquette of frequency-tunable transmons with tunable couplers, modeled in
// a frame rotating at omega_rot. Couplers act on chain/ring neighbors; the
// nnn_coupling variant adds the plaquette diagonals. Each coupler contributes
// a hopping term g(t)(b+_n b_m + h.c.) plus a cross-Kerr shift g^2(t)/|eta|.
struct TransmonPlaquetteConfig {
  int n_transmons = 2;
  int levels = 5;
  std::vector<double> omega_base_radns;  // idle frequencies, one per transmon
  double omega_lo_radns = radns_from_mhz(6700.0);
  double omega_hi_radns = radns_from_mhz(7100.0);
  std::vector<double> alpha_radns;  // anharmonicities
  double eta_radns = radns_from_mhz(200.0);
  double g_lo_radns = radns_from_mhz(-40.0);
  double g_hi_radns = radns_from_mhz(5.0);
  double omega_rot_radns = radns_from_mhz(6900.0);
  double x_drive_bound_radns = radns_from_mhz(50.0);
  bool nnn_coupling = false;

  void validate() const;
  static TransmonPlaquetteConfig defaults(int n_transmons);
};

// Coupler pairs in control order for a given transmon count.
std::vector<std::pair<int, int>> transmon_pairs(int n_transmons, bool nnn_coupling);

std::pair<HamiltonianModel, std::vector<ControlField>> build_transmon_model(
    const TransmonPlaquetteConfig& config, FieldConfiguration fc, const TimeGrid& grid);

// Reconstructs the physical drive amplitude and frequency from the auxiliary
// rotating-frame quadratures: re + i*im = Omega(t) exp(i (wbar(t)-w_rot) t).
// Where the amplitude vanishes the frequency is reported as omega_rot.
struct LabDrive {
  ControlField amplitude;
  ControlField frequency;
};

LabDrive auxiliary_to_lab_fields(const ControlField& re, const ControlField& im,
                                 double omega_rot_radns);

}  // namespace qsl
