#include "qsl/transmons.hpp"

#include <cmath>

namespace qsl {

void TransmonPlaquetteConfig::validate() const {
  if (n_transmons < 2 || n_transmons > 4)
    throw ConfigError("TransmonPlaquetteConfig: n_transmons must be 2, 3 or 4");
  if (levels < 3) throw ConfigError("TransmonPlaquetteConfig: need at least 3 levels");
  if (omega_base_radns.size() != static_cast<std::size_t>(n_transmons))
    throw ConfigError("TransmonPlaquetteConfig: omega_base needs one entry per transmon");
  if (alpha_radns.size() != static_cast<std::size_t>(n_transmons))
    throw ConfigError("TransmonPlaquetteConfig: alpha needs one entry per transmon");
  if (!(omega_lo_radns < omega_hi_radns))
    throw ConfigError("TransmonPlaquetteConfig: omega window must be nonempty");
  for (double w : omega_base_radns)
    if (w < omega_lo_radns || w > omega_hi_radns)
      throw ConfigError("TransmonPlaquetteConfig: omega_base outside tunable window");
  if (!(g_lo_radns < 0.0 && g_hi_radns >= 0.0))
    throw ConfigError("TransmonPlaquetteConfig: coupler range must satisfy g_min < 0 <= g_max");
  if (eta_radns == 0.0) throw ConfigError("TransmonPlaquetteConfig: eta must be nonzero");
  if (!(x_drive_bound_radns > 0.0))
    throw ConfigError("TransmonPlaquetteConfig: x_drive_bound must be positive");
}

TransmonPlaquetteConfig TransmonPlaquetteConfig::defaults(int n_transmons) {
  // Idle frequencies and anharmonicities are staggered inside the quoted
  // hardware windows; see the configuration reference in the README.
  static const double base_mhz[4] = {6780.0, 7050.0, 6875.0, 6960.0};
  static const double alpha_mhz[4] = {200.0, 196.0, 204.0, 199.0};
  TransmonPlaquetteConfig cfg;
  cfg.n_transmons = n_transmons;
  for (int i = 0; i < n_transmons; ++i) {
    cfg.omega_base_radns.push_back(radns_from_mhz(base_mhz[i]));
    cfg.alpha_radns.push_back(radns_from_mhz(alpha_mhz[i]));
  }
  return cfg;
}

std::vector<std::pair<int, int>> transmon_pairs(int n_transmons, bool nnn_coupling) {
  std::vector<std::pair<int, int>> pairs;
  switch (n_transmons) {
    case 2: pairs = {{0, 1}}; break;
    case 3: pairs = {{0, 1}, {1, 2}}; break;
    case 4: pairs = {{0, 1}, {1, 2}, {2, 3}, {3, 0}}; break;
    default: throw ConfigError("transmon_pairs: n_transmons must be 2, 3 or 4");
  }
  if (nnn_coupling) {
    if (n_transmons == 3) pairs.push_back({0, 2});
    if (n_transmons == 4) {
      pairs.push_back({0, 2});
      pairs.push_back({1, 3});
    }
  }
  return pairs;
}

std::pair<HamiltonianModel, std::vector<ControlField>> build_transmon_model(
    const TransmonPlaquetteConfig& config, FieldConfiguration fc, const TimeGrid& grid) {
  config.validate();
  grid.validate();
  if (fc != FieldConfiguration::sc_full && fc != FieldConfiguration::sc_noX &&
      fc != FieldConfiguration::sc_interaction)
    throw ConfigError("build_transmon_model: field configuration must be one of sc_*");

  const int n = config.n_transmons;
  const int levels = config.levels;
  int dim = 1;
  for (int i = 0; i < n; ++i) dim *= levels;

  auto stride = [&](int site) {
    int s = 1;
    for (int i = site + 1; i < n; ++i) s *= levels;
    return s;
  };
  auto digit = [&](int idx, int site) { return (idx / stride(site)) % levels; };

  HamiltonianModel model;
  model.dim = dim;
  model.n_qubits = n;

  model.basis_labels.reserve(dim);
  for (int idx = 0; idx < dim; ++idx) {
    std::string label;
    for (int s = 0; s < n; ++s) label += static_cast<char>('0' + digit(idx, s));
    model.basis_labels.push_back(label);
  }
  model.logical_states.resize(std::size_t{1} << n);
  for (std::size_t b = 0; b < model.logical_states.size(); ++b) {
    int idx = 0;
    for (int s = 0; s < n; ++s) idx = idx * levels + ((b >> (n - 1 - s)) & 1);
    model.logical_states[b] = idx;
  }
  model.top_level_mask = VecXd::Zero(dim);
  for (int idx = 0; idx < dim; ++idx)
    for (int s = 0; s < n; ++s)
      if (digit(idx, s) == levels - 1) model.top_level_mask[idx] = 1.0;

  // Per-site diagonals and lowering-operator entry lists.
  std::vector<VecXd> number(n, VecXd::Zero(dim));
  VecXd kerr_diag = VecXd::Zero(dim);  // -alpha/2 * n(n-1), summed over sites
  for (int s = 0; s < n; ++s) {
    for (int idx = 0; idx < dim; ++idx) {
      const double d = digit(idx, s);
      number[s][idx] = d;
      kerr_diag[idx] -= 0.5 * config.alpha_radns[s] * d * (d - 1.0);
    }
  }
  struct LoweringEntry {
    int row, col;  // <row| b |col> = value, so row has one excitation less
    double value;
  };
  std::vector<std::vector<LoweringEntry>> lowering(n);
  for (int s = 0; s < n; ++s) {
    for (int idx = 0; idx < dim; ++idx) {
      const int d = digit(idx, s);
      if (d > 0) lowering[s].push_back({idx - stride(s), idx, std::sqrt(double(d))});
    }
  }

  const auto pairs = transmon_pairs(n, config.nnn_coupling);
  const int n_pairs = static_cast<int>(pairs.size());
  // Hopping entries (upper triangle) and cross-Kerr occupation products per pair.
  struct HopEntry {
    int row, col;
    double value;
  };
  std::vector<std::vector<HopEntry>> hop(n_pairs);
  std::vector<VecXd> occ_product(n_pairs, VecXd::Zero(dim));
  for (int p = 0; p < n_pairs; ++p) {
    const auto [a, b] = pairs[p];
    for (int idx = 0; idx < dim; ++idx) {
      const int da = digit(idx, a), db = digit(idx, b);
      occ_product[p][idx] = double(da) * double(db);
      // b+_a b_b moving one excitation from b to a
      if (da < levels - 1 && db > 0) {
        const int row = idx + stride(a) - stride(b);
        hop[p].push_back({row, idx, std::sqrt(double(da + 1)) * std::sqrt(double(db))});
      }
    }
  }

  // Control layout: [omega_0..omega_{n-1}, g per pair, xre_0.., xim_0..].
  const int idx_omega = 0;
  const int idx_g = n;
  const int idx_xre = n + n_pairs;
  const int idx_xim = n + n_pairs + n;
  const int n_controls = 2 * n + n_pairs + n;

  std::vector<ControlField> fields(n_controls);
  for (int s = 0; s < n; ++s) {
    auto& f = fields[idx_omega + s];
    f.name = "omega_" + std::to_string(s);
    f.role = FieldRole::qubit_frequency;
    f.grid = grid;
    f.values = VecXd::Zero(grid.n_steps);
    f.bounds = Bounds{config.omega_lo_radns, config.omega_hi_radns};
  }
  for (int p = 0; p < n_pairs; ++p) {
    auto& f = fields[idx_g + p];
    f.name = "g_" + std::to_string(pairs[p].first) + std::to_string(pairs[p].second);
    f.role = FieldRole::coupling;
    f.grid = grid;
    f.values = VecXd::Zero(grid.n_steps);
    f.bounds = Bounds{config.g_lo_radns, config.g_hi_radns};
  }
  for (int s = 0; s < n; ++s) {
    for (int q = 0; q < 2; ++q) {
      auto& f = fields[(q == 0 ? idx_xre : idx_xim) + s];
      f.name = (q == 0 ? "xre_" : "xim_") + std::to_string(s);
      f.role = q == 0 ? FieldRole::x_drive_re : FieldRole::x_drive_im;
      f.grid = grid;
      f.values = VecXd::Zero(grid.n_steps);
      f.bounds = Bounds{-config.x_drive_bound_radns, config.x_drive_bound_radns};
    }
  }

  switch (fc) {
    case FieldConfiguration::sc_full:
      break;
    case FieldConfiguration::sc_noX:
      for (int s = 0; s < n; ++s) {
        fields[idx_xre + s].frozen = true;
        fields[idx_xim + s].frozen = true;
      }
      break;
    case FieldConfiguration::sc_interaction:
      // Couplers pinned at maximum magnitude, drives off; the tunable
      // frequencies are the only live controls.
      for (int p = 0; p < n_pairs; ++p) {
        fields[idx_g + p].frozen = true;
        fields[idx_g + p].values.setConstant(config.g_lo_radns);
      }
      for (int s = 0; s < n; ++s) {
        fields[idx_xre + s].frozen = true;
        fields[idx_xim + s].frozen = true;
      }
      break;
    default:
      break;
  }

  // With both X quadratures frozen at zero every term is real symmetric.
  bool real = true;
  for (int s = 0; s < n; ++s) {
    const auto& re = fields[idx_xre + s];
    const auto& im = fields[idx_xim + s];
    if (!re.frozen || re.values.any() || !im.frozen || im.values.any()) real = false;
  }
  model.real_valued = real;

  // Unfrozen bounded fields start at the center of their range; random
  // guesses replace these values before any optimization.
  for (auto& f : fields)
    if (!f.frozen && f.bounds) f.values.setConstant(0.5 * (f.bounds->lo + f.bounds->hi));

  model.control_names.reserve(fields.size());
  for (const auto& f : fields) model.control_names.push_back(f.name);

  const double omega_rot = config.omega_rot_radns;
  const double abs_eta = std::abs(config.eta_radns);
  const int dim_local = dim;
  const int nn = n;

  model.assemble = [=](const VecXd& c, MatXc& h) {
    h.setZero();
    for (int idx = 0; idx < dim_local; ++idx) h(idx, idx) = kerr_diag[idx];
    for (int s = 0; s < nn; ++s) {
      const double detuning = c[idx_omega + s] - omega_rot;
      const double re = c[idx_xre + s];
      const double im = c[idx_xim + s];
      if (detuning != 0.0)
        for (int idx = 0; idx < dim_local; ++idx)
          if (number[s][idx] != 0.0) h(idx, idx) += detuning * number[s][idx];
      if (re != 0.0 || im != 0.0) {
        // (1/2)[b (re + i im) + b+ (re - i im)]
        const Complex z(0.5 * re, 0.5 * im);
        for (const auto& e : lowering[s]) {
          h(e.row, e.col) += z * e.value;
          h(e.col, e.row) += std::conj(z) * e.value;
        }
      }
    }
    for (int p = 0; p < n_pairs; ++p) {
      const double g = c[idx_g + p];
      if (g == 0.0) continue;
      for (const auto& e : hop[p]) {
        h(e.row, e.col) += g * e.value;
        h(e.col, e.row) += g * e.value;
      }
      const double kerr = g * g / abs_eta;
      for (int idx = 0; idx < dim_local; ++idx)
        if (occ_product[p][idx] != 0.0) h(idx, idx) += kerr * occ_product[p][idx];
    }
  };

  model.control_derivative = [=](const VecXd& c, int k, MatXc& dh) {
    dh.setZero();
    if (k < idx_g) {
      const int s = k - idx_omega;
      for (int idx = 0; idx < dim_local; ++idx) dh(idx, idx) = number[s][idx];
    } else if (k < idx_xre) {
      const int p = k - idx_g;
      const double g = c[k];
      for (const auto& e : hop[p]) {
        dh(e.row, e.col) += e.value;
        dh(e.col, e.row) += e.value;
      }
      const double dkerr = 2.0 * g / abs_eta;
      for (int idx = 0; idx < dim_local; ++idx) dh(idx, idx) += dkerr * occ_product[p][idx];
    } else if (k < idx_xim) {
      const int s = k - idx_xre;
      for (const auto& e : lowering[s]) {
        dh(e.row, e.col) += 0.5 * e.value;
        dh(e.col, e.row) += 0.5 * e.value;
      }
    } else {
      const int s = k - idx_xim;
      for (const auto& e : lowering[s]) {
        dh(e.row, e.col) += Complex(0.0, 0.5) * e.value;
        dh(e.col, e.row) += Complex(0.0, -0.5) * e.value;
      }
    }
  };

  return {std::move(model), std::move(fields)};
}

LabDrive auxiliary_to_lab_fields(const ControlField& re, const ControlField& im,
                                 double omega_rot_radns) {
  re.validate();
  im.validate();
  if (!(re.grid == im.grid)) throw ConfigError("auxiliary_to_lab_fields: grids must match");

  const int n = re.grid.n_steps;
  LabDrive out;
  out.amplitude = ControlField{"drive_amplitude", FieldRole::rabi_amplitude, re.grid,
                               VecXd::Zero(n), std::nullopt, false, {}};
  out.frequency = ControlField{"drive_frequency", FieldRole::qubit_frequency, re.grid,
                               VecXd::Constant(n, omega_rot_radns), std::nullopt, false, {}};

  double prev_phase = 0.0;
  bool have_prev = false;
  for (int k = 0; k < n; ++k) {
    const double amp = std::hypot(re.values[k], im.values[k]);
    out.amplitude.values[k] = amp;
    if (amp <= 0.0) continue;  // frequency stays omega_rot by convention
    double phase = std::atan2(im.values[k], re.values[k]);
    if (have_prev) {
      // unwrap against the previous defined sample
      while (phase - prev_phase > M_PI) phase -= kTwoPi;
      while (phase - prev_phase < -M_PI) phase += kTwoPi;
    }
    prev_phase = phase;
    have_prev = true;
    const double t = re.grid.midpoint(k);
    if (t > 0.0) out.frequency.values[k] = omega_rot_radns + phase / t;
  }
  return out;
}

}  // namespace qsl
