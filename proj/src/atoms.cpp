#include "qsl/atoms.hpp"

#include <array>
#include <cmath>
#include <tuple>

namespace qsl {

const char* to_string(FieldConfiguration fc) {
  switch (fc) {
    case FieldConfiguration::atoms_parallel: return "atoms_parallel";
    case FieldConfiguration::atoms_phase: return "atoms_phase";
    case FieldConfiguration::atoms_sequential: return "atoms_sequential";
    case FieldConfiguration::sc_full: return "sc_full";
    case FieldConfiguration::sc_noX: return "sc_noX";
    case FieldConfiguration::sc_interaction: return "sc_interaction";
  }
  return "?";
}

FieldConfiguration field_configuration_from_string(const std::string& s) {
  for (auto fc : {FieldConfiguration::atoms_parallel, FieldConfiguration::atoms_phase,
                  FieldConfiguration::atoms_sequential, FieldConfiguration::sc_full,
                  FieldConfiguration::sc_noX, FieldConfiguration::sc_interaction}) {
    if (s == to_string(fc)) return fc;
  }
  throw ConfigError("unknown field configuration '" + s + "'");
}

void AtomArrayConfig::validate() const {
  if (n_atoms < 2 || n_atoms > 4) throw ConfigError("AtomArrayConfig: n_atoms must be 2, 3 or 4");
  if (geometry == AtomGeometry::pair && n_atoms != 2)
    throw ConfigError("AtomArrayConfig: pair geometry requires 2 atoms");
  if (geometry == AtomGeometry::triangle_plaquette && n_atoms != 3)
    throw ConfigError("AtomArrayConfig: triangle plaquette requires 3 atoms");
  if (geometry == AtomGeometry::square_plaquette && n_atoms != 4)
    throw ConfigError("AtomArrayConfig: square plaquette requires 4 atoms");
  if (!(v_radns > 0.0)) throw ConfigError("AtomArrayConfig: V must be positive");
  if (!(omega_max_radns > 0.0)) throw ConfigError("AtomArrayConfig: omega_max must be positive");
  if (delta_max_radns < 0.0) throw ConfigError("AtomArrayConfig: delta_max must be nonnegative");
}

namespace {

constexpr int kLevels = 3;  // |0>, |1>, |r>
constexpr int kRydberg = 2;

int pow_int(int base, int exp) {
  int r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// Interaction pairs (n, m, V_nm). Diagonal plaquette pairs carry V/8 in the
// planar-2D mode and V in the pseudo-2D mode.
std::vector<std::tuple<int, int, double>> atom_pairs(const AtomArrayConfig& cfg) {
  const bool planar = cfg.coupling_mode == CouplingMode::planar2d;
  const double v = cfg.v_radns;
  const double vdiag = planar ? v / 8.0 : v;
  switch (cfg.geometry) {
    case AtomGeometry::pair:
      return {{0, 1, v}};
    case AtomGeometry::triangle_plaquette:
      // L-shaped corner of a plaquette: (0,1) and (1,2) are edges, (0,2) the diagonal.
      return {{0, 1, v}, {1, 2, v}, {0, 2, vdiag}};
    case AtomGeometry::square_plaquette:
      return {{0, 1, v}, {1, 2, v}, {2, 3, v}, {3, 0, v}, {0, 2, vdiag}, {1, 3, vdiag}};
  }
  return {};
}

struct CouplingEntries {
  // (row, col) with row the |r> state and col the qubit-level state.
  std::vector<std::pair<int, int>> entries;
};

}  // namespace

std::pair<HamiltonianModel, std::vector<ControlField>> build_atom_model(
    const AtomArrayConfig& config, FieldConfiguration fc, const TimeGrid& grid) {
  config.validate();
  grid.validate();
  if (fc != FieldConfiguration::atoms_parallel && fc != FieldConfiguration::atoms_phase &&
      fc != FieldConfiguration::atoms_sequential)
    throw ConfigError("build_atom_model: field configuration must be one of atoms_*");

  const int n = config.n_atoms;
  const int dim = pow_int(kLevels, n);

  auto digit = [n](int idx, int atom) {
    return (idx / pow_int(kLevels, n - 1 - atom)) % kLevels;
  };

  HamiltonianModel model;
  model.dim = dim;
  model.n_qubits = n;
  model.real_valued = false;  // laser phases are live controls in every atoms_* configuration

  model.basis_labels.reserve(dim);
  for (int idx = 0; idx < dim; ++idx) {
    std::string label;
    for (int a = 0; a < n; ++a) label += "01r"[digit(idx, a)];
    model.basis_labels.push_back(label);
  }

  model.logical_states.resize(std::size_t{1} << n);
  for (std::size_t b = 0; b < model.logical_states.size(); ++b) {
    int idx = 0;
    for (int a = 0; a < n; ++a) idx = idx * kLevels + ((b >> (n - 1 - a)) & 1);
    model.logical_states[static_cast<std::size_t>(b)] = idx;
  }

  // Constant diagonal: van der Waals shifts of doubly excited Rydberg pairs.
  VecXd vdw = VecXd::Zero(dim);
  for (const auto& [a, b, v] : atom_pairs(config)) {
    for (int idx = 0; idx < dim; ++idx)
      if (digit(idx, a) == kRydberg && digit(idx, b) == kRydberg) vdw[idx] += v;
  }

  // Rydberg projector per atom and coupling entry lists per (atom, qubit level).
  std::vector<VecXd> ryd_proj(n, VecXd::Zero(dim));
  std::vector<std::array<CouplingEntries, 2>> couplings(n);
  for (int a = 0; a < n; ++a) {
    const int stride = pow_int(kLevels, n - 1 - a);
    for (int idx = 0; idx < dim; ++idx) {
      const int d = digit(idx, a);
      if (d == kRydberg) ryd_proj[a][idx] = 1.0;
      if (d == 0 || d == 1)
        couplings[a][d].entries.push_back({idx + (kRydberg - d) * stride, idx});
    }
  }

  // Control layout: channels 0..4 = Omega_dn, Omega_up, phi_dn, phi_up, Delta.
  // Global fields collapse the per-atom channels onto one shared control.
  const bool global = config.global_fields;
  const int n_groups = global ? 1 : n;
  auto control_index = [n_groups](int channel, int atom_group) {
    return channel * n_groups + atom_group;
  };
  auto group_of = [global](int atom) { return global ? 0 : atom; };

  std::vector<ControlField> fields(5 * n_groups);
  const char* channel_names[5] = {"omega_dn", "omega_up", "phi_dn", "phi_up", "delta"};
  const FieldRole channel_roles[5] = {FieldRole::rabi_amplitude, FieldRole::rabi_amplitude,
                                      FieldRole::laser_phase, FieldRole::laser_phase,
                                      FieldRole::detuning};
  for (int c = 0; c < 5; ++c) {
    for (int g = 0; g < n_groups; ++g) {
      ControlField& f = fields[control_index(c, g)];
      f.name = global ? channel_names[c] : channel_names[c] + std::string("_") + std::to_string(g);
      f.role = channel_roles[c];
      f.grid = grid;
      f.values = VecXd::Zero(grid.n_steps);
      if (c == 0 || c == 1) f.bounds = Bounds{0.0, config.omega_max_radns};
      if (c == 4) f.bounds = Bounds{-config.delta_max_radns, config.delta_max_radns};
    }
  }

  switch (fc) {
    case FieldConfiguration::atoms_parallel:
      break;  // everything optimized
    case FieldConfiguration::atoms_phase:
      // Only phi_up is optimized; Omega_up and Delta sit at their maxima and
      // the |0> coupling is off, so |0...0> is mapped onto itself exactly.
      for (int g = 0; g < n_groups; ++g) {
        fields[control_index(0, g)].frozen = true;
        fields[control_index(2, g)].frozen = true;
        auto& omega_up = fields[control_index(1, g)];
        omega_up.frozen = true;
        omega_up.values.setConstant(config.omega_max_radns);
        auto& delta = fields[control_index(4, g)];
        delta.frozen = true;
        delta.values.setConstant(config.delta_max_radns);
      }
      break;
    case FieldConfiguration::atoms_sequential: {
      // First half of the protocol drives only the |0> leg, second half only
      // the |1> leg; the detuning stays live throughout.
      const int half = grid.n_steps / 2;
      std::vector<std::uint8_t> first(grid.n_steps, 0), second(grid.n_steps, 0);
      for (int k = 0; k < grid.n_steps; ++k) (k < half ? first : second)[k] = 1;
      for (int g = 0; g < n_groups; ++g) {
        fields[control_index(0, g)].update_mask = first;
        fields[control_index(2, g)].update_mask = first;
        fields[control_index(1, g)].update_mask = second;
        fields[control_index(3, g)].update_mask = second;
      }
      break;
    }
    default:
      break;
  }

  // Unfrozen bounded fields start at the center of their range; random
  // guesses replace these values before any optimization. Masked samples are
  // pinned at zero (the sequential configuration switches field sets between
  // the two protocol halves).
  for (auto& f : fields) {
    if (!f.frozen && f.bounds) f.values.setConstant(0.5 * (f.bounds->lo + f.bounds->hi));
    for (int k = 0; k < grid.n_steps; ++k)
      if (!f.sample_updatable(k)) f.values[k] = 0.0;
  }

  model.control_names.reserve(fields.size());
  for (const auto& f : fields) model.control_names.push_back(f.name);

  const int dim_local = dim;
  model.assemble = [=](const VecXd& c, MatXc& h) {
    h.setZero();
    for (int idx = 0; idx < dim_local; ++idx) h(idx, idx) = vdw[idx];
    for (int a = 0; a < n; ++a) {
      const int g = group_of(a);
      const double delta = c[control_index(4, g)];
      for (int idx = 0; idx < dim_local; ++idx) {
        if (ryd_proj[a][idx] != 0.0) h(idx, idx) -= delta;
      }
      for (int l = 0; l < 2; ++l) {
        const double omega = c[control_index(l, g)];
        const double phi = c[control_index(2 + l, g)];
        const Complex z = 0.5 * omega * Complex(std::cos(phi), std::sin(phi));
        for (const auto& [row, col] : couplings[a][l].entries) {
          h(row, col) += z;
          h(col, row) += std::conj(z);
        }
      }
    }
  };

  model.control_derivative = [=](const VecXd& c, int k, MatXc& dh) {
    dh.setZero();
    const int channel = k / n_groups;
    const int g = k % n_groups;
    for (int a = 0; a < n; ++a) {
      if (group_of(a) != g) continue;
      if (channel == 4) {
        for (int idx = 0; idx < dim_local; ++idx) dh(idx, idx) -= ryd_proj[a][idx];
        continue;
      }
      const int l = (channel == 0 || channel == 2) ? 0 : 1;
      const double omega = c[control_index(l, g)];
      const double phi = c[control_index(2 + l, g)];
      const Complex phase(std::cos(phi), std::sin(phi));
      // d/dOmega of (Omega/2) e^{i phi} |r><l|, or d/dphi = i (Omega/2) e^{i phi} |r><l|.
      const Complex z = (channel < 2) ? 0.5 * phase : Complex(0, 0.5 * omega) * phase;
      for (const auto& [row, col] : couplings[a][l].entries) {
        dh(row, col) += z;
        dh(col, row) += std::conj(z);
      }
    }
  };

  return {std::move(model), std::move(fields)};
}

}  // namespace qsl
