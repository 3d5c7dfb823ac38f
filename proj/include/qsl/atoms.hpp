#pragma once

#include <utility>
#include <vector>

#include "qsl/control_field.hpp"
#include "qsl/hamiltonian.hpp"

namespace qsl {

enum class AtomGeometry { pair, triangle_plaquette, square_plaquette };
enum class CouplingMode { pseudo2d, planar2d };

// Named sets of frozen-field assignments for the optimizations; atoms_* apply
// to the neutral-atom model, sc_* to the transmon model.
enum class FieldConfiguration {
  atoms_parallel,
  atoms_phase,
  atoms_sequential,
  sc_full,
  sc_noX,
  sc_interaction,
};

const char* to_string(FieldConfiguration fc);
FieldConfiguration field_configuration_from_string(const std::string& s);

// Array of three-level atoms (qubit levels |0>, |1> and a Rydberg level |r>)
// with van der Waals coupling between Rydberg pairs. In pseudo-2D mode all
// pairs couple with strength V; in planar-2D mode nearest neighbors keep V
// and plaquette diagonals are reduced to V/8.
struct AtomArrayConfig {
  int n_atoms = 2;
  AtomGeometry geometry = AtomGeometry::pair;
  CouplingMode coupling_mode = CouplingMode::pseudo2d;
  double v_radns = radns_from_mhz(40.0);
  double omega_max_radns = radns_from_mhz(4.0);
  double delta_max_radns = radns_from_mhz(12.0);
  bool global_fields = true;

  void validate() const;
};

std::pair<HamiltonianModel, std::vector<ControlField>> build_atom_model(
    const AtomArrayConfig& config, FieldConfiguration fc, const TimeGrid& grid);

}  // namespace qsl
