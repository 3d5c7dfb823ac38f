#include <cmath>

#include "doctest.h"
#include "qsl/atoms.hpp"
#include "qsl/rng.hpp"
#include "qsl/transmons.hpp"

using namespace qsl;

namespace {

VecXd random_admissible_controls(const std::vector<ControlField>& fields, Rng& rng) {
  VecXd c(static_cast<int>(fields.size()));
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].bounds) {
      const auto& b = *fields[i].bounds;
      c[static_cast<int>(i)] = b.lo + (b.hi - b.lo) * rng.uniform01();
    } else {
      c[static_cast<int>(i)] = kTwoPi * (rng.uniform01() - 0.5);
    }
  }
  return c;
}

int atom_index(const std::string& label) {  // digits over {0, 1, r}
  int idx = 0;
  for (char ch : label) idx = idx * 3 + (ch == 'r' ? 2 : ch - '0');
  return idx;
}

}  // namespace

TEST_CASE("atom model realizes the array Hamiltonian") {
  const TimeGrid grid = TimeGrid::over(0.0, 100.0, 10);
  AtomArrayConfig cfg;  // defaults: pair, pseudo-2D, V/2pi = 40 MHz

  SUBCASE("all controls zero leaves only the vdW diagonal") {
    auto [model, fields] = build_atom_model(cfg, FieldConfiguration::atoms_parallel, grid);
    const VecXd zeros = VecXd::Zero(static_cast<int>(fields.size()));
    const MatXc h = model.assemble_copy(zeros);
    CHECK((h - MatXc(h.diagonal().asDiagonal())).norm() == 0.0);
    const int rr = atom_index("rr");
    CHECK(h(rr, rr).real() == doctest::Approx(radns_from_mhz(40.0)).epsilon(1e-14));
    CHECK(h(atom_index("r0"), atom_index("r0")) == Complex(0.0, 0.0));
  }

  SUBCASE("laser coupling carries the 1/2 prefactor") {
    auto [model, fields] = build_atom_model(cfg, FieldConfiguration::atoms_parallel, grid);
    VecXd c = VecXd::Zero(static_cast<int>(fields.size()));
    c[1] = cfg.omega_max_radns;  // omega_up, phi_up = 0
    const MatXc h = model.assemble_copy(c);
    CHECK(std::abs(h(atom_index("r0"), atom_index("10"))) ==
          doctest::Approx(0.5 * cfg.omega_max_radns).epsilon(1e-14));
  }

  SUBCASE("planar-2D diagonals are reduced to V/8") {
    AtomArrayConfig square;
    square.n_atoms = 4;
    square.geometry = AtomGeometry::square_plaquette;
    square.coupling_mode = CouplingMode::planar2d;
    auto [model, fields] = build_atom_model(square, FieldConfiguration::atoms_phase, grid);
    const VecXd zeros = VecXd::Zero(static_cast<int>(fields.size()));
    const MatXc h = model.assemble_copy(zeros);
    const int d02 = atom_index("r0r0");  // atoms 0 and 2: a plaquette diagonal
    const int d01 = atom_index("rr00");
    CHECK(h(d02, d02).real() == doctest::Approx(square.v_radns / 8.0).epsilon(1e-14));
    CHECK(h(d01, d01).real() == doctest::Approx(square.v_radns).epsilon(1e-14));
  }

  SUBCASE("detuning enters with a minus sign on the Rydberg projector") {
    auto [model, fields] = build_atom_model(cfg, FieldConfiguration::atoms_parallel, grid);
    VecXd c = VecXd::Zero(static_cast<int>(fields.size()));
    c[4] = cfg.delta_max_radns;
    const MatXc h = model.assemble_copy(c);
    CHECK(h(atom_index("r0"), atom_index("r0")).real() ==
          doctest::Approx(-cfg.delta_max_radns).epsilon(1e-14));
    CHECK(h(atom_index("rr"), atom_index("rr")).real() ==
          doctest::Approx(cfg.v_radns - 2.0 * cfg.delta_max_radns).epsilon(1e-14));
  }

  SUBCASE("hermiticity over random admissible controls") {
    for (auto fc : {FieldConfiguration::atoms_parallel, FieldConfiguration::atoms_phase}) {
      auto [model, fields] = build_atom_model(cfg, fc, grid);
      Rng rng(11);
      for (int trial = 0; trial < 100; ++trial) {
        const MatXc h = model.assemble_copy(random_admissible_controls(fields, rng));
        CHECK((h - h.adjoint()).norm() < 1e-12);
      }
    }
  }

  SUBCASE("site-dependent fields double the control count per atom") {
    AtomArrayConfig site = cfg;
    site.global_fields = false;
    auto [model, fields] = build_atom_model(site, FieldConfiguration::atoms_parallel, grid);
    CHECK(fields.size() == 10);
    // a drive on atom 1 must not touch atom 0
    VecXd c = VecXd::Zero(10);
    c[3] = site.omega_max_radns;  // omega_up of atom 1
    const MatXc h = model.assemble_copy(c);
    CHECK(std::abs(h(atom_index("r0"), atom_index("10"))) == 0.0);
    CHECK(std::abs(h(atom_index("0r"), atom_index("01"))) ==
          doctest::Approx(0.5 * site.omega_max_radns).epsilon(1e-14));
  }

  SUBCASE("configuration freezing") {
    auto [model, fields] = build_atom_model(cfg, FieldConfiguration::atoms_phase, grid);
    int live = 0;
    for (const auto& f : fields) {
      if (f.name == "omega_up") {
        CHECK(f.frozen);
        CHECK(f.values.minCoeff() == cfg.omega_max_radns);
      }
      if (f.name == "delta") {
        CHECK(f.frozen);
        CHECK(f.values.minCoeff() == cfg.delta_max_radns);
      }
      if (f.name == "omega_dn" || f.name == "phi_dn") {
        CHECK(f.frozen);
        CHECK(f.values.cwiseAbs().maxCoeff() == 0.0);
      }
      if (!f.frozen) {
        ++live;
        CHECK(f.name == "phi_up");
      }
    }
    CHECK(live == 1);
  }

  SUBCASE("sequential configuration splits the grid in half") {
    auto [model, fields] = build_atom_model(cfg, FieldConfiguration::atoms_sequential, grid);
    for (const auto& f : fields) {
      if (f.name == "omega_dn" || f.name == "phi_dn") {
        for (int k = 0; k < grid.n_steps; ++k) CHECK(f.sample_updatable(k) == (k < 5));
      }
      if (f.name == "omega_up" || f.name == "phi_up") {
        for (int k = 0; k < grid.n_steps; ++k) CHECK(f.sample_updatable(k) == (k >= 5));
        CHECK(f.values.head(5).cwiseAbs().maxCoeff() == 0.0);
      }
    }
  }

  SUBCASE("invalid configs are rejected") {
    AtomArrayConfig bad = cfg;
    bad.n_atoms = 5;
    CHECK_THROWS_AS(build_atom_model(bad, FieldConfiguration::atoms_phase, grid), ConfigError);
    CHECK_THROWS_AS(build_atom_model(cfg, FieldConfiguration::sc_full, grid), ConfigError);
  }
}

TEST_CASE("transmon model realizes the rotating-frame Hamiltonian") {
  const TimeGrid grid = TimeGrid::over(0.0, 10.0, 10);
  const auto cfg = TransmonPlaquetteConfig::defaults(2);

  auto controls_at = [&](const std::vector<ControlField>& fields, double omega, double g,
                         double xre = 0.0, double xim = 0.0) {
    VecXd c(static_cast<int>(fields.size()));
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const auto& f = fields[i];
      double v = 0.0;
      if (f.role == FieldRole::qubit_frequency) v = omega;
      if (f.role == FieldRole::coupling) v = g;
      if (f.role == FieldRole::x_drive_re) v = xre;
      if (f.role == FieldRole::x_drive_im) v = xim;
      c[static_cast<int>(i)] = v;
    }
    return c;
  };

  SUBCASE("anharmonicity shows on the second excited level") {
    auto [model, fields] = build_transmon_model(cfg, FieldConfiguration::sc_full, grid);
    const MatXc h = model.assemble_copy(controls_at(fields, cfg.omega_rot_radns, 0.0));
    const int idx20 = 2 * cfg.levels;  // |20>
    CHECK(h(idx20, idx20).real() == doctest::Approx(-cfg.alpha_radns[0]).epsilon(1e-12));
    CHECK(h.cwiseAbs().sum() ==
          doctest::Approx(std::abs(h.diagonal().real().sum())).epsilon(1e-12));
  }

  SUBCASE("cross-Kerr shift of |11> is g^2/|eta|") {
    auto [model, fields] = build_transmon_model(cfg, FieldConfiguration::sc_full, grid);
    const double g = radns_from_mhz(-40.0);
    const MatXc h = model.assemble_copy(controls_at(fields, cfg.omega_rot_radns, g));
    const int idx11 = cfg.levels + 1;
    CHECK(h(idx11, idx11).real() ==
          doctest::Approx(g * g / std::abs(cfg.eta_radns)).epsilon(1e-12));
    // hopping element between |10> and |01>
    CHECK(h(cfg.levels, 1).real() == doctest::Approx(g).epsilon(1e-12));
  }

  SUBCASE("X drive fills the lowering ladder with sqrt factors") {
    auto [model, fields] = build_transmon_model(cfg, FieldConfiguration::sc_full, grid);
    const double xre = radns_from_mhz(50.0), xim = radns_from_mhz(-20.0);
    const MatXc h =
        model.assemble_copy(controls_at(fields, cfg.omega_rot_radns, 0.0, xre, xim));
    // <0| H |1> on transmon 0 = (1/2)(xre + i xim) * sqrt(1)
    CHECK(h(0, cfg.levels).real() == doctest::Approx(0.5 * xre).epsilon(1e-12));
    CHECK(h(0, cfg.levels).imag() == doctest::Approx(0.5 * xim).epsilon(1e-12));
    CHECK(std::abs(h(cfg.levels, 2 * cfg.levels)) ==
          doctest::Approx(0.5 * std::hypot(xre, xim) * std::sqrt(2.0)).epsilon(1e-12));
    CHECK((h - h.adjoint()).norm() < 1e-12);
  }

  SUBCASE("nnn coupling adds the plaquette diagonals") {
    auto cfg3 = TransmonPlaquetteConfig::defaults(3);
    cfg3.nnn_coupling = true;
    auto [model, fields] = build_transmon_model(cfg3, FieldConfiguration::sc_noX, grid);
    int idx_g02 = -1;
    for (std::size_t i = 0; i < fields.size(); ++i)
      if (fields[i].name == "g_02") idx_g02 = static_cast<int>(i);
    REQUIRE(idx_g02 >= 0);
    VecXd c = controls_at(fields, cfg3.omega_rot_radns, 0.0);
    const double g = radns_from_mhz(5.0);
    c[idx_g02] = g;
    const MatXc h = model.assemble_copy(c);
    const int idx100 = 25, idx001 = 1;
    CHECK(h(idx001, idx100).real() == doctest::Approx(g).epsilon(1e-12));
  }

  SUBCASE("hermiticity over random admissible controls") {
    for (auto fc :
         {FieldConfiguration::sc_full, FieldConfiguration::sc_noX, FieldConfiguration::sc_interaction}) {
      auto [model, fields] = build_transmon_model(cfg, fc, grid);
      Rng rng(13);
      for (int trial = 0; trial < 100; ++trial) {
        const MatXc h = model.assemble_copy(random_admissible_controls(fields, rng));
        CHECK((h - h.adjoint()).norm() < 1e-12);
      }
    }
  }

  SUBCASE("interaction configuration pins couplers at maximum magnitude") {
    auto [model, fields] = build_transmon_model(cfg, FieldConfiguration::sc_interaction, grid);
    for (const auto& f : fields) {
      if (f.role == FieldRole::coupling) {
        CHECK(f.frozen);
        CHECK(f.values.minCoeff() == cfg.g_lo_radns);
      } else if (f.role == FieldRole::qubit_frequency) {
        CHECK(!f.frozen);
      } else {
        CHECK(f.frozen);
        CHECK(f.values.cwiseAbs().maxCoeff() == 0.0);
      }
    }
    CHECK(model.real_valued);
    auto [model_full, fields_full] = build_transmon_model(cfg, FieldConfiguration::sc_full, grid);
    CHECK(!model_full.real_valued);
  }

  SUBCASE("top-level mask marks truncation states") {
    auto [model, fields] = build_transmon_model(cfg, FieldConfiguration::sc_noX, grid);
    CHECK(model.top_level_mask.sum() == doctest::Approx(9.0));  // 25 - 4*4
    CHECK(model.top_level_mask[cfg.levels - 1] == 1.0);
    CHECK(model.top_level_mask[0] == 0.0);
  }
}

TEST_CASE("auxiliary quadratures map back to lab amplitude and frequency") {
  const double omega_rot = radns_from_mhz(6900.0);
  const TimeGrid grid = TimeGrid::over(0.0, 10.0, 200);

  ControlField re{"xre", FieldRole::x_drive_re, grid, VecXd::Zero(grid.n_steps), {}, false, {}};
  ControlField im{"xim", FieldRole::x_drive_im, grid, VecXd::Zero(grid.n_steps), {}, false, {}};

  SUBCASE("constant real quadrature drives at the rotating-frame frequency") {
    re.values.setConstant(0.25);
    const LabDrive lab = auxiliary_to_lab_fields(re, im, omega_rot);
    CHECK(lab.amplitude.values.minCoeff() == doctest::Approx(0.25));
    CHECK(lab.amplitude.values.maxCoeff() == doctest::Approx(0.25));
    for (int k = 0; k < grid.n_steps; ++k)
      CHECK(lab.frequency.values[k] == doctest::Approx(omega_rot).epsilon(1e-12));
  }

  SUBCASE("rotating quadrature pair shifts the drive frequency") {
    // re + i*im = A exp(i delta t) corresponds to wbar = omega_rot + delta.
    const double amp = 0.3, delta = radns_from_mhz(30.0);
    for (int k = 0; k < grid.n_steps; ++k) {
      const double t = grid.midpoint(k);
      re.values[k] = amp * std::cos(delta * t);
      im.values[k] = amp * std::sin(delta * t);
    }
    const LabDrive lab = auxiliary_to_lab_fields(re, im, omega_rot);
    for (int k = 0; k < grid.n_steps; ++k) {
      CHECK(lab.amplitude.values[k] == doctest::Approx(amp).epsilon(1e-12));
      CHECK(lab.frequency.values[k] == doctest::Approx(omega_rot + delta).epsilon(1e-9));
    }
    // conjugate pair lowers the frequency instead
    im.values = -im.values;
    const LabDrive lab2 = auxiliary_to_lab_fields(re, im, omega_rot);
    for (int k = 0; k < grid.n_steps; ++k)
      CHECK(lab2.frequency.values[k] == doctest::Approx(omega_rot - delta).epsilon(1e-9));
  }

  SUBCASE("vanishing drive reports the rotating-frame frequency") {
    const LabDrive lab = auxiliary_to_lab_fields(re, im, omega_rot);
    CHECK(lab.amplitude.values.cwiseAbs().maxCoeff() == 0.0);
    for (int k = 0; k < grid.n_steps; ++k) CHECK(lab.frequency.values[k] == omega_rot);
  }
}
