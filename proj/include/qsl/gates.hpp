#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsl/hamiltonian.hpp"
#include "qsl/types.hpp"

namespace qsl {

enum class GateName { CZ, CNOT, SWAP, ZZZ, ZZZZ };

const char* to_string(GateName name);
GateName gate_name_from_string(const std::string& s);

struct GateTarget {
  std::string name;
  MatXc matrix;  // 2^q x 2^q logical unitary
  int n_qubits = 0;
  std::optional<double> gamma;
  bool phase_shifted = false;
};

// Constraint gates ZZZ/ZZZZ are exp(-i gamma Z...Z); their phase-shifted
// variants carry the global phase that leaves the all-|0> state exactly
// invariant, so models without a coupling out of |0...0> can realize them.
GateTarget make_gate(GateName name, std::optional<double> gamma = std::nullopt,
                     bool phase_shifted = false);

// Initial states are the logical basis states embedded into the physical
// level structure; targets are the gate applied to them.
struct TargetStateSet {
  std::vector<VecXc> initial;
  std::vector<VecXc> target;

  int size() const { return static_cast<int>(initial.size()); }
};

TargetStateSet embed_targets(const GateTarget& gate, const HamiltonianModel& model);

struct EntanglingPowerEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Monte Carlo mean linear entropy of U|product> over Haar-random product
// inputs, averaged over the single-qubit marginals. With this convention a
// CNOT scores 2/9. Deterministic for a fixed seed.
EntanglingPowerEstimate entangling_power_stats(const GateTarget& gate, int n_samples,
                                               std::uint64_t seed);
double entangling_power(const GateTarget& gate, int n_samples, std::uint64_t seed);

}  // namespace qsl
