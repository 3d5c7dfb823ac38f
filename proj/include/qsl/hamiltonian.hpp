#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qsl/types.hpp"

namespace qsl {

// A generator mapping a vector of control values (one entry per control, in
// the order of the accompanying ControlField list) to a Hermitian matrix on a
// fixed tensor-product level structure. Immutable after construction; both
// callables only write into caller-provided workspace, so evaluation is
// reentrant and safe to share across threads.
struct HamiltonianModel {
  int dim = 0;
  int n_qubits = 0;
  std::vector<std::string> basis_labels;
  // Physical index of each logical computational-basis state, ordered by the
  // logical index (site 0 = most significant bit).
  std::vector<int> logical_states;
  std::vector<std::string> control_names;
  // True when H is real symmetric for every admissible control vector
  // (all phase-like controls frozen at zero); enables a faster eigensolver.
  bool real_valued = false;
  // Diagonal 0/1 mask marking basis states where any site occupies its
  // highest level; empty when the model has no truncation to monitor.
  VecXd top_level_mask;

  std::function<void(const VecXd& controls, MatXc& h)> assemble;
  std::function<void(const VecXd& controls, int k, MatXc& dh)> control_derivative;

  MatXc assemble_copy(const VecXd& controls) const {
    MatXc h(dim, dim);
    assemble(controls, h);
    return h;
  }
};

}  // namespace qsl
