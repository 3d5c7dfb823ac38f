#pragma once

#include <vector>

#include "qsl/control_field.hpp"
#include "qsl/hamiltonian.hpp"

namespace qsl {

// States at every grid boundary (n_steps + 1 entries) plus the largest
// observed deviation of any stored state norm from one.
struct Trajectory {
  std::vector<VecXc> states;
  double max_norm_drift = 0.0;
};

// Per-step control values: column k holds every control sampled at the
// midpoint of interval k. Rows follow the model's control order.
MatXd control_table(const std::vector<ControlField>& fields);

// Computes exp(-i H dt) for one step by Hermitian eigendecomposition; exact
// for the piecewise-constant field on the interval. Owns all scratch space so
// repeated calls do not allocate. Not shareable across threads; create one
// per worker.
class StepPropagator {
 public:
  explicit StepPropagator(const HamiltonianModel& model);

  // Builds U = exp(-i H(c) dt) into the internal buffer and returns it.
  const MatXc& compute(const VecXd& controls, double dt);

  const MatXc& hamiltonian() const { return h_; }

 private:
  const HamiltonianModel* model_;
  MatXc h_, u_, tmp_;
  MatXd hr_, cos_part_, sin_part_, re_buf_, im_buf_;
  Eigen::SelfAdjointEigenSolver<MatXc> es_c_;
  Eigen::SelfAdjointEigenSolver<MatXd> es_r_;
  VecXd phases_;
};

Trajectory propagate_forward(const HamiltonianModel& model,
                             const std::vector<ControlField>& fields, const VecXc& psi0);

// Adjoint evolution from t1 down to t0: states[k] is the co-state at
// boundary k, states[n_steps] the supplied terminal co-state.
Trajectory propagate_backward(const HamiltonianModel& model,
                              const std::vector<ControlField>& fields, const VecXc& chi_t);

}  // namespace qsl
