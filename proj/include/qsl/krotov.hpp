#pragma once

#include <map>
#include <string>
#include <vector>

#include "qsl/gates.hpp"
#include "qsl/hamiltonian.hpp"
#include "qsl/propagation.hpp"
#include "qsl/time_grid.hpp"

namespace qsl {

struct KrotovOptions {
  // Step-size weights lambda_k are auto-scaled on the first iteration so that
  // the largest first update of each field is roughly this fraction of the
  // field's (internal) range, then kept fixed. Explicit per-field values in
  // lambda_override skip the auto-scaling.
  double lambda_scale_fraction = 0.05;
  std::map<std::string, double> lambda_override;
  int max_iterations = 1500;
  double epsilon_max = 1e-3;
  // Update shape S(t): flat top with sine-squared ramps; per-field override.
  double ramp_fraction = 0.05;
  std::map<std::string, ShapeFunction> shape_override;
  // Tolerated cost increase per iteration before the run is flagged
  // non-monotonic (signals lambda too small or the grid too coarse).
  double stall_tolerance = 1e-10;
  // Rounds of self-consistent re-evaluation of dH/du at the updated field
  // values within each time step.
  int fixed_point_iterations = 3;

  void validate() const;
};

struct OptimizationResult {
  std::vector<ControlField> fields;
  std::vector<double> epsilon_trace;  // entry 0 is the guess error
  std::vector<double> j_trace;        // total cost J = eps_T + running cost
  bool converged = false;
  int iterations_used = 0;
  bool monotonic = true;
  // Final-time population of states with any site in its highest level
  // (truncation diagnostic; 0 when the model defines no top-level mask).
  double highest_level_population = 0.0;
  std::map<std::string, double> lambdas;

  double final_error() const { return epsilon_trace.back(); }
};

// eps_T = 1 - (1/N) sum_l Re<target_l|state_l>; phase-sensitive by design.
double gate_error(const std::vector<VecXc>& states_at_t1, const TargetStateSet& targets);

// Terminal co-states -d(eps_T)/d<psi_l| = |target_l>/(2N).
std::vector<VecXc> costate_boundary(const TargetStateSet& targets);

// Krotov's method with immediate time-local feedback: co-states are
// propagated backward with the previous fields, then the grid is swept
// forward, updating every live field at each step from the current co-state
// and the freshly propagated state before taking the step. Bounded fields are
// updated through their tanh reparametrization and can never leave their
// bounds. Stops at eps_T <= epsilon_max or after max_iterations.
OptimizationResult krotov_optimize(const HamiltonianModel& model,
                                   std::vector<ControlField> fields,
                                   const TargetStateSet& targets, const KrotovOptions& options);

}  // namespace qsl
