#include "qsl/krotov.hpp"

#include <cmath>

namespace qsl {

namespace {

// tanh argument clip for mapping raw guesses into the open interval; keeps
// |u| <= atanh(0.99) so the bound slope never fully degenerates at start.
constexpr double kBoundClip = 0.99;

double clamp_into_bounds(double value, const Bounds& b) {
  const double center = 0.5 * (b.hi + b.lo);
  const double half = 0.5 * (b.hi - b.lo);
  return center + std::clamp((value - center) / half, -kBoundClip, kBoundClip) * half;
}

}  // namespace

void KrotovOptions::validate() const {
  if (!(lambda_scale_fraction > 0.0 && lambda_scale_fraction < 1.0))
    throw ConfigError("KrotovOptions: lambda_scale_fraction must lie in (0, 1)");
  for (const auto& [name, lambda] : lambda_override)
    if (!(lambda > 0.0)) throw ConfigError("KrotovOptions: lambda for '" + name + "' must be positive");
  if (max_iterations < 1) throw ConfigError("KrotovOptions: max_iterations must be >= 1");
  if (!(epsilon_max > 0.0 && epsilon_max < 1.0))
    throw ConfigError("KrotovOptions: epsilon_max must lie in (0, 1)");
  if (ramp_fraction < 0.0 || ramp_fraction >= 0.5)
    throw ConfigError("KrotovOptions: ramp_fraction must lie in [0, 0.5)");
  if (fixed_point_iterations < 1)
    throw ConfigError("KrotovOptions: fixed_point_iterations must be >= 1");
}

double gate_error(const std::vector<VecXc>& states_at_t1, const TargetStateSet& targets) {
  if (states_at_t1.size() != targets.target.size())
    throw ConfigError("gate_error: state/target count mismatch");
  if (states_at_t1.empty()) throw ConfigError("gate_error: empty target set");
  double overlap = 0.0;
  for (std::size_t l = 0; l < states_at_t1.size(); ++l)
    overlap += targets.target[l].dot(states_at_t1[l]).real();
  return 1.0 - overlap / static_cast<double>(states_at_t1.size());
}

std::vector<VecXc> costate_boundary(const TargetStateSet& targets) {
  if (targets.target.empty()) throw ConfigError("costate_boundary: empty target set");
  const double scale = 1.0 / (2.0 * static_cast<double>(targets.target.size()));
  std::vector<VecXc> chis;
  chis.reserve(targets.target.size());
  for (const auto& t : targets.target) chis.push_back(scale * t);
  return chis;
}

namespace {

struct LiveControl {
  int index = 0;
  std::string name;
  bool bounded = false;
  Bounds bounds;
  const std::vector<std::uint8_t>* mask = nullptr;  // null = all samples live
  VecXd u;      // current internal values (u-space when bounded)
  VecXd u_ref;  // values committed by the previous iteration
  VecXd shape;
  double lambda = 0.0;
  double range = 0.0;  // internal-range normalization for lambda auto-scaling

  bool live_at(int k) const { return mask == nullptr || (*mask)[static_cast<std::size_t>(k)] != 0; }
  double field_value(int k) const { return bounded ? from_unbounded(u[k], bounds) : u[k]; }
};

}  // namespace

OptimizationResult krotov_optimize(const HamiltonianModel& model,
                                   std::vector<ControlField> fields,
                                   const TargetStateSet& targets, const KrotovOptions& options) {
  options.validate();
  if (fields.size() != model.control_names.size())
    throw ConfigError("krotov_optimize: field list does not match the model's controls");
  if (targets.initial.empty() || targets.initial.size() != targets.target.size())
    throw ConfigError("krotov_optimize: invalid target set");
  for (const auto& s : targets.initial)
    if (s.size() != model.dim) throw ConfigError("krotov_optimize: target dimension mismatch");

  MatXd table = control_table(fields);
  const TimeGrid grid = fields.front().grid;
  const int n_steps = grid.n_steps;
  const double dt = grid.dt();
  const int n_targets = targets.size();
  const int dim = model.dim;

  // Live (optimized) controls in u-space with per-field shapes.
  std::vector<LiveControl> live;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].frozen) continue;
    LiveControl lc;
    lc.index = static_cast<int>(i);
    lc.name = fields[i].name;
    lc.mask = fields[i].update_mask.empty() ? nullptr : &fields[i].update_mask;
    lc.bounded = fields[i].bounds.has_value();
    lc.u = VecXd::Zero(n_steps);
    if (lc.bounded) {
      lc.bounds = *fields[i].bounds;
      lc.range = 2.0 * std::atanh(kBoundClip);
      for (int k = 0; k < n_steps; ++k) {
        if (!lc.live_at(k)) continue;
        const double clamped = clamp_into_bounds(table(lc.index, k), lc.bounds);
        lc.u[k] = to_unbounded(clamped, lc.bounds);
        table(lc.index, k) = clamped;
      }
    } else {
      lc.range = kTwoPi;
      for (int k = 0; k < n_steps; ++k) lc.u[k] = table(lc.index, k);
    }
    lc.u_ref = lc.u;
    auto shape_it = options.shape_override.find(lc.name);
    lc.shape = shape_it != options.shape_override.end()
                   ? shape_it->second.values
                   : make_shape(grid, options.ramp_fraction).values;
    if (lc.shape.size() != n_steps)
      throw ConfigError("krotov_optimize: shape grid mismatch for field '" + lc.name + "'");
    live.push_back(std::move(lc));
  }

  OptimizationResult result;

  // Per-step propagators are kept and reused by the next backward pass (the
  // fields do not change between a forward sweep and the following backward
  // sweep). For very large problems the cache is disabled and the backward
  // pass recomputes each step from the control table instead.
  const bool cache_propagators =
      static_cast<double>(n_steps) * dim * dim * sizeof(Complex) <= 2.0e9;
  std::vector<MatXc> step_u(cache_propagators ? n_steps : 0, MatXc(dim, dim));
  MatXc psi(dim, n_targets);
  for (int l = 0; l < n_targets; ++l) psi.col(l) = targets.initial[l];

  StepPropagator prop(model);
  auto stored_or_fresh_u = [&](int k) -> const MatXc& {
    return cache_propagators ? step_u[k] : prop.compute(table.col(k), dt);
  };
  for (int k = 0; k < n_steps; ++k) {
    const MatXc& u = cache_propagators ? (step_u[k] = prop.compute(table.col(k), dt))
                                       : prop.compute(table.col(k), dt);
    psi = u * psi;
  }

  auto unpack_states = [&](const MatXc& m) {
    std::vector<VecXc> states;
    states.reserve(n_targets);
    for (int l = 0; l < n_targets; ++l) states.push_back(m.col(l));
    return states;
  };

  double eps = gate_error(unpack_states(psi), targets);
  result.epsilon_trace.push_back(eps);
  result.j_trace.push_back(eps);

  auto finalize = [&](const MatXc& final_states) {
    for (auto& lc : live)
      for (int k = 0; k < n_steps; ++k)
        if (lc.live_at(k)) table(lc.index, k) = lc.field_value(k);
    for (std::size_t i = 0; i < fields.size(); ++i)
      fields[i].values = table.row(static_cast<int>(i)).transpose();
    result.fields = std::move(fields);
    if (model.top_level_mask.size() == dim) {
      for (int l = 0; l < n_targets; ++l) {
        const double pop =
            (model.top_level_mask.array() * final_states.col(l).array().abs2()).sum();
        result.highest_level_population = std::max(result.highest_level_population, pop);
      }
    }
    for (const auto& lc : live) result.lambdas[lc.name] = lc.lambda;
  };

  if (eps <= options.epsilon_max || live.empty()) {
    result.converged = eps <= options.epsilon_max;
    finalize(psi);
    return result;
  }

  std::vector<MatXc> chi(n_steps + 1, MatXc(dim, n_targets));
  MatXc dh(dim, dim), grad_tmp(dim, n_targets);

  // Sum over targets of Im <chi_l| dH/dc_k |psi_l| at step k, in u-space.
  auto update_integrand = [&](const VecXd& controls, const LiveControl& lc, int k) {
    model.control_derivative(controls, lc.index, dh);
    grad_tmp.noalias() = dh * psi;
    double imag_sum = 0.0;
    for (int l = 0; l < n_targets; ++l) imag_sum += chi[k].col(l).dot(grad_tmp.col(l)).imag();
    return lc.bounded ? imag_sum * bound_slope(lc.u[k], lc.bounds) : imag_sum;
  };

  bool lambdas_set = false;
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    // Backward co-state propagation with the previous iteration's fields.
    const auto chi_t1 = costate_boundary(targets);
    for (int l = 0; l < n_targets; ++l) chi[n_steps].col(l) = chi_t1[l];
    for (int k = n_steps - 1; k >= 0; --k)
      chi[k].noalias() = stored_or_fresh_u(k).adjoint() * chi[k + 1];

    if (!lambdas_set) {
      // Dry gradient pass at the guess fields: lambda_k is fixed so that the
      // largest first update is lambda_scale_fraction of the field's range.
      std::vector<double> peak(live.size(), 0.0);
      for (int l = 0; l < n_targets; ++l) psi.col(l) = targets.initial[l];
      for (int k = 0; k < n_steps; ++k) {
        for (std::size_t i = 0; i < live.size(); ++i) {
          if (!live[i].live_at(k)) continue;
          const double g = update_integrand(table.col(k), live[i], k);
          peak[i] = std::max(peak[i], std::abs(live[i].shape[k] * g));
        }
        psi = stored_or_fresh_u(k) * psi;
      }
      for (std::size_t i = 0; i < live.size(); ++i) {
        auto it = options.lambda_override.find(live[i].name);
        if (it != options.lambda_override.end()) {
          live[i].lambda = it->second;
        } else if (peak[i] > 0.0) {
          live[i].lambda = peak[i] / (options.lambda_scale_fraction * live[i].range);
        } else {
          live[i].lambda = 1.0;
        }
      }
      lambdas_set = true;
    }

    // Forward sweep with immediate feedback.
    double running_cost = 0.0;
    for (int l = 0; l < n_targets; ++l) psi.col(l) = targets.initial[l];
    VecXd controls(table.rows());
    for (int k = 0; k < n_steps; ++k) {
      controls = table.col(k);
      for (int round = 0; round < options.fixed_point_iterations; ++round) {
        double max_change = 0.0;
        for (auto& lc : live) {
          if (!lc.live_at(k)) continue;
          const double g = update_integrand(controls, lc, k);
          const double u_new = lc.u_ref[k] + lc.shape[k] / lc.lambda * g;
          max_change = std::max(max_change, std::abs(u_new - lc.u[k]));
          lc.u[k] = u_new;
          controls[lc.index] = lc.field_value(k);
        }
        if (max_change < 1e-13) break;
      }
      for (const auto& lc : live) {
        if (!lc.live_at(k)) continue;
        const double du = lc.u[k] - lc.u_ref[k];
        running_cost += lc.lambda / lc.shape[k] * du * du * dt;
      }
      table.col(k) = controls;
      if (cache_propagators) {
        step_u[k] = prop.compute(controls, dt);
        psi = step_u[k] * psi;
      } else {
        psi = prop.compute(controls, dt) * psi;
      }
    }

    eps = gate_error(unpack_states(psi), targets);
    const double total_cost = eps + running_cost;
    if (total_cost > result.j_trace.back() + options.stall_tolerance) result.monotonic = false;
    result.epsilon_trace.push_back(eps);
    result.j_trace.push_back(total_cost);
    result.iterations_used = iter;
    for (auto& lc : live) lc.u_ref = lc.u;

    if (eps <= options.epsilon_max) {
      result.converged = true;
      break;
    }
  }

  finalize(psi);
  return result;
}

}  // namespace qsl
