#include "qsl/propagation.hpp"

namespace qsl {

MatXd control_table(const std::vector<ControlField>& fields) {
  if (fields.empty()) throw ConfigError("control_table: no fields");
  const TimeGrid& grid = fields.front().grid;
  MatXd table(static_cast<int>(fields.size()), grid.n_steps);
  for (std::size_t i = 0; i < fields.size(); ++i) {
    fields[i].validate();
    if (!(fields[i].grid == grid))
      throw ConfigError("control_table: field '" + fields[i].name + "' is on a different grid");
    table.row(static_cast<int>(i)) = fields[i].values.transpose();
  }
  return table;
}

StepPropagator::StepPropagator(const HamiltonianModel& model)
    : model_(&model),
      h_(model.dim, model.dim),
      u_(model.dim, model.dim),
      tmp_(model.dim, model.dim),
      hr_(model.dim, model.dim),
      cos_part_(model.dim, model.dim),
      sin_part_(model.dim, model.dim),
      re_buf_(model.dim, model.dim),
      im_buf_(model.dim, model.dim),
      phases_(model.dim) {}

const MatXc& StepPropagator::compute(const VecXd& controls, double dt) {
  model_->assemble(controls, h_);
  const int n = model_->dim;
  if (model_->real_valued) {
    // Real symmetric path: four real GEMMs instead of two complex ones.
    hr_ = h_.real();
    es_r_.compute(hr_);
    phases_ = es_r_.eigenvalues() * dt;
    const MatXd& v = es_r_.eigenvectors();
    cos_part_.noalias() = v * phases_.array().cos().matrix().asDiagonal();
    sin_part_.noalias() = v * phases_.array().sin().matrix().asDiagonal();
    re_buf_.noalias() = cos_part_ * v.transpose();
    im_buf_.noalias() = sin_part_ * v.transpose();
    u_.real() = re_buf_;
    u_.imag() = -im_buf_;
  } else {
    es_c_.compute(h_);
    phases_ = es_c_.eigenvalues() * dt;
    VecXc w(n);
    for (int i = 0; i < n; ++i) w[i] = Complex(std::cos(phases_[i]), -std::sin(phases_[i]));
    tmp_.noalias() = es_c_.eigenvectors() * w.asDiagonal();
    u_.noalias() = tmp_ * es_c_.eigenvectors().adjoint();
  }
  return u_;
}

namespace {

void check_inputs(const HamiltonianModel& model, const std::vector<ControlField>& fields,
                  const VecXc& state) {
  if (static_cast<int>(fields.size()) != static_cast<int>(model.control_names.size()))
    throw ConfigError("propagate: field count does not match the model's controls");
  if (state.size() != model.dim) throw ConfigError("propagate: state dimension mismatch");
  if (!state.allFinite()) throw std::runtime_error("propagate: non-finite state");
}

}  // namespace

Trajectory propagate_forward(const HamiltonianModel& model,
                             const std::vector<ControlField>& fields, const VecXc& psi0) {
  check_inputs(model, fields, psi0);
  const MatXd table = control_table(fields);
  const double dt = fields.front().grid.dt();
  const int n_steps = fields.front().grid.n_steps;

  Trajectory traj;
  traj.states.reserve(n_steps + 1);
  traj.states.push_back(psi0);
  const double ref_norm = psi0.norm();
  StepPropagator prop(model);
  for (int k = 0; k < n_steps; ++k) {
    const MatXc& u = prop.compute(table.col(k), dt);
    traj.states.push_back(u * traj.states.back());
    traj.max_norm_drift =
        std::max(traj.max_norm_drift, std::abs(traj.states.back().norm() - ref_norm));
  }
  return traj;
}

Trajectory propagate_backward(const HamiltonianModel& model,
                              const std::vector<ControlField>& fields, const VecXc& chi_t) {
  check_inputs(model, fields, chi_t);
  const MatXd table = control_table(fields);
  const double dt = fields.front().grid.dt();
  const int n_steps = fields.front().grid.n_steps;

  Trajectory traj;
  traj.states.assign(n_steps + 1, VecXc());
  traj.states[n_steps] = chi_t;
  const double ref_norm = chi_t.norm();
  StepPropagator prop(model);
  for (int k = n_steps - 1; k >= 0; --k) {
    const MatXc& u = prop.compute(table.col(k), dt);
    traj.states[k] = u.adjoint() * traj.states[k + 1];
    traj.max_norm_drift =
        std::max(traj.max_norm_drift, std::abs(traj.states[k].norm() - ref_norm));
  }
  return traj;
}

}  // namespace qsl
