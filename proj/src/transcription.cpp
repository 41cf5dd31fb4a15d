/*
 Copyright 2026 The trajopt Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "trajopt/transcription.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace trajopt::gpm {

double time_transform(double t, double t0, double tf) {
  if (tf == t0) throw Error("time_transform: tf must differ from t0");
  return 2.0 * t / (tf - t0) - (tf + t0) / (tf - t0);
}

double inverse_time_transform(double tau, double t0, double tf) {
  if (tf == t0) throw Error("inverse_time_transform: tf must differ from t0");
  return 0.5 * ((tf - t0) * tau + (tf + t0));
}

DecisionLayout::DecisionLayout(int state_dim, int control_dim, int count)
    : n_(state_dim), m_(control_dim), k_(count) {
  if (n_ < 1 || m_ < 1) throw Error("DecisionLayout: dimensions must be positive");
  if (k_ < 1) throw Error("DecisionLayout: need at least one collocation node");
}

Vector DecisionLayout::pack(const Blocks& blocks) const {
  if (static_cast<int>(blocks.states.size()) != k_ + 1 ||
      static_cast<int>(blocks.controls.size()) != k_ ||
      blocks.final_state.size() != n_) {
    throw Error("DecisionLayout::pack: block counts do not match the layout");
  }
  Vector z(dimension());
  for (int i = 0; i <= k_; ++i) {
    if (blocks.states[i].size() != n_) throw Error("pack: state size mismatch");
    z.segment(state_offset(i), n_) = blocks.states[i];
  }
  z.segment(final_state_offset(), n_) = blocks.final_state;
  for (int k = 1; k <= k_; ++k) {
    if (blocks.controls[k - 1].size() != m_) {
      throw Error("pack: control size mismatch");
    }
    z.segment(control_offset(k), m_) = blocks.controls[k - 1];
  }
  return z;
}

DecisionLayout::Blocks DecisionLayout::unpack(const Vector& z) const {
  if (z.size() != dimension()) {
    throw Error("DecisionLayout::unpack: vector has the wrong dimension");
  }
  Blocks b;
  b.states.reserve(k_ + 1);
  for (int i = 0; i <= k_; ++i) b.states.push_back(z.segment(state_offset(i), n_));
  b.final_state = z.segment(final_state_offset(), n_);
  b.controls.reserve(k_);
  for (int k = 1; k <= k_; ++k) b.controls.push_back(z.segment(control_offset(k), m_));
  return b;
}

TranscribedNlp::TranscribedNlp(std::shared_ptr<const Plant> plant,
                               std::shared_ptr<const CostModel> cost,
                               BoundarySpec boundary, collocation::Grid grid)
    : plant_(std::move(plant)),
      cost_(std::move(cost)),
      boundary_(std::move(boundary)),
      grid_(std::move(grid)),
      layout_(plant_->state_dim(), plant_->control_dim(), grid_.count) {
  boundary_.validate();
  const int n = plant_->state_dim();
  if (boundary_.x0.size() != n) {
    throw Error("transcribe: boundary state dimension does not match the plant");
  }
  check_cost_dimensions(*cost_, n, plant_->control_dim());
  if (boundary_.control_bounds &&
      boundary_.control_bounds->lower.size() != plant_->control_dim()) {
    throw Error("transcribe: control bound dimension does not match the plant");
  }
  rows_.collocation_begin = 0;
  rows_.quadrature_begin = n * grid_.count;
  rows_.boundary_begin = rows_.quadrature_begin + n;
  rows_.total = rows_.boundary_begin + 2 * n;
}

double TranscribedNlp::node_time(int k) const {
  return inverse_time_transform(grid_.nodes[k - 1], boundary_.t0, boundary_.tf);
}

double TranscribedNlp::objective(const Vector& z) const {
  const int n = layout_.state_dim();
  const int m = layout_.control_dim();
  double running = 0.0;
  for (int k = 1; k <= grid_.count; ++k) {
    running += grid_.weights[k - 1] *
               cost_->running(z.segment(layout_.state_offset(k), n),
                              z.segment(layout_.control_offset(k), m), node_time(k));
  }
  return cost_->terminal(z.segment(layout_.final_state_offset(), n), boundary_.tf) +
         half_horizon() * running;
}

Vector TranscribedNlp::objective_gradient(const Vector& z) const {
  const int n = layout_.state_dim();
  const int m = layout_.control_dim();
  Vector grad = Vector::Zero(z.size());
  for (int k = 1; k <= grid_.count; ++k) {
    const RunningDerivatives d = cost_->running_derivs(
        z.segment(layout_.state_offset(k), n),
        z.segment(layout_.control_offset(k), m), node_time(k));
    const double scale = half_horizon() * grid_.weights[k - 1];
    grad.segment(layout_.state_offset(k), n) += scale * d.q;
    grad.segment(layout_.control_offset(k), m) += scale * d.r;
  }
  grad.segment(layout_.final_state_offset(), n) +=
      cost_->terminal_derivs(z.segment(layout_.final_state_offset(), n), boundary_.tf)
          .phi_x;
  return grad;
}

Vector TranscribedNlp::raw_residuals(const Vector& z) const {
  const int n = layout_.state_dim();
  const int m = layout_.control_dim();
  const int count = grid_.count;
  const double half = half_horizon();
  Vector res(rows_.total);
  Vector quad = Vector::Zero(n);
  for (int k = 1; k <= count; ++k) {
    Vector deriv = Vector::Zero(n);
    for (int i = 0; i <= count; ++i) {
      deriv += grid_.D(k - 1, i) * z.segment(layout_.state_offset(i), n);
    }
    const Vector f = plant_->dynamics(z.segment(layout_.state_offset(k), n),
                                      z.segment(layout_.control_offset(k), m),
                                      node_time(k));
    res.segment(rows_.collocation_begin + n * (k - 1), n) = deriv - half * f;
    quad += grid_.weights[k - 1] * f;
  }
  const Vector x_first = z.segment(layout_.state_offset(0), n);
  const Vector x_final = z.segment(layout_.final_state_offset(), n);
  res.segment(rows_.quadrature_begin, n) = x_final - x_first - half * quad;
  res.segment(rows_.boundary_begin, n) = x_first - boundary_.x0;
  res.segment(rows_.boundary_begin + n, n) = x_final - boundary_.x_target;
  return res;
}

Vector TranscribedNlp::residuals(const Vector& z) const {
  Vector res = raw_residuals(z);
  res.head(rows_.boundary_begin) /= half_horizon();
  return res;
}

Matrix TranscribedNlp::residual_jacobian(const Vector& z) const {
  const int n = layout_.state_dim();
  const int m = layout_.control_dim();
  const int count = grid_.count;
  const double scale = 1.0 / half_horizon();
  Matrix jac = Matrix::Zero(rows_.total, layout_.dimension());
  const Matrix eye = Matrix::Identity(n, n);
  for (int k = 1; k <= count; ++k) {
    const int row = rows_.collocation_begin + n * (k - 1);
    const Vector x = z.segment(layout_.state_offset(k), n);
    const Vector u = z.segment(layout_.control_offset(k), m);
    const Matrix fx = plant_->jacobian_x(x, u, node_time(k));
    const Matrix fu = plant_->jacobian_u(x, u, node_time(k));
    for (int i = 0; i <= count; ++i) {
      jac.block(row, layout_.state_offset(i), n, n).diagonal().array() +=
          scale * grid_.D(k - 1, i);
    }
    jac.block(row, layout_.state_offset(k), n, n) -= fx;
    jac.block(row, layout_.control_offset(k), n, m) -= fu;

    const double w = grid_.weights[k - 1];
    jac.block(rows_.quadrature_begin, layout_.state_offset(k), n, n) -= w * fx;
    jac.block(rows_.quadrature_begin, layout_.control_offset(k), n, m) -= w * fu;
  }
  jac.block(rows_.quadrature_begin, layout_.final_state_offset(), n, n) += scale * eye;
  jac.block(rows_.quadrature_begin, layout_.state_offset(0), n, n) -= scale * eye;
  jac.block(rows_.boundary_begin, layout_.state_offset(0), n, n) = eye;
  jac.block(rows_.boundary_begin + n, layout_.final_state_offset(), n, n) = eye;
  return jac;
}

Matrix TranscribedNlp::lagrangian_hessian(const Vector& z, const Vector& mult) const {
  const int n = layout_.state_dim();
  const int m = layout_.control_dim();
  const int count = grid_.count;
  Matrix hess = Matrix::Zero(layout_.dimension(), layout_.dimension());
  hess.block(layout_.final_state_offset(), layout_.final_state_offset(), n, n) =
      cost_->terminal_derivs(z.segment(layout_.final_state_offset(), n), boundary_.tf)
          .phi_xx;

  const Vector quad_mult = mult.segment(rows_.quadrature_begin, n);
  for (int k = 1; k <= count; ++k) {
    const int xo = layout_.state_offset(k);
    const int uo = layout_.control_offset(k);
    const double t = node_time(k);
    Vector xu(n + m);
    xu << z.segment(xo, n), z.segment(uo, m);

    const RunningDerivatives d = cost_->running_derivs(xu.head(n), xu.tail(m), t);
    Matrix block(n + m, n + m);
    block << d.Q, d.M, d.N, d.R;
    block *= half_horizon() * grid_.weights[k - 1];

    // Row weights v so that the constraint term is -v^T f(x_k, u_k).
    const Vector v = mult.segment(rows_.collocation_begin + n * (k - 1), n) +
                     grid_.weights[k - 1] * quad_mult;
    auto grad_vf = [&](const Vector& p) {
      Vector g(n + m);
      g.head(n) = plant_->jacobian_x(p.head(n), p.tail(m), t).transpose() * v;
      g.tail(m) = plant_->jacobian_u(p.head(n), p.tail(m), t).transpose() * v;
      return g;
    };
    Matrix curvature(n + m, n + m);
    Vector p = xu;
    for (int j = 0; j < n + m; ++j) {
      const double h = 1e-5 * std::max(1.0, std::abs(xu[j]));
      p[j] = xu[j] + h;
      const Vector gp = grad_vf(p);
      p[j] = xu[j] - h;
      const Vector gm = grad_vf(p);
      p[j] = xu[j];
      curvature.col(j) = (gp - gm) / (2.0 * h);
    }
    block -= 0.5 * (curvature + curvature.transpose());

    hess.block(xo, xo, n, n) += block.topLeftCorner(n, n);
    hess.block(xo, uo, n, m) += block.topRightCorner(n, m);
    hess.block(uo, xo, m, n) += block.bottomLeftCorner(m, n);
    hess.block(uo, uo, m, m) += block.bottomRightCorner(m, m);
  }
  return hess;
}

double TranscribedNlp::max_residual(const Vector& z) const {
  return raw_residuals(z).lpNorm<Eigen::Infinity>();
}

nlp::Problem TranscribedNlp::problem(bool analytic_derivatives) const {
  nlp::Problem p;
  p.dimension = layout_.dimension();
  p.num_equalities = rows_.total;
  p.objective = [this](const Vector& z) { return objective(z); };
  p.constraints = [this](const Vector& z) { return residuals(z); };
  if (analytic_derivatives) {
    p.gradient = [this](const Vector& z) { return objective_gradient(z); };
    p.jacobian = [this](const Vector& z) { return residual_jacobian(z); };
    p.lagrangian_hessian = [this](const Vector& z, const Vector& mult) {
      return lagrangian_hessian(z, mult);
    };
  }
  const int n = layout_.state_dim();
  const int m = layout_.control_dim();
  constexpr double inf = std::numeric_limits<double>::infinity();
  p.lower = Vector::Constant(p.dimension, -inf);
  p.upper = Vector::Constant(p.dimension, inf);
  if (boundary_.state_bounds) {
    for (int i = 0; i <= grid_.count; ++i) {
      p.lower.segment(layout_.state_offset(i), n) = boundary_.state_bounds->lower;
      p.upper.segment(layout_.state_offset(i), n) = boundary_.state_bounds->upper;
    }
    p.lower.segment(layout_.final_state_offset(), n) = boundary_.state_bounds->lower;
    p.upper.segment(layout_.final_state_offset(), n) = boundary_.state_bounds->upper;
  }
  if (boundary_.control_bounds) {
    for (int k = 1; k <= grid_.count; ++k) {
      p.lower.segment(layout_.control_offset(k), m) = boundary_.control_bounds->lower;
      p.upper.segment(layout_.control_offset(k), m) = boundary_.control_bounds->upper;
    }
  }
  return p;
}

TranscribedNlp transcribe(std::shared_ptr<const Plant> plant,
                          std::shared_ptr<const CostModel> cost,
                          const BoundarySpec& boundary,
                          const collocation::Grid& grid) {
  if (!plant || !cost) throw Error("transcribe: plant and cost are required");
  if (grid.count < 1) throw Error("transcribe: grid must have at least one node");
  return TranscribedNlp(std::move(plant), std::move(cost), boundary, grid);
}

Vector initial_guess(const TranscribedNlp& nlp, GuessStrategy strategy,
                     const Vector& control) {
  const DecisionLayout& layout = nlp.layout();
  const BoundarySpec& bc = nlp.boundary();
  const int count = layout.count();
  const Vector u = control.size() ? control : Vector::Zero(layout.control_dim());
  if (u.size() != layout.control_dim()) {
    throw Error("initial_guess: control has the wrong dimension");
  }
  DecisionLayout::Blocks blocks;
  blocks.controls.assign(count, u);
  if (strategy == GuessStrategy::kLinear) {
    for (int i = 0; i <= count; ++i) {
      const double s = 0.5 * (nlp.grid().support[i] + 1.0);
      blocks.states.push_back(bc.x0 + s * (bc.x_target - bc.x0));
    }
    blocks.final_state = bc.x_target;
    return layout.pack(blocks);
  }

  constexpr int kSteps = 1000;
  const double dt = bc.horizon() / kSteps;
  const Trajectory traj = rollout(nlp.plant(), bc.x0,
                                  std::vector<Vector>(kSteps, u), dt,
                                  Integrator::kEuler, bc.t0);
  auto sample = [&](double t) {
    const double pos = std::clamp((t - bc.t0) / dt, 0.0, double(kSteps));
    const int lo = std::min(static_cast<int>(pos), kSteps - 1);
    const double frac = pos - lo;
    return Vector((1.0 - frac) * traj.states[lo] + frac * traj.states[lo + 1]);
  };
  for (int i = 0; i <= count; ++i) {
    blocks.states.push_back(sample(
        inverse_time_transform(nlp.grid().support[i], bc.t0, bc.tf)));
  }
  blocks.final_state = traj.states.back();
  return layout.pack(blocks);
}

Trajectory extract_trajectory(const TranscribedNlp& nlp, const Vector& z,
                              int samples) {
  if (samples < 2) throw Error("extract_trajectory: need at least two samples");
  const DecisionLayout& layout = nlp.layout();
  const BoundarySpec& bc = nlp.boundary();
  const collocation::Grid& grid = nlp.grid();
  const auto blocks = layout.unpack(z);
  const int count = layout.count();

  Matrix state_values(count + 1, layout.state_dim());
  for (int i = 0; i <= count; ++i) state_values.row(i) = blocks.states[i].transpose();
  Matrix control_values(count, layout.control_dim());
  for (int k = 0; k < count; ++k) control_values.row(k) = blocks.controls[k].transpose();
  const Vector state_bary = collocation::barycentric_weights(grid.support);
  const Vector control_bary = collocation::barycentric_weights(grid.nodes);

  Trajectory traj;
  traj.dt = bc.horizon() / (samples - 1);
  for (int j = 0; j < samples; ++j) {
    const double t = j == samples - 1 ? bc.tf : bc.t0 + j * traj.dt;
    const double tau = j == samples - 1 ? 1.0 : time_transform(t, bc.t0, bc.tf);
    traj.times.push_back(t);
    if (j == samples - 1) {
      traj.states.push_back(blocks.final_state);
    } else {
      traj.states.push_back(
          collocation::lagrange_interpolate(grid.support, state_bary, state_values, tau));
      traj.controls.push_back(collocation::lagrange_interpolate(
          grid.nodes, control_bary, control_values, tau));
    }
  }
  return traj;
}

Vector control_at(const TranscribedNlp& nlp, const Vector& z, double tau) {
  const DecisionLayout& layout = nlp.layout();
  Matrix values(layout.count(), layout.control_dim());
  for (int k = 1; k <= layout.count(); ++k) {
    values.row(k - 1) = z.segment(layout.control_offset(k), layout.control_dim()).transpose();
  }
  const Vector& nodes = nlp.grid().nodes;
  return collocation::lagrange_interpolate(
      nodes, collocation::barycentric_weights(nodes), values, tau);
}

SolveResult solve(std::shared_ptr<const Plant> plant,
                  std::shared_ptr<const CostModel> cost,
                  const BoundarySpec& boundary, const SolveOptions& options,
                  const Vector& guess_control) {
  const TranscribedNlp nlp =
      transcribe(std::move(plant), std::move(cost), boundary,
                 collocation::make_grid(options.nodes));
  const Vector z0 = initial_guess(nlp, options.guess, guess_control);
  nlp::Options opts = options.nlp;
  opts.constraint_tol *= std::min(1.0, 2.0 / boundary.horizon());

  SolveResult out;
  out.solution = nlp::solve(nlp.problem(), z0, opts);
  out.objective = nlp.objective(out.solution.x);
  out.max_residual = nlp.max_residual(out.solution.x);
  out.trajectory = extract_trajectory(nlp, out.solution.x, options.samples);
  out.final_control = control_at(nlp, out.solution.x, 1.0);
  out.blocks = nlp.layout().unpack(out.solution.x);
  return out;
}

}  // namespace trajopt::gpm
