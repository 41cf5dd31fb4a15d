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

#include "trajopt/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace trajopt {

void Trajectory::validate() const {
  if (states.size() != controls.size() + 1) {
    throw Error("trajectory: states count must equal controls count + 1");
  }
  if (times.size() != states.size()) {
    throw Error("trajectory: times count must equal states count");
  }
  if (!controls.empty() && !(dt > 0.0)) {
    throw Error("trajectory: dt must be positive");
  }
  for (std::size_t k = 1; k < times.size(); ++k) {
    // Relative tolerance 1e-12 plus the rounding of the stored time stamps.
    const double step = times[k] - times[k - 1];
    const double slack = 1e-12 * dt + 4.0 * std::numeric_limits<double>::epsilon() *
                                          std::abs(times[k]);
    if (!(std::abs(step - dt) <= slack)) {
      throw Error("trajectory: non-uniform time step at index " +
                  std::to_string(k));
    }
  }
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (!states[k].allFinite()) {
      throw NonFiniteError("trajectory: non-finite state", static_cast<int>(k));
    }
  }
  for (std::size_t k = 0; k < controls.size(); ++k) {
    if (!controls[k].allFinite()) {
      throw NonFiniteError("trajectory: non-finite control",
                           static_cast<int>(k));
    }
  }
}

LinearPlant::LinearPlant(Matrix a, Matrix b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_.rows() != a_.cols() || b_.rows() != a_.rows()) {
    throw Error("LinearPlant: A must be n x n and B n x m");
  }
}

Vector LinearPlant::dynamics(const Vector& x, const Vector& u, double) const {
  return a_ * x + b_ * u;
}

Matrix LinearPlant::jacobian_x(const Vector&, const Vector&, double) const {
  return a_;
}

Matrix LinearPlant::jacobian_u(const Vector&, const Vector&, double) const {
  return b_;
}

namespace {

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

QuadraticCost::QuadraticCost(Weights w) : w_(std::move(w)) {
  const auto n = w_.Q.rows();
  const auto m = w_.R.rows();
  if (w_.Q.cols() != n || w_.R.cols() != m || w_.W_f.rows() != n ||
      w_.W_f.cols() != n) {
    throw Error("QuadraticCost: weight dimensions disagree");
  }
  w_.Q = symmetrized(w_.Q);
  w_.R = symmetrized(w_.R);
  w_.W_f = symmetrized(w_.W_f);
  if (w_.S.size() == 0) w_.S = Matrix::Zero(m, n);
  if (w_.x_ref.size() == 0) w_.x_ref = Vector::Zero(n);
  if (w_.u_ref.size() == 0) w_.u_ref = Vector::Zero(m);
  if (w_.x_target.size() == 0) w_.x_target = Vector::Zero(n);
  if (w_.S.rows() != m || w_.S.cols() != n || w_.x_ref.size() != n ||
      w_.u_ref.size() != m || w_.x_target.size() != n) {
    throw Error("QuadraticCost: reference dimensions disagree");
  }
}

void check_cost_dimensions(const CostModel& cost, int n, int m) {
  const auto dims = cost.dimensions();
  if (dims && (dims->first != n || dims->second != m)) {
    throw Error("cost dimensions (" + std::to_string(dims->first) + ", " +
                std::to_string(dims->second) + ") do not match the plant (" +
                std::to_string(n) + ", " + std::to_string(m) + ")");
  }
}

double QuadraticCost::running(const Vector& x, const Vector& u, double) const {
  const Vector dx = x - w_.x_ref;
  const Vector du = u - w_.u_ref;
  return dx.dot(w_.Q * dx) + du.dot(w_.R * du) + u.dot(w_.S * dx);
}

double QuadraticCost::terminal(const Vector& x, double) const {
  const Vector dx = x - w_.x_target;
  return dx.dot(w_.W_f * dx);
}

RunningDerivatives QuadraticCost::running_derivs(const Vector& x, const Vector& u,
                                                 double t) const {
  const Vector dx = x - w_.x_ref;
  const Vector du = u - w_.u_ref;
  RunningDerivatives d;
  d.value = running(x, u, t);
  d.q = 2.0 * w_.Q * dx + w_.S.transpose() * u;
  d.r = 2.0 * w_.R * du + w_.S * dx;
  d.Q = 2.0 * w_.Q;
  d.R = 2.0 * w_.R;
  d.N = w_.S;
  d.M = d.N.transpose();
  return d;
}

TerminalDerivatives QuadraticCost::terminal_derivs(const Vector& x,
                                                   double tf) const {
  TerminalDerivatives d;
  d.value = terminal(x, tf);
  d.phi_x = 2.0 * w_.W_f * (x - w_.x_target);
  d.phi_xx = 2.0 * w_.W_f;
  return d;
}

void BoundarySpec::validate() const {
  if (!(tf > t0)) throw Error("boundary: tf must exceed t0");
  if (x0.size() != x_target.size()) {
    throw Error("boundary: x0 and x_target dimensions differ");
  }
  auto check = [](const std::optional<Bounds>& b, const char* what) {
    if (!b) return;
    if (b->lower.size() != b->upper.size()) {
      throw Error(std::string("boundary: ") + what + " bound sizes differ");
    }
    for (Eigen::Index i = 0; i < b->lower.size(); ++i) {
      if (b->lower[i] > b->upper[i]) {
        throw Error(std::string("boundary: ") + what + " bound lo > hi at " +
                    std::to_string(i));
      }
    }
  };
  check(control_bounds, "control");
  check(state_bounds, "state");
  if (state_bounds && state_bounds->lower.size() != x0.size()) {
    throw Error("boundary: state bounds dimension mismatch");
  }
}

Matrix finite_diff_jacobian(const std::function<Vector(const Vector&)>& f,
                            const Vector& x, double h) {
  if (!(h > 0.0)) throw Error("finite_diff_jacobian: h must be positive");
  const auto n = x.size();
  Matrix jac;
  Vector xp = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double step = h * std::max(1.0, std::abs(x[i]));
    xp[i] = x[i] + step;
    const Vector fp = f(xp);
    xp[i] = x[i] - step;
    const Vector fm = f(xp);
    xp[i] = x[i];
    if (!fp.allFinite() || !fm.allFinite()) {
      throw NonFiniteError("finite_diff_jacobian: non-finite output",
                           static_cast<int>(i));
    }
    if (i == 0) jac.resize(fp.size(), n);
    jac.col(i) = (fp - fm) / (2.0 * step);
  }
  return jac;
}

Vector integrate_step(const Plant& plant, const Vector& x, const Vector& u,
                      double t, double dt, Integrator integrator) {
  if (integrator == Integrator::kEuler) {
    return x + plant.dynamics(x, u, t) * dt;
  }
  const Vector k1 = plant.dynamics(x, u, t);
  const Vector k2 = plant.dynamics(x + 0.5 * dt * k1, u, t + 0.5 * dt);
  const Vector k3 = plant.dynamics(x + 0.5 * dt * k2, u, t + 0.5 * dt);
  const Vector k4 = plant.dynamics(x + dt * k3, u, t + dt);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Trajectory rollout(const Plant& plant, const Vector& x0,
                   const std::vector<Vector>& controls, double dt,
                   Integrator integrator, double t0) {
  if (!(dt > 0.0)) throw Error("rollout: dt must be positive");
  Trajectory traj;
  traj.dt = dt;
  traj.controls = controls;
  traj.states.reserve(controls.size() + 1);
  traj.times.reserve(controls.size() + 1);
  traj.states.push_back(x0);
  traj.times.push_back(t0);
  for (std::size_t k = 0; k < controls.size(); ++k) {
    if (!controls[k].allFinite()) {
      throw NonFiniteError("rollout: non-finite control", static_cast<int>(k));
    }
    const double t = t0 + static_cast<double>(k) * dt;
    Vector next = integrate_step(plant, traj.states.back(), controls[k], t, dt,
                                 integrator);
    if (!next.allFinite()) {
      throw DivergedRolloutError(static_cast<int>(k));
    }
    traj.states.push_back(std::move(next));
    traj.times.push_back(t0 + static_cast<double>(k + 1) * dt);
  }
  return traj;
}

double trajectory_cost(const CostModel& cost, const Trajectory& traj) {
  double total = 0.0;
  for (int k = 0; k < traj.steps(); ++k) {
    total += cost.running(traj.states[k], traj.controls[k], traj.times[k]) *
             traj.dt;
  }
  return total + cost.terminal(traj.states.back(), traj.times.back());
}

double relative_error(const Matrix& analytic, const Matrix& reference) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < reference.rows(); ++i) {
    for (Eigen::Index j = 0; j < reference.cols(); ++j) {
      const double scale = std::max(1.0, std::abs(reference(i, j)));
      worst = std::max(worst, std::abs(analytic(i, j) - reference(i, j)) / scale);
    }
  }
  return worst;
}

}  // namespace trajopt
