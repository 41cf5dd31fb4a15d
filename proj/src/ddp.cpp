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

#include "trajopt/ddp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

namespace trajopt::ddp {

LinearizedStep linearize_step(const Plant& plant, const Vector& x, const Vector& u,
                              double t, double dt) {
  const Matrix fx = plant.jacobian_x(x, u, t);
  const Matrix fu = plant.jacobian_u(x, u, t);
  if (!fx.allFinite() || !fu.allFinite()) {
    throw Error("linearize_step: non-finite Jacobian at t=" + std::to_string(t));
  }
  LinearizedStep step;
  step.Phi = Matrix::Identity(fx.rows(), fx.cols()) + fx * dt;
  step.B = fu * dt;
  return step;
}

CostExpansion expand_cost(const CostModel& cost, const Vector& x, const Vector& u,
                          double t, double dt) {
  const RunningDerivatives d = cost.running_derivs(x, u, t);
  CostExpansion e;
  e.q0 = d.value * dt;
  e.qvec = d.q * dt;
  e.rvec = d.r * dt;
  e.Q = d.Q * dt;
  e.R = d.R * dt;
  e.N = d.N * dt;
  e.M = d.M * dt;
  return e;
}

BackwardPassResult backward_pass(const std::vector<LinearizedStep>& dynamics,
                                 const std::vector<CostExpansion>& costs,
                                 const ValueExpansion& terminal, double mu) {
  if (dynamics.size() != costs.size()) {
    throw Error("backward_pass: dynamics and cost sequences differ in length");
  }
  const int steps = static_cast<int>(dynamics.size());
  BackwardPassResult out;
  out.values.resize(steps + 1);
  out.values[steps] = terminal;
  GainSchedule& gs = out.gains;
  gs.l.resize(steps);
  gs.L.resize(steps);
  gs.g.resize(steps);
  gs.G.resize(steps);
  gs.H.resize(steps);

  for (int k = steps - 1; k >= 0; --k) {
    const LinearizedStep& dyn = dynamics[k];
    const CostExpansion& c = costs[k];
    const ValueExpansion& next = out.values[k + 1];

    const Matrix BtVxx = dyn.B.transpose() * next.Vxx;
    Vector g = c.rvec + dyn.B.transpose() * next.Vx;
    Matrix G = c.N + BtVxx * dyn.Phi;
    Matrix H = c.R + BtVxx * dyn.B;
    H = 0.5 * (H + H.transpose());
    H.diagonal().array() += mu;

    // Legendre-Clebsch: H must be positive definite to take the step.
    Eigen::LLT<Matrix> llt(H);
    if (!H.allFinite() || llt.info() != Eigen::Success) {
      out.indefinite_at = k;
      return out;
    }
    Vector l = -llt.solve(g);
    Matrix L = -llt.solve(G);

    ValueExpansion& v = out.values[k];
    const Vector Hl = H * l;
    const double step_change = g.dot(l) + 0.5 * l.dot(Hl);
    v.V = c.q0 + next.V + step_change;
    v.Vx = c.qvec + dyn.Phi.transpose() * next.Vx + L.transpose() * (g + Hl) +
           G.transpose() * l;
    Matrix Vxx = c.Q + dyn.Phi.transpose() * next.Vxx * dyn.Phi +
                 L.transpose() * H * L + L.transpose() * G + G.transpose() * L;
    v.Vxx = 0.5 * (Vxx + Vxx.transpose());
    out.expected_change += step_change;

    gs.l[k] = std::move(l);
    gs.L[k] = std::move(L);
    gs.g[k] = std::move(g);
    gs.G[k] = std::move(G);
    gs.H[k] = std::move(H);
  }
  return out;
}

namespace {

struct LocalModel {
  std::vector<LinearizedStep> dynamics;
  std::vector<CostExpansion> costs;
  ValueExpansion terminal;
};

LocalModel build_local_model(const Plant& plant, const CostModel& cost,
                             const Trajectory& nominal) {
  LocalModel model;
  const int steps = nominal.steps();
  model.dynamics.reserve(steps);
  model.costs.reserve(steps);
  for (int k = 0; k < steps; ++k) {
    model.dynamics.push_back(linearize_step(plant, nominal.states[k],
                                            nominal.controls[k],
                                            nominal.times[k], nominal.dt));
    model.costs.push_back(expand_cost(cost, nominal.states[k],
                                      nominal.controls[k], nominal.times[k],
                                      nominal.dt));
  }
  const TerminalDerivatives td =
      cost.terminal_derivs(nominal.states.back(), nominal.times.back());
  model.terminal.V = td.value;
  model.terminal.Vx = td.phi_x;
  model.terminal.Vxx = td.phi_xx;
  return model;
}

Vector clamp(Vector u, const std::optional<Bounds>& bounds) {
  if (bounds) u = u.cwiseMax(bounds->lower).cwiseMin(bounds->upper);
  return u;
}

std::string format(const char* fmt, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

}  // namespace

BackwardPassResult backward_pass(const Plant& plant, const CostModel& cost,
                                 const Trajectory& nominal, double mu) {
  const LocalModel model = build_local_model(plant, cost, nominal);
  return backward_pass(model.dynamics, model.costs, model.terminal, mu);
}

std::optional<ForwardPassResult> forward_pass(
    const Plant& plant, const CostModel& cost, const Trajectory& nominal,
    const GainSchedule& gains, double alpha,
    const std::optional<Bounds>& control_bounds) {
  const int steps = nominal.steps();
  if (gains.steps() != steps) {
    throw Error("forward_pass: gain schedule length does not match trajectory");
  }
  ForwardPassResult out;
  Trajectory& traj = out.trajectory;
  traj.dt = nominal.dt;
  traj.times = nominal.times;
  traj.states.reserve(steps + 1);
  traj.controls.reserve(steps);
  traj.states.push_back(nominal.states.front());
  double total = 0.0;
  for (int k = 0; k < steps; ++k) {
    const Vector& x = traj.states.back();
    Vector u = nominal.controls[k] + alpha * gains.l[k] +
               gains.L[k] * (x - nominal.states[k]);
    u = clamp(std::move(u), control_bounds);
    total += cost.running(x, u, traj.times[k]) * traj.dt;
    Vector next;
    try {
      next = x + plant.dynamics(x, u, traj.times[k]) * traj.dt;
    } catch (const Error&) {
      return std::nullopt;  // left the plant's valid domain
    }
    if (!next.allFinite() || !u.allFinite()) return std::nullopt;
    traj.controls.push_back(std::move(u));
    traj.states.push_back(std::move(next));
  }
  total += cost.terminal(traj.states.back(), traj.times.back());
  if (!std::isfinite(total)) return std::nullopt;
  out.cost = total;
  return out;
}

Report solve(const Plant& plant, const CostModel& cost,
             const BoundarySpec& boundary, const Options& options) {
  boundary.validate();
  if (options.steps < 1) throw Error("ddp: steps must be at least 1");
  const auto clock_start = std::chrono::steady_clock::now();
  const int n = plant.state_dim();
  const int m = plant.control_dim();
  const double dt = boundary.horizon() / options.steps;

  std::vector<Vector> controls = options.initial_controls;
  if (controls.empty()) controls.assign(options.steps, Vector::Zero(m));
  if (static_cast<int>(controls.size()) != options.steps) {
    throw Error("ddp: warm start must provide one control per step");
  }
  for (auto& u : controls) u = clamp(u, boundary.control_bounds);
  if (boundary.x0.size() != n) throw Error("ddp: x0 dimension mismatch");
  check_cost_dimensions(cost, n, m);

  Report report;
  Trajectory nominal =
      rollout(plant, boundary.x0, controls, dt, Integrator::kEuler, boundary.t0);
  double current = trajectory_cost(cost, nominal);
  report.cost_history.push_back(current);

  double mu = 0.0;
  int small_decreases = 0;
  report.status = "max_iter";
  auto emit = [](const std::function<void(const std::string&)>& sink,
                 const std::string& line) {
    if (sink) sink(line);
  };

  while (report.iterations < options.max_iters) {
    const LocalModel model = build_local_model(plant, cost, nominal);
    BackwardPassResult bp = backward_pass(model.dynamics, model.costs,
                                          model.terminal, mu);
    while (!bp.ok()) {
      ++report.regularization_events;
      mu = std::max(options.mu_init, 2.0 * mu);
      if (mu > options.mu_max) {
        throw Error("ddp: H not positive definite at step " +
                    std::to_string(*bp.indefinite_at) +
                    " with regularization above mu_max");
      }
      bp = backward_pass(model.dynamics, model.costs, model.terminal, mu);
    }
    ++report.iterations;
    report.last_expected_change = std::abs(bp.expected_change);
    if (std::abs(bp.expected_change) < options.tol) {
      report.converged = true;
      report.status = "converged";
      report.gains = std::move(bp.gains);
      emit(options.log, format("iter %4d  cost %.10e  |dV| %.3e  converged",
                               report.iterations, current,
                               std::abs(bp.expected_change)));
      break;
    }

    bool accepted = false;
    double alpha = 1.0;
    for (int i = 0; i <= options.line_search_halvings; ++i, alpha *= 0.5) {
      auto trial = forward_pass(plant, cost, nominal, bp.gains, alpha,
                                boundary.control_bounds);
      const double trial_cost =
          trial ? trial->cost : std::numeric_limits<double>::infinity();
      const bool better = trial && trial_cost < current;
      report.trials.push_back({report.iterations, alpha, trial_cost, better});
      emit(options.trace,
           format("iter %4d  trial alpha %.6f  cost %.10e  %s", report.iterations,
                  alpha, trial_cost, better ? "accepted" : "rejected"));
      if (!better) continue;

      const double relative =
          (current - trial_cost) / std::max(std::abs(current), 1e-300);
      nominal = std::move(trial->trajectory);
      current = trial_cost;
      report.cost_history.push_back(current);
      accepted = true;
      small_decreases = relative < options.tol ? small_decreases + 1 : 0;
      break;
    }

    if (accepted) {
      emit(options.log,
           format("iter %4d  cost %.10e  alpha %.6f  mu %.3e  |dV| %.3e",
                  report.iterations, current, alpha, mu,
                  std::abs(bp.expected_change)));
      report.gains = std::move(bp.gains);
      mu = mu * 0.5 < options.mu_init ? 0.0 : mu * 0.5;
      if (small_decreases >= 3) {
        report.converged = true;
        report.status = "converged";
        break;
      }
    } else {
      ++report.regularization_events;
      mu = std::max(options.mu_init, 10.0 * mu);
      emit(options.log, format("iter %4d  line search failed, mu -> %.3e",
                               report.iterations, mu));
      if (mu > options.mu_max) {
        report.status = "stalled";
        report.gains = std::move(bp.gains);
        break;
      }
    }
  }

  report.final_cost = current;
  report.trajectory = std::move(nominal);
  report.runtime_seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - clock_start)
                               .count();
  return report;
}

}  // namespace trajopt::ddp
