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

#ifndef TRAJOPT_DDP_HPP_
#define TRAJOPT_DDP_HPP_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "trajopt/core.hpp"

namespace trajopt::ddp {

/// Euler-discretized dynamics around a nominal point:
///   dx_{k+1} = Phi dx_k + B du_k,  Phi = I + F_x dt,  B = F_u dt.
struct LinearizedStep {
  Matrix Phi;
  Matrix B;
};

/// Second-order model of the running cost over one step, scaled by dt.
struct CostExpansion {
  double q0 = 0.0;
  Vector qvec;
  Vector rvec;
  Matrix Q;
  Matrix R;
  Matrix N;
  Matrix M;
};

/// Quadratic model of the value function: V + Vx dx + 1/2 dx^T Vxx dx.
struct ValueExpansion {
  double V = 0.0;
  Vector Vx;
  Matrix Vxx;
};

/// Feedforward l and feedback L per step, with the Q-function blocks
/// g = Q_u, G = Q_ux and H = Q_uu (including regularization) kept for
/// diagnostics.
struct GainSchedule {
  std::vector<Vector> l;
  std::vector<Matrix> L;
  std::vector<Vector> g;
  std::vector<Matrix> G;
  std::vector<Matrix> H;

  int steps() const { return static_cast<int>(l.size()); }
};

struct BackwardPassResult {
  GainSchedule gains;
  /// values[k] for k = 0..N (values[N] is the terminal expansion).
  std::vector<ValueExpansion> values;
  /// Predicted cost change of a full step: sum_k (g^T l + 1/2 l^T H l).
  double expected_change = 0.0;
  /// Set when H was not positive definite; holds the failing step.
  std::optional<int> indefinite_at;

  bool ok() const { return !indefinite_at.has_value(); }
};

struct ForwardPassResult {
  Trajectory trajectory;
  double cost = 0.0;
};

LinearizedStep linearize_step(const Plant& plant, const Vector& x, const Vector& u,
                              double t, double dt);

CostExpansion expand_cost(const CostModel& cost, const Vector& x, const Vector& u,
                          double t, double dt);

/// Riccati sweep over explicit linearizations and cost expansions.
/// `terminal` seeds the recursion at step N; `mu` is added to the diagonal
/// of every H before the Cholesky test.
BackwardPassResult backward_pass(const std::vector<LinearizedStep>& dynamics,
                                 const std::vector<CostExpansion>& costs,
                                 const ValueExpansion& terminal, double mu);

/// Linearizes `plant` and expands `cost` along `nominal`, then sweeps.
BackwardPassResult backward_pass(const Plant& plant, const CostModel& cost,
                                 const Trajectory& nominal, double mu);

/// Rolls out u_k = ubar_k + alpha l_k + L_k (x_k - xbar_k) with Euler steps.
/// Returns nullopt when the rollout diverges.
std::optional<ForwardPassResult> forward_pass(
    const Plant& plant, const CostModel& cost, const Trajectory& nominal,
    const GainSchedule& gains, double alpha,
    const std::optional<Bounds>& control_bounds = std::nullopt);

struct Options {
  int steps = 200;
  int max_iters = 1000;
  /// Convergence when |expected change| < tol, or when the relative cost
  /// decrease stays below tol for three accepted iterations in a row.
  double tol = 1e-8;
  double mu_init = 1e-6;
  double mu_max = 1e6;
  /// Line search tries alpha = 1, 1/2, ..., 2^-line_search_halvings.
  int line_search_halvings = 10;
  /// Warm start; empty means zero controls.
  std::vector<Vector> initial_controls;
  /// Called once per iteration with a formatted log line.
  std::function<void(const std::string&)> log;
  /// Called for every line-search trial, including rejected ones.
  std::function<void(const std::string&)> trace;
};

struct TrialRecord {
  int iteration = 0;
  double alpha = 0.0;
  double cost = 0.0;
  bool accepted = false;
};

struct Report {
  /// Cost of the initial rollout followed by every accepted iterate.
  std::vector<double> cost_history;
  /// Every line-search trial, accepted or not.
  std::vector<TrialRecord> trials;
  int iterations = 0;
  bool converged = false;
  std::string status;
  double runtime_seconds = 0.0;
  double final_cost = 0.0;
  /// |expected change| reported by the last backward pass.
  double last_expected_change = 0.0;
  int regularization_events = 0;
  Trajectory trajectory;
  GainSchedule gains;
};

/// Iterates backward and forward passes from the warm start.
/// Throws Error when H stays indefinite with mu above mu_max.
Report solve(const Plant& plant, const CostModel& cost,
             const BoundarySpec& boundary, const Options& options);

}  // namespace trajopt::ddp

#endif  // TRAJOPT_DDP_HPP_
