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

#ifndef TRAJOPT_NLP_HPP_
#define TRAJOPT_NLP_HPP_

#include <functional>
#include <string>

#include "trajopt/core.hpp"

namespace trajopt::nlp {

/// min f(x)  s.t.  c(x) = 0,  lower <= x <= upper.
///
/// `gradient` and `jacobian` are optional; missing derivatives are formed
/// by forward differences. Empty bound vectors mean unbounded.
struct Problem {
  int dimension = 0;
  int num_equalities = 0;
  std::function<double(const Vector&)> objective;
  std::function<Vector(const Vector&)> gradient;
  std::function<Vector(const Vector&)> constraints;
  std::function<Matrix(const Vector&)> jacobian;
  /// Optional Hessian of f + mult^T c at (x, mult).
  std::function<Matrix(const Vector&, const Vector&)> lagrangian_hessian;
  Vector lower;
  Vector upper;
};

enum class InnerMethod {
  /// Dense Newton-type step on the augmented Lagrangian: Lagrangian Hessian
  /// (exact when `lagrangian_hessian` is supplied, damped BFGS otherwise)
  /// plus the penalty term rho J^T J.
  kStructuredQuasiNewton,
  /// Limited-memory BFGS restricted to the free variables.
  kLbfgs,
};

struct Options {
  int max_outer = 50;
  int max_inner = 200;
  double constraint_tol = 1e-6;
  double stationarity_tol = 1e-6;
  double penalty_init = 10.0;
  double penalty_growth = 10.0;
  double penalty_max = 1e8;
  InnerMethod inner = InnerMethod::kStructuredQuasiNewton;
  int lbfgs_memory = 10;
  /// One line per outer iteration: index, objective, |c|_inf, rho, inner steps.
  std::function<void(const std::string&)> log;
};

enum class Status { kOptimal, kMaxIter, kStalled };

std::string to_string(Status s);

struct Solution {
  Vector x;
  /// One multiplier per equality row, sign convention L = f + lambda^T c.
  Vector multipliers;
  double objective = 0.0;
  double max_violation = 0.0;
  double stationarity_norm = 0.0;
  int outer_iterations = 0;
  int inner_iterations_total = 0;
  double runtime_seconds = 0.0;
  Status status = Status::kMaxIter;
  /// |c|_inf and f at the end of every outer iteration.
  std::vector<double> violation_history;
  std::vector<double> objective_history;
};

struct KktReport {
  /// |grad f + J^T lambda|_inf with components pushing into an active bound
  /// removed.
  double stationarity_norm = 0.0;
  /// max(|c|_inf, largest bound violation).
  double max_violation = 0.0;
  /// Largest product of an implied bound multiplier and its slack.
  double complementarity_max = 0.0;
};

/// Augmented-Lagrangian solve from x0 (projected onto the box first).
Solution solve(const Problem& problem, const Vector& x0,
               const Options& options = {});

KktReport kkt_check(const Problem& problem, const Vector& x,
                    const Vector& multipliers);

/// Objective gradient, using forward differences when not supplied.
Vector evaluate_gradient(const Problem& problem, const Vector& x);
/// Constraint Jacobian, using forward differences when not supplied.
Matrix evaluate_jacobian(const Problem& problem, const Vector& x);

}  // namespace trajopt::nlp

#endif  // TRAJOPT_NLP_HPP_
