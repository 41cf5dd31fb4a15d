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

#ifndef TRAJOPT_CORE_HPP_
#define TRAJOPT_CORE_HPP_

#include <Eigen/Dense>

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace trajopt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A function produced a NaN or infinity; `index` names the offending
/// coordinate or step depending on the raising operation.
class NonFiniteError : public Error {
 public:
  NonFiniteError(const std::string& what, int index)
      : Error(what), index_(index) {}
  int index() const { return index_; }

 private:
  int index_;
};

/// Integration produced a non-finite state at step `step`.
class DivergedRolloutError : public Error {
 public:
  explicit DivergedRolloutError(int step)
      : Error("rollout diverged at step " + std::to_string(step)),
        step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

/// Time-indexed states and controls on a uniform grid.
///
/// `states` has one more entry than `controls`: control k acts on the
/// interval [times[k], times[k+1]).
struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<Vector> controls;
  double dt = 0.0;

  int steps() const { return static_cast<int>(controls.size()); }
  int state_dim() const {
    return states.empty() ? 0 : static_cast<int>(states.front().size());
  }
  int control_dim() const {
    return controls.empty() ? 0 : static_cast<int>(controls.front().size());
  }

  /// Throws Error when the structural invariants do not hold.
  void validate() const;
};

/// Continuous dynamics xdot = f(x, u, t) with analytic Jacobians.
class Plant {
 public:
  virtual ~Plant() = default;

  virtual int state_dim() const = 0;
  virtual int control_dim() const = 0;
  virtual std::string name() const = 0;
  /// Physical parameters by name (SI units).
  virtual std::map<std::string, double> parameters() const = 0;

  virtual Vector dynamics(const Vector& x, const Vector& u, double t) const = 0;
  virtual Matrix jacobian_x(const Vector& x, const Vector& u, double t) const = 0;
  virtual Matrix jacobian_u(const Vector& x, const Vector& u, double t) const = 0;
};

/// xdot = A x + B u. Used for integrator benchmarks and LQR checks.
class LinearPlant final : public Plant {
 public:
  LinearPlant(Matrix a, Matrix b);

  int state_dim() const override { return static_cast<int>(a_.rows()); }
  int control_dim() const override { return static_cast<int>(b_.cols()); }
  std::string name() const override { return "linear"; }
  std::map<std::string, double> parameters() const override { return {}; }

  Vector dynamics(const Vector& x, const Vector& u, double t) const override;
  Matrix jacobian_x(const Vector& x, const Vector& u, double t) const override;
  Matrix jacobian_u(const Vector& x, const Vector& u, double t) const override;

  const Matrix& a() const { return a_; }
  const Matrix& b() const { return b_; }

 private:
  Matrix a_;
  Matrix b_;
};

/// Value and first/second derivatives of the running cost L(x, u, t).
/// Naming follows the DDP expansion: q = L_x, r = L_u, Q = L_xx, R = L_uu,
/// N = L_ux and M = L_xu = N^T.
struct RunningDerivatives {
  double value = 0.0;
  Vector q;
  Vector r;
  Matrix Q;
  Matrix R;
  Matrix N;
  Matrix M;
};

struct TerminalDerivatives {
  double value = 0.0;
  Vector phi_x;
  Matrix phi_xx;
};

/// Bolza cost: integral of a running rate plus a terminal term.
class CostModel {
 public:
  virtual ~CostModel() = default;

  virtual double running(const Vector& x, const Vector& u, double t) const = 0;
  virtual double terminal(const Vector& x, double tf) const = 0;
  virtual RunningDerivatives running_derivs(const Vector& x, const Vector& u,
                                            double t) const = 0;
  virtual TerminalDerivatives terminal_derivs(const Vector& x,
                                              double tf) const = 0;
  /// (state, control) dimensions when the model fixes them.
  virtual std::optional<std::pair<int, int>> dimensions() const {
    return std::nullopt;
  }
};

/// Throws Error when `cost` declares dimensions other than (n, m).
void check_cost_dimensions(const CostModel& cost, int n, int m);

/// L = (x-x_ref)^T Q (x-x_ref) + (u-u_ref)^T R (u-u_ref) + u^T S (x-x_ref)
/// phi = (x-x_target)^T W_f (x-x_target)
///
/// The cross weight S defaults to zero; Q, R and W_f are symmetrized on
/// construction.
class QuadraticCost final : public CostModel {
 public:
  struct Weights {
    Matrix Q;
    Matrix R;
    Matrix W_f;
    Matrix S;  // m x n, optional (empty means zero)
    Vector x_ref;
    Vector u_ref;
    Vector x_target;
  };

  explicit QuadraticCost(Weights w);

  double running(const Vector& x, const Vector& u, double t) const override;
  double terminal(const Vector& x, double tf) const override;
  RunningDerivatives running_derivs(const Vector& x, const Vector& u,
                                    double t) const override;
  TerminalDerivatives terminal_derivs(const Vector& x, double tf) const override;
  std::optional<std::pair<int, int>> dimensions() const override {
    return std::pair<int, int>(static_cast<int>(w_.Q.rows()),
                               static_cast<int>(w_.R.rows()));
  }

  const Weights& weights() const { return w_; }

 private:
  Weights w_;
};

struct Bounds {
  Vector lower;
  Vector upper;
};

/// Fixed-horizon two-point boundary data with optional box constraints.
struct BoundarySpec {
  Vector x0;
  Vector x_target;
  double t0 = 0.0;
  double tf = 1.0;
  std::optional<Bounds> control_bounds;
  std::optional<Bounds> state_bounds;

  double horizon() const { return tf - t0; }
  /// Throws Error if tf <= t0, dimensions disagree or any lo > hi.
  void validate() const;
};

enum class Integrator { kEuler, kRk4 };

/// Central-difference Jacobian of `f` at `x`, column i uses step
/// h * max(1, |x_i|).
Matrix finite_diff_jacobian(const std::function<Vector(const Vector&)>& f,
                            const Vector& x, double h = 1e-6);

/// One integration step of length dt from (x, u, t).
Vector integrate_step(const Plant& plant, const Vector& x, const Vector& u,
                      double t, double dt, Integrator integrator);

/// Integrates `controls` (zero-order hold) from x0. Throws
/// DivergedRolloutError on a non-finite state.
Trajectory rollout(const Plant& plant, const Vector& x0,
                   const std::vector<Vector>& controls, double dt,
                   Integrator integrator = Integrator::kEuler, double t0 = 0.0);

/// Discrete cost sum_k L(x_k, u_k, t_k) dt + phi(x_N).
double trajectory_cost(const CostModel& cost, const Trajectory& traj);

/// Largest element-wise error of `analytic` against `reference`, each
/// element measured relative to max(1, |reference|).
double relative_error(const Matrix& analytic, const Matrix& reference);

}  // namespace trajopt

#endif  // TRAJOPT_CORE_HPP_
