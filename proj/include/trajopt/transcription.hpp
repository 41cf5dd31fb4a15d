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

#ifndef TRAJOPT_TRANSCRIPTION_HPP_
#define TRAJOPT_TRANSCRIPTION_HPP_

#include <memory>
#include <vector>

#include "trajopt/collocation.hpp"
#include "trajopt/core.hpp"
#include "trajopt/nlp.hpp"

namespace trajopt::gpm {

/// tau = 2t/(tf-t0) - (tf+t0)/(tf-t0). Throws Error when tf == t0.
double time_transform(double t, double t0, double tf);
double inverse_time_transform(double tau, double t0, double tf);

/// Decision vector layout: X_0, X_1..X_K, X_f (n each), then U_1..U_K (m
/// each). X_0 sits at tau = -1, X_1..X_K at the LG nodes and X_f at +1.
class DecisionLayout {
 public:
  DecisionLayout(int state_dim, int control_dim, int count);

  int state_dim() const { return n_; }
  int control_dim() const { return m_; }
  int count() const { return k_; }
  int dimension() const { return n_ * (k_ + 2) + m_ * k_; }

  /// Offset of support state i in [0, K].
  int state_offset(int i) const { return n_ * i; }
  int final_state_offset() const { return n_ * (k_ + 1); }
  /// Offset of control at node k in [1, K].
  int control_offset(int k) const { return n_ * (k_ + 2) + m_ * (k - 1); }

  struct Blocks {
    std::vector<Vector> states;  // K+1 support states
    Vector final_state;
    std::vector<Vector> controls;  // K nodal controls
  };

  Vector pack(const Blocks& blocks) const;
  Blocks unpack(const Vector& z) const;

 private:
  int n_;
  int m_;
  int k_;
};

/// Residual row ranges of the equality constraints.
struct ResidualRows {
  int collocation_begin = 0;  // n*K rows
  int quadrature_begin = 0;   // n rows
  int boundary_begin = 0;     // 2n rows: X_0 - x0, then X_f - x_target
  int total = 0;
};

/// Finite-dimensional program for one fixed-horizon Bolza problem.
///
/// Collocation and quadrature rows are multiplied by 2/(tf-t0) before they
/// reach the solver (`residuals`); `raw_residuals` keeps them unscaled.
class TranscribedNlp {
 public:
  TranscribedNlp(std::shared_ptr<const Plant> plant,
                 std::shared_ptr<const CostModel> cost, BoundarySpec boundary,
                 collocation::Grid grid);

  const DecisionLayout& layout() const { return layout_; }
  const collocation::Grid& grid() const { return grid_; }
  const BoundarySpec& boundary() const { return boundary_; }
  const Plant& plant() const { return *plant_; }
  const CostModel& cost() const { return *cost_; }
  const ResidualRows& rows() const { return rows_; }
  int dimension() const { return layout_.dimension(); }
  int num_equalities() const { return rows_.total; }

  /// Physical time of collocation node k in [1, K].
  double node_time(int k) const;

  double objective(const Vector& z) const;
  Vector objective_gradient(const Vector& z) const;
  Vector raw_residuals(const Vector& z) const;
  Vector residuals(const Vector& z) const;
  /// Jacobian of `residuals` from the plant's analytic Jacobians.
  Matrix residual_jacobian(const Vector& z) const;
  /// Hessian of objective + mult^T residuals (scaled rows). Block diagonal
  /// per node; dynamics curvature comes from central differences of the
  /// plant Jacobians.
  Matrix lagrangian_hessian(const Vector& z, const Vector& mult) const;
  /// max |raw residual| over every equality row.
  double max_residual(const Vector& z) const;

  /// Box bounds from the boundary spec's state/control bounds (infinite
  /// where unset).
  nlp::Problem problem(bool analytic_derivatives = true) const;

 private:
  double half_horizon() const { return 0.5 * boundary_.horizon(); }

  std::shared_ptr<const Plant> plant_;
  std::shared_ptr<const CostModel> cost_;
  BoundarySpec boundary_;
  collocation::Grid grid_;
  DecisionLayout layout_;
  ResidualRows rows_;
};

/// Throws Error on dimension mismatches or an empty grid.
TranscribedNlp transcribe(std::shared_ptr<const Plant> plant,
                          std::shared_ptr<const CostModel> cost,
                          const BoundarySpec& boundary,
                          const collocation::Grid& grid);

enum class GuessStrategy { kLinear, kRollout };

/// linear: states interpolate x0 -> x_target in tau, controls equal
/// `control` (zero when empty). rollout: Euler rollout of the plant under
/// `control`, sampled at the support points; X_f takes the rollout's end.
Vector initial_guess(const TranscribedNlp& nlp, GuessStrategy strategy,
                     const Vector& control = Vector());

/// Samples the state interpolant ({-1} U nodes support) and the control
/// interpolant (K nodes) at `samples` uniform times from t0 to tf.
Trajectory extract_trajectory(const TranscribedNlp& nlp, const Vector& z,
                              int samples);

/// Control interpolant through the K nodal controls, evaluated at tau.
Vector control_at(const TranscribedNlp& nlp, const Vector& z, double tau);

struct SolveOptions {
  int nodes = 25;
  GuessStrategy guess = GuessStrategy::kLinear;
  int samples = 2001;
  nlp::Options nlp;
};

struct SolveResult {
  nlp::Solution solution;
  double objective = 0.0;
  /// Unscaled max |residual| at the returned point.
  double max_residual = 0.0;
  Trajectory trajectory;
  /// Control interpolant at tf, which `trajectory` does not carry.
  Vector final_control;
  DecisionLayout::Blocks blocks;
};

/// Transcribe, build the initial guess and run the NLP solver. The solver's
/// constraint tolerance is tightened by min(1, 2/(tf-t0)) so that the
/// unscaled residuals meet options.nlp.constraint_tol.
SolveResult solve(std::shared_ptr<const Plant> plant,
                  std::shared_ptr<const CostModel> cost,
                  const BoundarySpec& boundary, const SolveOptions& options,
                  const Vector& guess_control = Vector());

}  // namespace trajopt::gpm

#endif  // TRAJOPT_TRANSCRIPTION_HPP_
