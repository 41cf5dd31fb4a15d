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

#ifndef TRAJOPT_BENCHMARKS_HPP_
#define TRAJOPT_BENCHMARKS_HPP_

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "trajopt/core.hpp"

namespace trajopt {

enum class ProblemId { kCartPole, kDoubleCartPole, kQuadrotor };

std::string to_string(ProblemId id);
/// Accepts "cartpole", "double_cartpole" and "quadrotor".
ProblemId parse_problem_id(std::string_view name);

/// Diagonal cost weights. The running cost is
///   (x - x_target)^T diag(Q) (x - x_target) + u^T diag(R) u
/// and DDP's terminal cost is (x - x_target)^T diag(W_f) (x - x_target).
struct CostWeights {
  Vector R;
  Vector Q;
  Vector W_f;
};

CostWeights default_weights(ProblemId id);

struct BenchmarkOverrides {
  std::optional<CostWeights> weights;
  std::map<std::string, double> plant_parameters;
  std::optional<Bounds> control_bounds;
  std::optional<Bounds> state_bounds;
};

struct Benchmark {
  ProblemId id;
  std::shared_ptr<const Plant> plant;
  std::shared_ptr<const QuadraticCost> cost;
  BoundarySpec boundary;
  /// Control used to warm-start solvers (zero for the cart poles, per-rotor
  /// hover thrust for the quadrotor).
  Vector nominal_control;
};

/// Plant, cost and boundary data for one of the three benchmark problems.
/// Throws Error on unknown plant parameter names or bad weight sizes.
Benchmark make_benchmark(ProblemId id, const BenchmarkOverrides& overrides = {});

}  // namespace trajopt

#endif  // TRAJOPT_BENCHMARKS_HPP_
