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

#include "trajopt/benchmarks.hpp"

#include <numbers>

#include "trajopt/dynamics.hpp"

namespace trajopt {

namespace {

void apply_overrides(const std::map<std::string, double>& values,
                     const std::map<std::string, double*>& slots) {
  for (const auto& [key, value] : values) {
    auto it = slots.find(key);
    if (it == slots.end()) throw Error("unknown plant parameter '" + key + "'");
    *it->second = value;
  }
}

Vector filled(int n, double v) { return Vector::Constant(n, v); }

}  // namespace

std::string to_string(ProblemId id) {
  switch (id) {
    case ProblemId::kCartPole:
      return "cartpole";
    case ProblemId::kDoubleCartPole:
      return "double_cartpole";
    case ProblemId::kQuadrotor:
      return "quadrotor";
  }
  return "unknown";
}

ProblemId parse_problem_id(std::string_view name) {
  if (name == "cartpole") return ProblemId::kCartPole;
  if (name == "double_cartpole") return ProblemId::kDoubleCartPole;
  if (name == "quadrotor") return ProblemId::kQuadrotor;
  throw Error("unknown problem id '" + std::string(name) + "'");
}

CostWeights default_weights(ProblemId id) {
  CostWeights w;
  switch (id) {
    case ProblemId::kCartPole:
      w.R = filled(1, 1e-2);
      w.Q = filled(4, 0.0);
      w.W_f = filled(4, 1e4);
      break;
    case ProblemId::kDoubleCartPole:
      w.R = filled(1, 1e-2);
      w.Q = filled(6, 0.0);
      w.W_f = filled(6, 1e4);
      break;
    case ProblemId::kQuadrotor: {
      w.R = filled(4, 1e-2);
      w.Q = Vector(12);
      // position, velocity, roll-pitch-yaw, body rates
      w.Q << 1.0, 1.0, 1.0, 0.1, 0.1, 0.1, 1.0, 1.0, 1.0, 0.1, 0.1, 0.1;
      w.W_f = filled(12, 1e3);
      break;
    }
  }
  return w;
}

Benchmark make_benchmark(ProblemId id, const BenchmarkOverrides& overrides) {
  Benchmark b;
  b.id = id;
  switch (id) {
    case ProblemId::kCartPole: {
      CartPole::Params p;
      apply_overrides(overrides.plant_parameters,
                      {{"cart_mass", &p.cart_mass},
                       {"link_mass", &p.link_mass},
                       {"link_length", &p.link_length},
                       {"gravity", &p.gravity}});
      b.plant = std::make_shared<CartPole>(p);
      b.boundary.x0 = Vector::Zero(4);
      b.boundary.x_target = Vector::Zero(4);
      b.boundary.x_target[1] = std::numbers::pi;
      b.boundary.tf = 2.0;
      break;
    }
    case ProblemId::kDoubleCartPole: {
      DoubleCartPole::Params p;
      apply_overrides(overrides.plant_parameters,
                      {{"cart_mass", &p.cart_mass},
                       {"link1_mass", &p.link1_mass},
                       {"link2_mass", &p.link2_mass},
                       {"link1_length", &p.link1_length},
                       {"link2_length", &p.link2_length},
                       {"gravity", &p.gravity}});
      b.plant = std::make_shared<DoubleCartPole>(p);
      b.boundary.x0 = Vector::Zero(6);
      b.boundary.x_target = Vector::Zero(6);
      b.boundary.x_target[1] = std::numbers::pi;
      b.boundary.x_target[2] = std::numbers::pi;
      b.boundary.tf = 4.0;
      break;
    }
    case ProblemId::kQuadrotor: {
      Quadrotor::Params p;
      apply_overrides(overrides.plant_parameters,
                      {{"mass", &p.mass},
                       {"inertia_x", &p.inertia_x},
                       {"inertia_y", &p.inertia_y},
                       {"inertia_z", &p.inertia_z},
                       {"arm_length", &p.arm_length},
                       {"gravity", &p.gravity},
                       {"yaw_coefficient", &p.yaw_coefficient}});
      b.plant = std::make_shared<Quadrotor>(p);
      b.boundary.x0 = Vector::Zero(12);
      b.boundary.x0.head(3) << -1.0, 1.0, 0.5;
      b.boundary.x_target = Vector::Zero(12);
      b.boundary.x_target.head(3) << 0.5, -1.0, 1.5;
      b.boundary.tf = 3.0;
      break;
    }
  }
  b.boundary.t0 = 0.0;
  b.boundary.control_bounds = overrides.control_bounds;
  b.boundary.state_bounds = overrides.state_bounds;
  b.boundary.validate();

  const int n = b.plant->state_dim();
  const int m = b.plant->control_dim();
  const CostWeights w = overrides.weights.value_or(default_weights(id));
  if (w.R.size() != m || w.Q.size() != n || w.W_f.size() != n) {
    throw Error("cost weights for " + to_string(id) + " must have sizes R=" +
                std::to_string(m) + ", Q=" + std::to_string(n) +
                ", W_f=" + std::to_string(n));
  }
  auto nonnegative = [](const Vector& v) {
    return v.allFinite() && (v.size() == 0 || v.minCoeff() >= 0.0);
  };
  if (!nonnegative(w.R) || !nonnegative(w.Q) || !nonnegative(w.W_f)) {
    throw Error("cost weights must be finite and non-negative");
  }
  if (b.boundary.control_bounds && b.boundary.control_bounds->lower.size() != m) {
    throw Error("control bounds dimension mismatch");
  }
  QuadraticCost::Weights cw;
  cw.Q = w.Q.asDiagonal();
  cw.R = w.R.asDiagonal();
  cw.W_f = w.W_f.asDiagonal();
  cw.x_ref = b.boundary.x_target;
  cw.x_target = b.boundary.x_target;
  b.cost = std::make_shared<QuadraticCost>(std::move(cw));

  b.nominal_control = Vector::Zero(m);
  if (id == ProblemId::kQuadrotor) {
    b.nominal_control.setConstant(
        static_cast<const Quadrotor&>(*b.plant).hover_thrust());
  }
  return b;
}

}  // namespace trajopt
