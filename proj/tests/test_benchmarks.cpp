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

#include <gtest/gtest.h>

#include <cmath>

#include "trajopt/benchmarks.hpp"
#include "trajopt/dynamics.hpp"

namespace trajopt {
namespace {

TEST(ProblemIds, RoundTrip) {
  for (ProblemId id : {ProblemId::kCartPole, ProblemId::kDoubleCartPole, ProblemId::kQuadrotor}) {
    EXPECT_EQ(parse_problem_id(to_string(id)), id);
  }
  EXPECT_THROW(parse_problem_id("pendulum"), Error);
}

TEST(Benchmarks, CartPoleSettings) {
  const Benchmark b = make_benchmark(ProblemId::kCartPole);
  const auto p = b.plant->parameters();
  EXPECT_EQ(p.at("cart_mass"), 1.0);
  EXPECT_EQ(p.at("link_mass"), 5.0);
  EXPECT_EQ(p.at("link_length"), 1.5);
  EXPECT_EQ(b.boundary.t0, 0.0);
  EXPECT_EQ(b.boundary.tf, 2.0);
  EXPECT_EQ(b.boundary.x0, Vector::Zero(4));
  EXPECT_DOUBLE_EQ(b.boundary.x_target[1], M_PI);
  EXPECT_EQ(b.nominal_control, Vector::Zero(1));
}

TEST(Benchmarks, DoubleCartPoleSettings) {
  const Benchmark b = make_benchmark(ProblemId::kDoubleCartPole);
  const auto p = b.plant->parameters();
  EXPECT_EQ(p.at("cart_mass"), 3.0);
  EXPECT_EQ(p.at("link1_mass"), 1.0);
  EXPECT_EQ(p.at("link2_mass"), 20.0);
  EXPECT_EQ(p.at("link1_length"), 1.5);
  EXPECT_EQ(p.at("link2_length"), 1.5);
  EXPECT_EQ(b.boundary.tf, 4.0);
  EXPECT_DOUBLE_EQ(b.boundary.x_target[1], M_PI);
  EXPECT_DOUBLE_EQ(b.boundary.x_target[2], M_PI);
}

TEST(Benchmarks, QuadrotorSettings) {
  const Benchmark b = make_benchmark(ProblemId::kQuadrotor);
  const auto p = b.plant->parameters();
  EXPECT_EQ(p.at("mass"), 1.0);
  EXPECT_EQ(p.at("inertia_x"), 8.1e-3);
  EXPECT_EQ(p.at("inertia_y"), 8.1e-3);
  EXPECT_EQ(p.at("inertia_z"), 14.2e-3);
  EXPECT_EQ(p.at("arm_length"), 0.24);
  EXPECT_EQ(b.boundary.tf, 3.0);
  EXPECT_EQ(b.boundary.x0.head(3), Eigen::Vector3d(-1.0, 1.0, 0.5));
  EXPECT_EQ(b.boundary.x_target.head(3), Eigen::Vector3d(0.5, -1.0, 1.5));
  EXPECT_EQ(b.boundary.x_target.tail(9), Vector::Zero(9));
  // Warm start holds the hover.
  const Vector xdot = b.plant->dynamics(b.boundary.x0, b.nominal_control, 0.0);
  EXPECT_LT(xdot.cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Benchmarks, DefaultCostIsControlEffortPlusTerminal) {
  const Benchmark b = make_benchmark(ProblemId::kCartPole);
  const Vector x = Vector::Constant(4, 0.7);
  const Vector u = Vector::Constant(1, 3.0);
  EXPECT_NEAR(b.cost->running(x, u, 0.0), 1e-2 * 9.0, 1e-15);
  const Vector err = x - b.boundary.x_target;
  EXPECT_NEAR(b.cost->terminal(x, 2.0), 1e4 * err.squaredNorm(), 1e-9);
  EXPECT_EQ(b.cost->terminal(b.boundary.x_target, 2.0), 0.0);
}

TEST(Benchmarks, QuadrotorStateWeightPenalizesDistanceToTarget) {
  const Benchmark b = make_benchmark(ProblemId::kQuadrotor);
  EXPECT_EQ(b.cost->running(b.boundary.x_target, Vector::Zero(4), 0.0), 0.0);
  EXPECT_GT(b.cost->running(b.boundary.x0, Vector::Zero(4), 0.0), 0.0);
}

TEST(Benchmarks, OverridesApply) {
  BenchmarkOverrides o;
  o.plant_parameters["link_mass"] = 2.0;
  CostWeights w = default_weights(ProblemId::kCartPole);
  w.R[0] = 0.5;
  o.weights = w;
  o.control_bounds = Bounds{Vector::Constant(1, -50.0), Vector::Constant(1, 50.0)};
  const Benchmark b = make_benchmark(ProblemId::kCartPole, o);
  EXPECT_EQ(b.plant->parameters().at("link_mass"), 2.0);
  EXPECT_NEAR(b.cost->running(Vector::Zero(4), Vector::Ones(1), 0.0), 0.5, 1e-15);
  ASSERT_TRUE(b.boundary.control_bounds.has_value());
  EXPECT_EQ(b.boundary.control_bounds->upper[0], 50.0);
}

TEST(Benchmarks, RejectsBadOverrides) {
  BenchmarkOverrides unknown;
  unknown.plant_parameters["wheel_radius"] = 1.0;
  EXPECT_THROW(make_benchmark(ProblemId::kCartPole, unknown), Error);

  BenchmarkOverrides negative;
  negative.plant_parameters["mass"] = -1.0;
  EXPECT_THROW(make_benchmark(ProblemId::kQuadrotor, negative), Error);

  BenchmarkOverrides sizes;
  sizes.weights = default_weights(ProblemId::kCartPole);
  EXPECT_THROW(make_benchmark(ProblemId::kQuadrotor, sizes), Error);

  BenchmarkOverrides signs;
  signs.weights = default_weights(ProblemId::kCartPole);
  signs.weights->R[0] = -1.0;
  EXPECT_THROW(make_benchmark(ProblemId::kCartPole, signs), Error);

  BenchmarkOverrides inverted;
  inverted.control_bounds = Bounds{Vector::Constant(1, 1.0), Vector::Constant(1, -1.0)};
  EXPECT_THROW(make_benchmark(ProblemId::kCartPole, inverted), Error);
}

}  // namespace
}  // namespace trajopt
