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
#include <functional>
#include <random>

#include <Eigen/Geometry>

#include "trajopt/core.hpp"
#include "trajopt/dynamics.hpp"

namespace trajopt {
namespace {

// Lagrangian oracle built only from point-mass positions and velocities.
// T(q, v) is quadratic in v, so M(q) follows exactly from polarization.
struct PointMassModel {
  int dof = 0;
  std::function<double(const Vector& q, const Vector& v)> kinetic;
  std::function<double(const Vector& q)> potential;

  Matrix mass(const Vector& q) const {
    Matrix m(dof, dof);
    for (int i = 0; i < dof; ++i) {
      const Vector ei = Vector::Unit(dof, i);
      m(i, i) = 2.0 * kinetic(q, ei);
      for (int j = 0; j < i; ++j) {
        const Vector ej = Vector::Unit(dof, j);
        m(i, j) = m(j, i) = kinetic(q, ei + ej) - kinetic(q, ei) - kinetic(q, ej);
      }
    }
    return m;
  }

  // qddot from Euler-Lagrange with generalized force `force`.
  Vector accel(const Vector& q, const Vector& v, const Vector& force) const {
    const double h = 1e-6;
    Vector rhs = force;
    for (int j = 0; j < dof; ++j) {
      const Vector dq = h * Vector::Unit(dof, j);
      const Matrix dm = (mass(q + dq) - mass(q - dq)) / (2.0 * h);
      const double dv = (potential(q + dq) - potential(q - dq)) / (2.0 * h);
      rhs -= dm * v * v[j];
      rhs[j] += 0.5 * v.dot(dm * v) - dv;
    }
    return mass(q).ldlt().solve(rhs);
  }

  double energy(const Vector& x) const {
    return kinetic(x.head(dof), x.tail(dof)) + potential(x.head(dof));
  }
};

PointMassModel cartpole_model(const CartPole::Params& p) {
  PointMassModel m;
  m.dof = 2;
  m.kinetic = [p](const Vector& q, const Vector& v) {
    const double vx = v[0] + p.link_length * std::cos(q[1]) * v[1];
    const double vy = p.link_length * std::sin(q[1]) * v[1];
    return 0.5 * p.cart_mass * v[0] * v[0] + 0.5 * p.link_mass * (vx * vx + vy * vy);
  };
  m.potential = [p](const Vector& q) {
    return -p.link_mass * p.gravity * p.link_length * std::cos(q[1]);
  };
  return m;
}

PointMassModel double_model(const DoubleCartPole::Params& p) {
  PointMassModel m;
  m.dof = 3;
  m.kinetic = [p](const Vector& q, const Vector& v) {
    const double v1x = v[0] + p.link1_length * std::cos(q[1]) * v[1];
    const double v1y = p.link1_length * std::sin(q[1]) * v[1];
    const double v2x = v1x + p.link2_length * std::cos(q[2]) * v[2];
    const double v2y = v1y + p.link2_length * std::sin(q[2]) * v[2];
    return 0.5 * p.cart_mass * v[0] * v[0] + 0.5 * p.link1_mass * (v1x * v1x + v1y * v1y) +
           0.5 * p.link2_mass * (v2x * v2x + v2y * v2y);
  };
  m.potential = [p](const Vector& q) {
    const double y1 = -p.link1_length * std::cos(q[1]);
    const double y2 = y1 - p.link2_length * std::cos(q[2]);
    return p.gravity * (p.link1_mass * y1 + p.link2_mass * y2);
  };
  return m;
}

Vector random_vector(std::mt19937& rng, int n, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vector v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

void expect_matches_oracle(const Plant& plant, const PointMassModel& model, int seed) {
  std::mt19937 rng(seed);
  const int dof = model.dof;
  for (int trial = 0; trial < 50; ++trial) {
    const Vector x = random_vector(rng, 2 * dof, 3.0);
    const Vector u = random_vector(rng, 1, 20.0);
    const Vector xdot = plant.dynamics(x, u, 0.0);
    const Vector expected = model.accel(x.head(dof), x.tail(dof), u[0] * Vector::Unit(dof, 0));
    EXPECT_LT(relative_error(xdot.head(dof), x.tail(dof)), 1e-15);
    EXPECT_LT(relative_error(xdot.tail(dof), expected), 1e-6) << "trial " << trial;
  }
}

TEST(CartPole, MatchesLagrangianOracle) {
  const CartPole plant;
  expect_matches_oracle(plant, cartpole_model(plant.params()), 1);
}

TEST(CartPole, NonDefaultParametersMatchOracle) {
  const CartPole::Params p{2.0, 0.5, 0.7, 3.7};
  expect_matches_oracle(CartPole(p), cartpole_model(p), 2);
}

TEST(DoubleCartPole, MatchesLagrangianOracle) {
  const DoubleCartPole plant;
  expect_matches_oracle(plant, double_model(plant.params()), 3);
}

TEST(DoubleCartPole, NonDefaultParametersMatchOracle) {
  const DoubleCartPole::Params p{1.0, 2.0, 0.5, 0.8, 1.1, 9.0};
  expect_matches_oracle(DoubleCartPole(p), double_model(p), 4);
}

TEST(CartPole, MassMatrixMatchesOracle) {
  const CartPole plant;
  const PointMassModel model = cartpole_model(plant.params());
  std::mt19937 rng(5);
  for (int i = 0; i < 20; ++i) {
    const Vector q = random_vector(rng, 2, 4.0);
    EXPECT_LT(relative_error(plant.mass_matrix(q), model.mass(q)), 1e-12);
  }
}

TEST(DoubleCartPole, MassMatrixMatchesOracle) {
  const DoubleCartPole plant;
  const PointMassModel model = double_model(plant.params());
  std::mt19937 rng(6);
  for (int i = 0; i < 20; ++i) {
    const Vector q = random_vector(rng, 3, 4.0);
    EXPECT_LT(relative_error(plant.mass_matrix(q), model.mass(q)), 1e-12);
  }
}

// Unforced RK4 with a small step must conserve the oracle energy.
void expect_energy_conserved(const Plant& plant, const PointMassModel& model, const Vector& x0,
                             double horizon, const std::function<double(const Vector&)>& energy) {
  const double dt = 1e-4;
  const int steps = static_cast<int>(std::lround(horizon / dt));
  const Vector u = Vector::Zero(1);
  const double e0 = model.energy(x0);
  EXPECT_NEAR(energy(x0), e0, 1e-10 * std::max(1.0, std::abs(e0)));
  Vector x = x0;
  double worst = 0.0;
  for (int k = 0; k < steps; ++k) {
    x = integrate_step(plant, x, u, k * dt, dt, Integrator::kRk4);
    worst = std::max(worst, std::abs(model.energy(x) - e0));
  }
  EXPECT_LT(worst / std::max(1.0, std::abs(e0)), 1e-6);
}

TEST(CartPole, RungeKuttaConservesEnergy) {
  const CartPole plant;
  Vector x0(4);
  x0 << 0.3, 2.0, -0.5, 1.5;
  expect_energy_conserved(plant, cartpole_model(plant.params()), x0, 2.0,
                          [&](const Vector& x) { return plant.energy(x); });
}

TEST(DoubleCartPole, RungeKuttaConservesEnergy) {
  const DoubleCartPole plant;
  Vector x0(6);
  x0 << 0.0, 1.0, 2.5, 0.4, -1.0, 0.5;
  expect_energy_conserved(plant, double_model(plant.params()), x0, 4.0,
                          [&](const Vector& x) { return plant.energy(x); });
}

TEST(CartPole, EquilibriaAreFixedPoints) {
  const CartPole plant;
  for (double theta : {0.0, M_PI}) {
    Vector x = Vector::Zero(4);
    x[0] = 1.7;
    x[1] = theta;
    EXPECT_LT(plant.dynamics(x, Vector::Zero(1), 0.0).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(DoubleCartPole, EquilibriaAreFixedPoints) {
  const DoubleCartPole plant;
  for (double a : {0.0, M_PI})
    for (double b : {0.0, M_PI}) {
      Vector x = Vector::Zero(6);
      x[1] = a;
      x[2] = b;
      EXPECT_LT(plant.dynamics(x, Vector::Zero(1), 0.0).cwiseAbs().maxCoeff(), 1e-11);
    }
}

TEST(DoubleCartPole, MassMatrixWellConditioned) {
  const DoubleCartPole plant;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  for (int i = 0; i < 1000; ++i) {
    Vector q(3);
    q << 0.0, angle(rng), angle(rng);
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(plant.mass_matrix(q));
    const double lo = eig.eigenvalues().minCoeff();
    ASSERT_GT(lo, 0.0);
    const double cond = eig.eigenvalues().maxCoeff() / lo;
    ASSERT_TRUE(std::isfinite(cond));
    EXPECT_LT(cond, 1e8);
  }
}

// Independent quadrotor model from rotation matrices and rigid-body laws.
Vector quad_oracle(const Quadrotor::Params& p, const Vector& x, const Vector& u) {
  using Eigen::AngleAxisd;
  using Eigen::Vector3d;
  const double roll = x[6], pitch = x[7], yaw = x[8];
  const Eigen::Matrix3d rx = AngleAxisd(roll, Vector3d::UnitX()).toRotationMatrix();
  const Eigen::Matrix3d ry = AngleAxisd(pitch, Vector3d::UnitY()).toRotationMatrix();
  const Eigen::Matrix3d rz = AngleAxisd(yaw, Vector3d::UnitZ()).toRotationMatrix();
  const Eigen::Matrix3d rot = rz * ry * rx;
  const Vector3d omega = x.segment<3>(9);

  // omega_body = e1 rolldot + Rx^T e2 pitchdot + (Ry Rx)^T e3 yawdot
  Eigen::Matrix3d w;
  w.col(0) = Vector3d::UnitX();
  w.col(1) = rx.transpose() * Vector3d::UnitY();
  w.col(2) = (ry * rx).transpose() * Vector3d::UnitZ();

  const std::array<Vector3d, 4> arms = {Vector3d(p.arm_length, 0, 0), Vector3d(0, p.arm_length, 0),
                                        Vector3d(-p.arm_length, 0, 0),
                                        Vector3d(0, -p.arm_length, 0)};
  const std::array<double, 4> spin = {1.0, -1.0, 1.0, -1.0};
  Vector3d torque = Vector3d::Zero();
  double thrust = 0.0;
  for (int i = 0; i < 4; ++i) {
    torque += arms[i].cross(Vector3d(0, 0, u[i]));
    torque.z() += spin[i] * p.yaw_coefficient * u[i];
    thrust += u[i];
  }
  const Eigen::Matrix3d inertia = Vector3d(p.inertia_x, p.inertia_y, p.inertia_z).asDiagonal();

  Vector xdot(12);
  xdot.segment<3>(0) = x.segment<3>(3);
  xdot.segment<3>(3) = rot * Vector3d(0, 0, thrust / p.mass) - Vector3d(0, 0, p.gravity);
  xdot.segment<3>(6) = w.inverse() * omega;
  xdot.segment<3>(9) = inertia.inverse() * (torque - omega.cross(inertia * omega));
  return xdot;
}

TEST(Quadrotor, MatchesRigidBodyOracle) {
  const Quadrotor plant;
  std::mt19937 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    Vector x = random_vector(rng, 12, 1.2);
    const Vector u = plant.hover_thrust() * Vector::Ones(4) + random_vector(rng, 4, 2.0);
    EXPECT_LT(relative_error(plant.dynamics(x, u, 0.0), quad_oracle(plant.params(), x, u)),
              1e-12);
  }
}

TEST(Quadrotor, HoverIsFixedPoint) {
  const Quadrotor plant;
  Vector x = Vector::Zero(12);
  x << -1.0, 1.0, 0.5, 0, 0, 0, 0, 0, 0.7, 0, 0, 0;
  const Vector u = plant.hover_thrust() * Vector::Ones(4);
  EXPECT_LT(plant.dynamics(x, u, 0.0).cwiseAbs().maxCoeff(), 1e-15);
  const Vector next = integrate_step(plant, x, u, 0.0, 0.01, Integrator::kRk4);
  EXPECT_LT((next - x).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Quadrotor, ZeroThrustFallsFreely) {
  const Quadrotor plant;
  Vector x = Vector::Zero(12);
  x[6] = 0.3;
  x[7] = -0.2;
  const Vector xdot = plant.dynamics(x, Vector::Zero(4), 0.0);
  EXPECT_NEAR(xdot[5], -plant.params().gravity, 1e-15);
  EXPECT_EQ(xdot.segment<2>(3).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Quadrotor, OppositeRotorIncrementOnlyYawsAndLifts) {
  const Quadrotor plant;
  const double delta = 0.3;
  Vector u = plant.hover_thrust() * Vector::Ones(4);
  u[0] += delta;
  u[2] += delta;
  const Vector xdot = plant.dynamics(Vector::Zero(12), u, 0.0);
  const auto& p = plant.params();
  EXPECT_NEAR(xdot[5], 2.0 * delta / p.mass, 1e-14);
  EXPECT_NEAR(xdot[9], 0.0, 1e-14);
  EXPECT_NEAR(xdot[10], 0.0, 1e-14);
  EXPECT_NEAR(xdot[11], 2.0 * p.yaw_coefficient * delta / p.inertia_z, 1e-12);
}

TEST(Quadrotor, PitchSingularityThrows) {
  const Quadrotor plant;
  Vector x = Vector::Zero(12);
  x[7] = M_PI / 2.0;
  EXPECT_THROW(plant.dynamics(x, Vector::Zero(4), 0.0), Error);
  EXPECT_THROW(plant.jacobian_x(x, Vector::Zero(4), 0.0), Error);
  x[7] = M_PI / 2.0 - 1e-3;
  EXPECT_NO_THROW(plant.dynamics(x, Vector::Zero(4), 0.0));
}

TEST(Plants, RejectNonPositiveParameters) {
  CartPole::Params c;
  c.link_length = 0.0;
  EXPECT_THROW(CartPole{c}, Error);
  DoubleCartPole::Params d;
  d.cart_mass = -1.0;
  EXPECT_THROW(DoubleCartPole{d}, Error);
  Quadrotor::Params q;
  q.inertia_z = 0.0;
  EXPECT_THROW(Quadrotor{q}, Error);
}

void expect_jacobians_match(const Plant& plant, double scale, const Vector& u_offset, int seed) {
  std::mt19937 rng(seed);
  const int n = plant.state_dim();
  const int m = plant.control_dim();
  for (int trial = 0; trial < 100; ++trial) {
    const Vector x = random_vector(rng, n, scale);
    const Vector u = u_offset + random_vector(rng, m, 5.0);
    const Matrix fx = finite_diff_jacobian(
        [&](const Vector& z) { return plant.dynamics(z, u, 0.0); }, x);
    const Matrix fu = finite_diff_jacobian(
        [&](const Vector& z) { return plant.dynamics(x, z, 0.0); }, u);
    EXPECT_LT(relative_error(plant.jacobian_x(x, u, 0.0), fx), 1e-6) << plant.name() << trial;
    EXPECT_LT(relative_error(plant.jacobian_u(x, u, 0.0), fu), 1e-6) << plant.name() << trial;
  }
}

TEST(Jacobians, CartPoleMatchesFiniteDifferences) {
  expect_jacobians_match(CartPole(), 3.0, Vector::Zero(1), 9);
}

TEST(Jacobians, DoubleCartPoleMatchesFiniteDifferences) {
  expect_jacobians_match(DoubleCartPole(), 3.0, Vector::Zero(1), 10);
}

TEST(Jacobians, QuadrotorMatchesFiniteDifferences) {
  const Quadrotor plant;
  expect_jacobians_match(plant, 1.2, plant.hover_thrust() * Vector::Ones(4), 11);
}

TEST(Jacobians, LinearPlantIsExact) {
  Matrix a(2, 2), b(2, 1);
  a << 0, 1, -2, -0.5;
  b << 0, 1;
  const LinearPlant plant(a, b);
  EXPECT_EQ(plant.jacobian_x(Vector::Ones(2), Vector::Ones(1), 0.0), a);
  EXPECT_EQ(plant.jacobian_u(Vector::Ones(2), Vector::Ones(1), 0.0), b);
}

}  // namespace
}  // namespace trajopt
