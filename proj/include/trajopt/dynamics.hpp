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

#ifndef TRAJOPT_DYNAMICS_HPP_
#define TRAJOPT_DYNAMICS_HPP_

#include <memory>
#include <string>

#include "trajopt/core.hpp"

namespace trajopt {

// Pendulum-on-cart plants. Links are massless rods carrying a point mass at
// their distal end. Angles are absolute, measured from the downward
// vertical (theta = 0 hangs down, theta = pi is upright), positive
// counter-clockwise when the cart moves along +x.

/// State (x, theta, xdot, thetadot), control: horizontal force on the cart.
class CartPole final : public Plant {
 public:
  struct Params {
    double cart_mass = 1.0;
    double link_mass = 5.0;
    double link_length = 1.5;
    double gravity = 9.81;
  };

  CartPole() : CartPole(Params{}) {}
  explicit CartPole(Params p);

  int state_dim() const override { return 4; }
  int control_dim() const override { return 1; }
  std::string name() const override { return "cartpole"; }
  std::map<std::string, double> parameters() const override;

  Vector dynamics(const Vector& x, const Vector& u, double t) const override;
  Matrix jacobian_x(const Vector& x, const Vector& u, double t) const override;
  Matrix jacobian_u(const Vector& x, const Vector& u, double t) const override;

  /// Generalized mass matrix at configuration q = (x, theta).
  Matrix mass_matrix(const Vector& q) const;
  /// Kinetic plus potential energy; potential is zero at the pivot height.
  double energy(const Vector& x) const;

  const Params& params() const { return p_; }

 private:
  Params p_;
};

/// State (x, theta1, theta2, xdot, theta1dot, theta2dot), control: force.
class DoubleCartPole final : public Plant {
 public:
  struct Params {
    double cart_mass = 3.0;
    double link1_mass = 1.0;
    double link2_mass = 20.0;
    double link1_length = 1.5;
    double link2_length = 1.5;
    double gravity = 9.81;
  };

  DoubleCartPole() : DoubleCartPole(Params{}) {}
  explicit DoubleCartPole(Params p);

  int state_dim() const override { return 6; }
  int control_dim() const override { return 1; }
  std::string name() const override { return "double_cartpole"; }
  std::map<std::string, double> parameters() const override;

  Vector dynamics(const Vector& x, const Vector& u, double t) const override;
  Matrix jacobian_x(const Vector& x, const Vector& u, double t) const override;
  Matrix jacobian_u(const Vector& x, const Vector& u, double t) const override;

  Matrix mass_matrix(const Vector& q) const;
  double energy(const Vector& x) const;

  const Params& params() const { return p_; }

 private:
  // Right-hand side b(q, qdot, u) of M(q) qddot = b.
  Vector generalized_forces(const Vector& x, double force) const;
  Params p_;
};

/// Rigid-body quadrotor in plus configuration.
///
/// State: world position (3), world velocity (3), roll-pitch-yaw (3) and
/// body angular rates (3). Controls are the four rotor thrusts; rotor 1
/// sits on +x_body, rotor 2 on +y_body, rotor 3 on -x_body, rotor 4 on
/// -y_body. Rotors 1 and 3 spin opposite to 2 and 4, so the yaw torque is
/// yaw_coefficient * (u1 - u2 + u3 - u4).
class Quadrotor final : public Plant {
 public:
  struct Params {
    double mass = 1.0;
    double inertia_x = 8.1e-3;
    double inertia_y = 8.1e-3;
    double inertia_z = 14.2e-3;
    double arm_length = 0.24;
    double gravity = 9.81;
    double yaw_coefficient = 0.016;  // metres: yaw torque per newton of thrust
  };

  Quadrotor() : Quadrotor(Params{}) {}
  explicit Quadrotor(Params p);

  int state_dim() const override { return 12; }
  int control_dim() const override { return 4; }
  std::string name() const override { return "quadrotor"; }
  std::map<std::string, double> parameters() const override;

  /// Throws Error when the pitch is within 1e-6 of +-pi/2.
  Vector dynamics(const Vector& x, const Vector& u, double t) const override;
  Matrix jacobian_x(const Vector& x, const Vector& u, double t) const override;
  Matrix jacobian_u(const Vector& x, const Vector& u, double t) const override;

  /// Maps rotor thrusts to (total thrust, roll, pitch, yaw torques).
  Matrix mixing_matrix() const;
  /// Per-rotor thrust that holds a level hover.
  double hover_thrust() const { return p_.mass * p_.gravity / 4.0; }

  const Params& params() const { return p_; }

 private:
  Params p_;
};

}  // namespace trajopt

#endif  // TRAJOPT_DYNAMICS_HPP_
