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

#include <cmath>

#include "trajopt/dynamics.hpp"

namespace trajopt {

namespace {

// Manipulator-form plants: M(q) qddot = b(q, qdot, u) with state
// x = (q, qdot). Differentiating through the mass matrix gives
//   d qddot / d z = M^-1 (db/dz - dM/dz qddot).
struct ManipulatorTerms {
  Matrix mass;
  Vector rhs;
  std::vector<Matrix> mass_dq;  // dM/dq_j, one per configuration coordinate
  Matrix rhs_dx;                // db/dx over the full state
  Matrix rhs_du;                // db/du
};

Vector manipulator_dynamics(const Vector& x, const Matrix& mass, const Vector& rhs) {
  const auto nq = mass.rows();
  Vector xdot(2 * nq);
  xdot.head(nq) = x.tail(nq);
  xdot.tail(nq) = mass.llt().solve(rhs);
  return xdot;
}

Matrix manipulator_jacobian_x(const ManipulatorTerms& t) {
  const auto nq = t.mass.rows();
  Eigen::LLT<Matrix> llt(t.mass);
  const Vector qddot = llt.solve(t.rhs);
  Matrix rhs = t.rhs_dx;
  for (Eigen::Index j = 0; j < nq; ++j) {
    rhs.col(j) -= t.mass_dq[j] * qddot;
  }
  Matrix jac = Matrix::Zero(2 * nq, 2 * nq);
  jac.topRightCorner(nq, nq).setIdentity();
  jac.bottomRows(nq) = llt.solve(rhs);
  return jac;
}

Matrix manipulator_jacobian_u(const ManipulatorTerms& t) {
  const auto nq = t.mass.rows();
  Matrix jac = Matrix::Zero(2 * nq, t.rhs_du.cols());
  jac.bottomRows(nq) = t.mass.llt().solve(t.rhs_du);
  return jac;
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw Error(std::string(what) + " must be positive");
}

}  // namespace

// ---------------------------------------------------------------------------
// Cart pole

CartPole::CartPole(Params p) : p_(p) {
  require_positive(p_.cart_mass, "cart_mass");
  require_positive(p_.link_mass, "link_mass");
  require_positive(p_.link_length, "link_length");
  require_positive(p_.gravity, "gravity");
}

std::map<std::string, double> CartPole::parameters() const {
  return {{"cart_mass", p_.cart_mass},
          {"link_mass", p_.link_mass},
          {"link_length", p_.link_length},
          {"gravity", p_.gravity}};
}

Matrix CartPole::mass_matrix(const Vector& q) const {
  const double ml = p_.link_mass * p_.link_length;
  Matrix m(2, 2);
  m << p_.cart_mass + p_.link_mass, ml * std::cos(q[1]),
      ml * std::cos(q[1]), ml * p_.link_length;
  return m;
}

Vector CartPole::dynamics(const Vector& x, const Vector& u, double) const {
  const double s = std::sin(x[1]);
  const double ml = p_.link_mass * p_.link_length;
  Vector rhs(2);
  rhs << u[0] + ml * s * x[3] * x[3], -ml * p_.gravity * s;
  return manipulator_dynamics(x, mass_matrix(x.head(2)), rhs);
}

Matrix CartPole::jacobian_x(const Vector& x, const Vector& u, double) const {
  const double s = std::sin(x[1]);
  const double c = std::cos(x[1]);
  const double ml = p_.link_mass * p_.link_length;
  ManipulatorTerms t;
  t.mass = mass_matrix(x.head(2));
  t.rhs.resize(2);
  t.rhs << u[0] + ml * s * x[3] * x[3], -ml * p_.gravity * s;
  Matrix dm_dtheta(2, 2);
  dm_dtheta << 0.0, -ml * s, -ml * s, 0.0;
  t.mass_dq = {Matrix::Zero(2, 2), dm_dtheta};
  t.rhs_dx = Matrix::Zero(2, 4);
  t.rhs_dx(0, 1) = ml * c * x[3] * x[3];
  t.rhs_dx(0, 3) = 2.0 * ml * s * x[3];
  t.rhs_dx(1, 1) = -ml * p_.gravity * c;
  return manipulator_jacobian_x(t);
}

Matrix CartPole::jacobian_u(const Vector& x, const Vector&, double) const {
  ManipulatorTerms t;
  t.mass = mass_matrix(x.head(2));
  t.rhs_du = Matrix::Zero(2, 1);
  t.rhs_du(0, 0) = 1.0;
  return manipulator_jacobian_u(t);
}

double CartPole::energy(const Vector& x) const {
  const Vector qdot = x.tail(2);
  const double kinetic = 0.5 * qdot.dot(mass_matrix(x.head(2)) * qdot);
  const double potential =
      -p_.link_mass * p_.gravity * p_.link_length * std::cos(x[1]);
  return kinetic + potential;
}

// ---------------------------------------------------------------------------
// Double cart pole

DoubleCartPole::DoubleCartPole(Params p) : p_(p) {
  require_positive(p_.cart_mass, "cart_mass");
  require_positive(p_.link1_mass, "link1_mass");
  require_positive(p_.link2_mass, "link2_mass");
  require_positive(p_.link1_length, "link1_length");
  require_positive(p_.link2_length, "link2_length");
  require_positive(p_.gravity, "gravity");
}

std::map<std::string, double> DoubleCartPole::parameters() const {
  return {{"cart_mass", p_.cart_mass},       {"link1_mass", p_.link1_mass},
          {"link2_mass", p_.link2_mass},     {"link1_length", p_.link1_length},
          {"link2_length", p_.link2_length}, {"gravity", p_.gravity}};
}

Matrix DoubleCartPole::mass_matrix(const Vector& q) const {
  const double m12 = p_.link1_mass + p_.link2_mass;
  const double l1 = p_.link1_length;
  const double l2 = p_.link2_length;
  const double m2 = p_.link2_mass;
  const double c1 = std::cos(q[1]);
  const double c2 = std::cos(q[2]);
  const double c12 = std::cos(q[1] - q[2]);
  Matrix m(3, 3);
  m << p_.cart_mass + m12, m12 * l1 * c1, m2 * l2 * c2,
      m12 * l1 * c1, m12 * l1 * l1, m2 * l1 * l2 * c12,
      m2 * l2 * c2, m2 * l1 * l2 * c12, m2 * l2 * l2;
  return m;
}

Vector DoubleCartPole::generalized_forces(const Vector& x, double force) const {
  const double m12 = p_.link1_mass + p_.link2_mass;
  const double m2 = p_.link2_mass;
  const double l1 = p_.link1_length;
  const double l2 = p_.link2_length;
  const double g = p_.gravity;
  const double s1 = std::sin(x[1]);
  const double s2 = std::sin(x[2]);
  const double s12 = std::sin(x[1] - x[2]);
  const double w1 = x[4];
  const double w2 = x[5];
  Vector b(3);
  b << force + m12 * l1 * s1 * w1 * w1 + m2 * l2 * s2 * w2 * w2,
      -m2 * l1 * l2 * s12 * w2 * w2 - m12 * g * l1 * s1,
      m2 * l1 * l2 * s12 * w1 * w1 - m2 * g * l2 * s2;
  return b;
}

Vector DoubleCartPole::dynamics(const Vector& x, const Vector& u, double) const {
  return manipulator_dynamics(x, mass_matrix(x.head(3)),
                              generalized_forces(x, u[0]));
}

Matrix DoubleCartPole::jacobian_x(const Vector& x, const Vector& u,
                                  double) const {
  const double m12 = p_.link1_mass + p_.link2_mass;
  const double m2 = p_.link2_mass;
  const double l1 = p_.link1_length;
  const double l2 = p_.link2_length;
  const double g = p_.gravity;
  const double s1 = std::sin(x[1]);
  const double c1 = std::cos(x[1]);
  const double s2 = std::sin(x[2]);
  const double c2 = std::cos(x[2]);
  const double s12 = std::sin(x[1] - x[2]);
  const double c12 = std::cos(x[1] - x[2]);
  const double w1 = x[4];
  const double w2 = x[5];
  const double k = m2 * l1 * l2;

  ManipulatorTerms t;
  t.mass = mass_matrix(x.head(3));
  t.rhs = generalized_forces(x, u[0]);

  Matrix dm1 = Matrix::Zero(3, 3);
  dm1(0, 1) = dm1(1, 0) = -m12 * l1 * s1;
  dm1(1, 2) = dm1(2, 1) = -k * s12;
  Matrix dm2 = Matrix::Zero(3, 3);
  dm2(0, 2) = dm2(2, 0) = -m2 * l2 * s2;
  dm2(1, 2) = dm2(2, 1) = k * s12;
  t.mass_dq = {Matrix::Zero(3, 3), dm1, dm2};

  Matrix& db = t.rhs_dx;
  db = Matrix::Zero(3, 6);
  db(0, 1) = m12 * l1 * c1 * w1 * w1;
  db(1, 1) = -k * c12 * w2 * w2 - m12 * g * l1 * c1;
  db(2, 1) = k * c12 * w1 * w1;
  db(0, 2) = m2 * l2 * c2 * w2 * w2;
  db(1, 2) = k * c12 * w2 * w2;
  db(2, 2) = -k * c12 * w1 * w1 - m2 * g * l2 * c2;
  db(0, 4) = 2.0 * m12 * l1 * s1 * w1;
  db(2, 4) = 2.0 * k * s12 * w1;
  db(0, 5) = 2.0 * m2 * l2 * s2 * w2;
  db(1, 5) = -2.0 * k * s12 * w2;
  return manipulator_jacobian_x(t);
}

Matrix DoubleCartPole::jacobian_u(const Vector& x, const Vector&, double) const {
  ManipulatorTerms t;
  t.mass = mass_matrix(x.head(3));
  t.rhs_du = Matrix::Zero(3, 1);
  t.rhs_du(0, 0) = 1.0;
  return manipulator_jacobian_u(t);
}

double DoubleCartPole::energy(const Vector& x) const {
  const Vector qdot = x.tail(3);
  const double kinetic = 0.5 * qdot.dot(mass_matrix(x.head(3)) * qdot);
  const double potential =
      -(p_.link1_mass + p_.link2_mass) * p_.gravity * p_.link1_length *
          std::cos(x[1]) -
      p_.link2_mass * p_.gravity * p_.link2_length * std::cos(x[2]);
  return kinetic + potential;
}

}  // namespace trajopt
