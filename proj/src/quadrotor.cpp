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

constexpr int kPos = 0;
constexpr int kVel = 3;
constexpr int kRpy = 6;
constexpr int kRate = 9;

struct Trig {
  double sr, cr, sp, cp, tp, sy, cy;
};

Trig trig_of(const Vector& x) {
  const double roll = x[kRpy];
  const double pitch = x[kRpy + 1];
  const double yaw = x[kRpy + 2];
  Trig t{std::sin(roll), std::cos(roll),  std::sin(pitch), std::cos(pitch),
         0.0,            std::sin(yaw),   std::cos(yaw)};
  if (std::abs(t.cp) < std::sin(1e-6)) {
    throw Error("quadrotor: pitch within 1e-6 of +-pi/2 (Euler-angle singularity)");
  }
  t.tp = t.sp / t.cp;
  return t;
}

// Third column of R = Rz(yaw) Ry(pitch) Rx(roll): the body z-axis in world.
Eigen::Vector3d body_z(const Trig& t) {
  return {t.cy * t.sp * t.cr + t.sy * t.sr, t.sy * t.sp * t.cr - t.cy * t.sr,
          t.cp * t.cr};
}

}  // namespace

Quadrotor::Quadrotor(Params p) : p_(p) {
  if (!(p_.mass > 0.0 && p_.inertia_x > 0.0 && p_.inertia_y > 0.0 &&
        p_.inertia_z > 0.0 && p_.arm_length > 0.0 && p_.gravity > 0.0)) {
    throw Error("quadrotor: mass, inertia, arm length and gravity must be positive");
  }
}

std::map<std::string, double> Quadrotor::parameters() const {
  return {{"mass", p_.mass},
          {"inertia_x", p_.inertia_x},
          {"inertia_y", p_.inertia_y},
          {"inertia_z", p_.inertia_z},
          {"arm_length", p_.arm_length},
          {"gravity", p_.gravity},
          {"yaw_coefficient", p_.yaw_coefficient}};
}

Matrix Quadrotor::mixing_matrix() const {
  const double l = p_.arm_length;
  const double k = p_.yaw_coefficient;
  Matrix mix(4, 4);
  mix << 1.0, 1.0, 1.0, 1.0,
      0.0, l, 0.0, -l,
      -l, 0.0, l, 0.0,
      k, -k, k, -k;
  return mix;
}

Vector Quadrotor::dynamics(const Vector& x, const Vector& u, double) const {
  const Trig t = trig_of(x);
  const Vector wrench = mixing_matrix() * u;
  const double p = x[kRate];
  const double q = x[kRate + 1];
  const double r = x[kRate + 2];
  const double jx = p_.inertia_x;
  const double jy = p_.inertia_y;
  const double jz = p_.inertia_z;

  Vector xdot(12);
  xdot.segment<3>(kPos) = x.segment<3>(kVel);
  xdot.segment<3>(kVel) = (wrench[0] / p_.mass) * body_z(t);
  xdot[kVel + 2] -= p_.gravity;
  xdot[kRpy] = p + t.sr * t.tp * q + t.cr * t.tp * r;
  xdot[kRpy + 1] = t.cr * q - t.sr * r;
  xdot[kRpy + 2] = (t.sr * q + t.cr * r) / t.cp;
  xdot[kRate] = (wrench[1] - (jz - jy) * q * r) / jx;
  xdot[kRate + 1] = (wrench[2] - (jx - jz) * r * p) / jy;
  xdot[kRate + 2] = (wrench[3] - (jy - jx) * p * q) / jz;
  return xdot;
}

Matrix Quadrotor::jacobian_x(const Vector& x, const Vector& u, double) const {
  const Trig t = trig_of(x);
  const double thrust = u.sum();
  const double p = x[kRate];
  const double q = x[kRate + 1];
  const double r = x[kRate + 2];
  const double jx = p_.inertia_x;
  const double jy = p_.inertia_y;
  const double jz = p_.inertia_z;
  const double a = thrust / p_.mass;

  Matrix jac = Matrix::Zero(12, 12);
  jac.block<3, 3>(kPos, kVel).setIdentity();

  // d(body_z)/d(roll, pitch, yaw)
  jac(kVel + 0, kRpy + 0) = a * (-t.cy * t.sp * t.sr + t.sy * t.cr);
  jac(kVel + 1, kRpy + 0) = a * (-t.sy * t.sp * t.sr - t.cy * t.cr);
  jac(kVel + 2, kRpy + 0) = a * (-t.cp * t.sr);
  jac(kVel + 0, kRpy + 1) = a * (t.cy * t.cp * t.cr);
  jac(kVel + 1, kRpy + 1) = a * (t.sy * t.cp * t.cr);
  jac(kVel + 2, kRpy + 1) = a * (-t.sp * t.cr);
  jac(kVel + 0, kRpy + 2) = a * (-t.sy * t.sp * t.cr + t.cy * t.sr);
  jac(kVel + 1, kRpy + 2) = a * (t.cy * t.sp * t.cr + t.sy * t.sr);

  const double sec2 = 1.0 / (t.cp * t.cp);
  const double qr_roll = t.sr * q + t.cr * r;  // enters every pitch derivative
  jac(kRpy + 0, kRpy + 0) = t.tp * (t.cr * q - t.sr * r);
  jac(kRpy + 1, kRpy + 0) = -t.sr * q - t.cr * r;
  jac(kRpy + 2, kRpy + 0) = (t.cr * q - t.sr * r) / t.cp;
  jac(kRpy + 0, kRpy + 1) = qr_roll * sec2;
  jac(kRpy + 2, kRpy + 1) = qr_roll * t.sp * sec2;

  jac(kRpy + 0, kRate + 0) = 1.0;
  jac(kRpy + 0, kRate + 1) = t.sr * t.tp;
  jac(kRpy + 0, kRate + 2) = t.cr * t.tp;
  jac(kRpy + 1, kRate + 1) = t.cr;
  jac(kRpy + 1, kRate + 2) = -t.sr;
  jac(kRpy + 2, kRate + 1) = t.sr / t.cp;
  jac(kRpy + 2, kRate + 2) = t.cr / t.cp;

  jac(kRate + 0, kRate + 1) = -(jz - jy) * r / jx;
  jac(kRate + 0, kRate + 2) = -(jz - jy) * q / jx;
  jac(kRate + 1, kRate + 0) = -(jx - jz) * r / jy;
  jac(kRate + 1, kRate + 2) = -(jx - jz) * p / jy;
  jac(kRate + 2, kRate + 0) = -(jy - jx) * q / jz;
  jac(kRate + 2, kRate + 1) = -(jy - jx) * p / jz;
  return jac;
}

Matrix Quadrotor::jacobian_u(const Vector& x, const Vector&, double) const {
  const Trig t = trig_of(x);
  const Matrix mix = mixing_matrix();
  Matrix jac = Matrix::Zero(12, 4);
  const Eigen::Vector3d z = body_z(t) / p_.mass;
  for (int j = 0; j < 4; ++j) jac.block<3, 1>(kVel, j) = z;
  jac.row(kRate + 0) = mix.row(1) / p_.inertia_x;
  jac.row(kRate + 1) = mix.row(2) / p_.inertia_y;
  jac.row(kRate + 2) = mix.row(3) / p_.inertia_z;
  return jac;
}

}  // namespace trajopt
