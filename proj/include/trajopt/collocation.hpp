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

#ifndef TRAJOPT_COLLOCATION_HPP_
#define TRAJOPT_COLLOCATION_HPP_

#include <functional>

#include "trajopt/core.hpp"

namespace trajopt::collocation {

struct LegendreValue {
  double p = 0.0;    // P_K(tau)
  double dp = 0.0;   // P_K'(tau)
  double d2p = 0.0;  // P_K''(tau)
};

/// Degree-K Legendre polynomial and its first two derivatives by the
/// three-term recurrence.
LegendreValue legendre_eval(int degree, double tau);

/// The K roots of P_K in ascending order (Legendre-Gauss points).
Vector lg_nodes(int count);

/// Gauss-Legendre weights 2 / ((1 - tau^2) P_K'(tau)^2) for the given nodes.
Vector lg_weights(const Vector& nodes);

/// K x (K+1) Gauss pseudospectral differentiation matrix. Columns index
/// the support {-1} U nodes, rows the K collocation nodes.
Matrix diff_matrix(const Vector& nodes);

/// Legendre-Gauss collocation grid on [-1, 1].
struct Grid {
  int count = 0;
  Vector nodes;    // K LG points
  Vector weights;  // K quadrature weights
  Vector support;  // K+1 points: -1 followed by the nodes
  Matrix D;        // K x (K+1)
};

/// Throws Error when count < 1.
Grid make_grid(int count);

/// sum_i w_i f(tau_i); throws NonFiniteError carrying the node index.
double gauss_quadrature(const std::function<double(double)>& f, const Grid& grid);

/// Barycentric weights 1 / prod_{j != i} (x_i - x_j).
Vector barycentric_weights(const Vector& support);

/// Value at `tau` of the polynomial interpolating `values` on `support`
/// (second barycentric form). Returns the stored value exactly when tau
/// coincides with a support point.
double lagrange_interpolate(const Vector& support, const Vector& values,
                            double tau);

/// Same, with precomputed barycentric weights; `values` may hold several
/// channels as columns (rows follow `support`).
Vector lagrange_interpolate(const Vector& support, const Vector& bary,
                            const Matrix& values, double tau);

}  // namespace trajopt::collocation

#endif  // TRAJOPT_COLLOCATION_HPP_
