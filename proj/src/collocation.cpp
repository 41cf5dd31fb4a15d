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

#include "trajopt/collocation.hpp"

#include <cmath>
#include <numbers>

namespace trajopt::collocation {

LegendreValue legendre_eval(int degree, double tau) {
  if (degree < 0) throw Error("legendre_eval: degree must be non-negative");
  // P_{k+1}   = ((2k+1) tau P_k - k P_{k-1}) / (k+1)
  // P'_{k+1}  = (k+1) P_k + tau P'_k
  // P''_{k+1} = (k+2) P'_k + tau P''_k
  double p_prev = 1.0;
  double p = 1.0, dp = 0.0, d2p = 0.0;
  if (degree == 0) return {p, dp, d2p};
  p = tau;
  dp = 1.0;
  for (int k = 1; k < degree; ++k) {
    const double p_next = ((2.0 * k + 1.0) * tau * p - k * p_prev) / (k + 1.0);
    const double dp_next = (k + 1.0) * p + tau * dp;
    const double d2p_next = (k + 2.0) * dp + tau * d2p;
    p_prev = p;
    p = p_next;
    dp = dp_next;
    d2p = d2p_next;
  }
  return {p, dp, d2p};
}

Vector lg_nodes(int count) {
  if (count < 1) throw Error("lg_nodes: need at least one node");
  Vector nodes(count);
  for (int i = 0; i < (count + 1) / 2; ++i) {
    // Chebyshev-like guess for the i-th root counted from -1.
    double tau = -std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    bool converged = false;
    for (int iter = 0; iter < 100; ++iter) {
      const LegendreValue v = legendre_eval(count, tau);
      const double step = v.p / v.dp;
      tau -= step;
      if (std::abs(step) <= 1e-14) {
        // One polishing step once the quadratic phase is reached.
        const LegendreValue w = legendre_eval(count, tau);
        tau -= w.p / w.dp;
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw Error("lg_nodes: Newton iteration failed for root " +
                  std::to_string(i) + " of P_" + std::to_string(count));
    }
    nodes[i] = tau;
    nodes[count - 1 - i] = -tau;
  }
  if (count % 2 == 1) nodes[count / 2] = 0.0;
  return nodes;
}

Vector lg_weights(const Vector& nodes) {
  const int count = static_cast<int>(nodes.size());
  Vector w(count);
  for (int i = 0; i < count; ++i) {
    const double tau = nodes[i];
    const double denom_base = 1.0 - tau * tau;
    if (!(denom_base > 0.0)) {
      throw Error("lg_weights: node at +-1 is not a Legendre-Gauss point");
    }
    const double dp = legendre_eval(count, tau).dp;
    w[i] = 2.0 / (denom_base * dp * dp);
  }
  return w;
}

Matrix diff_matrix(const Vector& nodes) {
  const int count = static_cast<int>(nodes.size());
  // g(tau) = (1 + tau) P_K(tau) vanishes on the support {-1} U nodes.
  // gd = g'.
  Vector support(count + 1);
  support[0] = -1.0;
  support.tail(count) = nodes;
  Vector gd(count + 1);
  for (int i = 0; i <= count; ++i) {
    const LegendreValue v = legendre_eval(count, support[i]);
    gd[i] = (1.0 + support[i]) * v.dp + v.p;
  }
  Matrix d(count, count + 1);
  for (int k = 0; k < count; ++k) {
    const int row_support = k + 1;
    double off_diagonal = 0.0;
    for (int i = 0; i <= count; ++i) {
      if (i == row_support) continue;
      d(k, i) = gd[row_support] / ((support[row_support] - support[i]) * gd[i]);
      off_diagonal += d(k, i);
    }
    // Diagonal from the row sum (equal to g''/(2g') in exact arithmetic),
    // so rows annihilate constants to rounding.
    d(k, row_support) = -off_diagonal;
  }
  return d;
}

Grid make_grid(int count) {
  if (count < 1) throw Error("make_grid: need at least one collocation node");
  Grid grid;
  grid.count = count;
  grid.nodes = lg_nodes(count);
  grid.weights = lg_weights(grid.nodes);
  grid.support.resize(count + 1);
  grid.support[0] = -1.0;
  grid.support.tail(count) = grid.nodes;
  grid.D = diff_matrix(grid.nodes);
  return grid;
}

double gauss_quadrature(const std::function<double(double)>& f, const Grid& grid) {
  double sum = 0.0;
  for (int i = 0; i < grid.count; ++i) {
    const double value = f(grid.nodes[i]);
    if (!std::isfinite(value)) {
      throw NonFiniteError("gauss_quadrature: non-finite integrand", i);
    }
    sum += grid.weights[i] * value;
  }
  return sum;
}

Vector barycentric_weights(const Vector& support) {
  const auto count = support.size();
  Vector w = Vector::Ones(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    for (Eigen::Index j = 0; j < count; ++j) {
      if (i == j) continue;
      const double diff = support[i] - support[j];
      if (diff == 0.0) throw Error("lagrange_interpolate: repeated support point");
      w[i] /= diff;
    }
  }
  return w;
}

Vector lagrange_interpolate(const Vector& support, const Vector& bary,
                            const Matrix& values, double tau) {
  const auto count = support.size();
  Vector numerator = Vector::Zero(values.cols());
  double denominator = 0.0;
  for (Eigen::Index i = 0; i < count; ++i) {
    const double diff = tau - support[i];
    if (diff == 0.0) return values.row(i).transpose();
    const double c = bary[i] / diff;
    numerator += c * values.row(i).transpose();
    denominator += c;
  }
  return numerator / denominator;
}

double lagrange_interpolate(const Vector& support, const Vector& values,
                            double tau) {
  if (support.size() != values.size() || support.size() == 0) {
    throw Error("lagrange_interpolate: support and values sizes differ");
  }
  return lagrange_interpolate(support, barycentric_weights(support),
                              Matrix(values), tau)[0];
}

}  // namespace trajopt::collocation
