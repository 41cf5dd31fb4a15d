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

#include "trajopt/nlp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>

namespace trajopt::nlp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kArmijo = 1e-4;
constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Box {
  Vector lower;
  Vector upper;

  Vector project(const Vector& x) const {
    return x.cwiseMax(lower).cwiseMin(upper);
  }
};

Box make_box(const Problem& p) {
  Box box;
  box.lower = p.lower.size() ? p.lower : Vector::Constant(p.dimension, -kInf);
  box.upper = p.upper.size() ? p.upper : Vector::Constant(p.dimension, kInf);
  if (box.lower.size() != p.dimension || box.upper.size() != p.dimension) {
    throw Error("nlp: bound vectors must match the problem dimension");
  }
  return box;
}

// Gradient with components that would push x through an active bound
// removed.
Vector projected(const Vector& g, const Vector& x, const Box& box) {
  Vector out = g;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if ((x[i] <= box.lower[i] && g[i] > 0.0) ||
        (x[i] >= box.upper[i] && g[i] < 0.0)) {
      out[i] = 0.0;
    }
  }
  return out;
}

// |x - P(x - g)|_inf: zero exactly at box-constrained stationary points.
double projected_step_norm(const Vector& g, const Vector& x, const Box& box) {
  return (x - box.project(x - g)).lpNorm<Eigen::Infinity>();
}

Vector constraints_of(const Problem& p, const Vector& x) {
  if (p.num_equalities == 0) return Vector(0);
  return p.constraints(x);
}

// Augmented Lagrangian phi = f + lambda^T c + rho/2 |c|^2 at one point.
struct Point {
  Vector x;
  double f = kInf;
  Vector c;
  double phi = kInf;
  Vector grad_f;
  Matrix jac;
  Vector grad_phi;
};

class AugmentedLagrangian {
 public:
  AugmentedLagrangian(const Problem& p, const Vector& lambda, double rho)
      : p_(p), lambda_(lambda), rho_(rho) {}

  // Values only; non-finite evaluations give phi = +inf.
  Point value(const Vector& x) const {
    Point pt;
    pt.x = x;
    pt.f = p_.objective(x);
    pt.c = constraints_of(p_, x);
    if (!std::isfinite(pt.f) || !pt.c.allFinite()) {
      pt.phi = kInf;
      return pt;
    }
    pt.phi = pt.f + lambda_.dot(pt.c) + 0.5 * rho_ * pt.c.squaredNorm();
    return pt;
  }

  void add_gradient(Point& pt) const {
    pt.grad_f = evaluate_gradient(p_, pt.x);
    pt.grad_phi = pt.grad_f;
    if (p_.num_equalities > 0) {
      pt.jac = evaluate_jacobian(p_, pt.x);
      pt.grad_phi += pt.jac.transpose() * (lambda_ + rho_ * pt.c);
    }
  }

  // Gradient of f + mult^T c at `pt` (Jacobian already evaluated).
  Vector lagrangian_gradient(const Point& pt, const Vector& mult) const {
    if (p_.num_equalities == 0) return pt.grad_f;
    return pt.grad_f + pt.jac.transpose() * mult;
  }

  double rho() const { return rho_; }
  const Vector& lambda() const { return lambda_; }

 private:
  const Problem& p_;
  const Vector& lambda_;
  double rho_;
};

// Curvature memory carried across outer iterations.
struct InnerState {
  Matrix B;  // dense model of the Lagrangian Hessian
  bool B_scaled = false;
  std::deque<std::pair<Vector, Vector>> pairs;  // L-BFGS (s, y)
  // Diagonal shift of the structured model, adapted to line-search success.
  double damping = 0.0;
  double damping_floor = 0.0;
};

struct InnerResult {
  Point point;
  int iterations = 0;
  bool stalled = false;
  // Reached the requested tolerance or the rounding floor.
  bool converged = false;
};

std::vector<bool> free_mask(const Vector& x, const Vector& g, const Box& box,
                            double eps) {
  std::vector<bool> free(x.size(), true);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if ((x[i] - box.lower[i] <= eps && g[i] > 0.0) ||
        (box.upper[i] - x[i] <= eps && g[i] < 0.0)) {
      free[i] = false;
    }
  }
  return free;
}

Vector structured_direction(const Point& pt, const Matrix& model,
                            const std::vector<bool>& free, double rho,
                            int num_equalities, InnerState& state) {
  std::vector<Eigen::Index> idx;
  for (std::size_t i = 0; i < free.size(); ++i) {
    if (free[i]) idx.push_back(static_cast<Eigen::Index>(i));
  }
  Vector d = Vector::Zero(pt.x.size());
  if (idx.empty()) return d;
  const auto nf = static_cast<Eigen::Index>(idx.size());
  Matrix H(nf, nf);
  Vector g(nf);
  for (Eigen::Index a = 0; a < nf; ++a) {
    g[a] = pt.grad_phi[idx[a]];
    for (Eigen::Index b = 0; b < nf; ++b) H(a, b) = model(idx[a], idx[b]);
  }
  if (num_equalities > 0) {
    Matrix jf(pt.jac.rows(), nf);
    for (Eigen::Index a = 0; a < nf; ++a) jf.col(a) = pt.jac.col(idx[a]);
    H.noalias() += rho * jf.transpose() * jf;
  }
  const double diag_scale = std::max(1e-12, H.diagonal().cwiseAbs().maxCoeff());
  state.damping_floor = 1e-10 * diag_scale;
  double shift = state.damping;
  for (int attempt = 0; attempt < 40; ++attempt) {
    Matrix Hs = H;
    Hs.diagonal().array() += shift;
    Eigen::LLT<Matrix> llt(Hs);
    if (llt.info() == Eigen::Success) {
      const Vector df = -llt.solve(g);
      if (df.allFinite()) {
        for (Eigen::Index a = 0; a < nf; ++a) d[idx[a]] = df[a];
        state.damping = shift;
        return d;
      }
    }
    shift = std::max(state.damping_floor, shift * 10.0);
  }
  for (Eigen::Index a = 0; a < nf; ++a) d[idx[a]] = -g[a];
  return d;
}

Vector lbfgs_direction(const Point& pt, const InnerState& state,
                       const std::vector<bool>& free) {
  Vector mask = Vector::Zero(pt.x.size());
  for (std::size_t i = 0; i < free.size(); ++i) mask[i] = free[i] ? 1.0 : 0.0;
  Vector q = pt.grad_phi.cwiseProduct(mask);
  const auto m = state.pairs.size();
  std::vector<double> alpha(m);
  std::vector<double> rho(m);
  for (std::size_t j = m; j-- > 0;) {
    const Vector s = state.pairs[j].first.cwiseProduct(mask);
    const Vector y = state.pairs[j].second.cwiseProduct(mask);
    const double sy = s.dot(y);
    rho[j] = sy > 0.0 ? 1.0 / sy : 0.0;
    alpha[j] = rho[j] * s.dot(q);
    q -= alpha[j] * y;
  }
  double gamma = 1.0;
  if (m > 0) {
    const Vector s = state.pairs.back().first.cwiseProduct(mask);
    const Vector y = state.pairs.back().second.cwiseProduct(mask);
    const double yy = y.squaredNorm();
    if (yy > 0.0 && s.dot(y) > 0.0) gamma = s.dot(y) / yy;
  }
  Vector r = gamma * q;
  for (std::size_t j = 0; j < m; ++j) {
    const Vector s = state.pairs[j].first.cwiseProduct(mask);
    const Vector y = state.pairs[j].second.cwiseProduct(mask);
    const double beta = rho[j] * y.dot(r);
    r += (alpha[j] - beta) * s;
  }
  return -r;
}

void damped_bfgs_update(Matrix& B, bool& scaled, const Vector& s, Vector y) {
  const double ss = s.squaredNorm();
  if (ss == 0.0) return;
  if (!scaled) {
    const double sy = s.dot(y);
    const double yy = y.squaredNorm();
    double gamma = sy > 0.0 ? yy / sy : 1.0;
    gamma = std::clamp(gamma, 1e-6, 1e6);
    B = gamma * Matrix::Identity(B.rows(), B.cols());
    scaled = true;
  }
  const Vector Bs = B * s;
  const double sBs = s.dot(Bs);
  if (!(sBs > 1e-300)) return;
  double sy = s.dot(y);
  if (sy < 0.2 * sBs) {
    const double theta = 0.8 * sBs / (sBs - sy);
    y = theta * y + (1.0 - theta) * Bs;
    sy = s.dot(y);
  }
  if (!(sy > 0.0) || !y.allFinite()) return;
  B.noalias() += (y * y.transpose()) / sy - (Bs * Bs.transpose()) / sBs;
  B = 0.5 * (B + B.transpose());
}

InnerResult minimize_inner(const Problem& problem, const Box& box,
                           const AugmentedLagrangian& al, Vector x, double tol,
                           InnerState& state, const Options& options) {
  InnerResult out;
  Point pt = al.value(x);
  if (!std::isfinite(pt.phi)) {
    out.point = pt;
    out.stalled = true;
    return out;
  }
  al.add_gradient(pt);
  int failures = 0;
  double best_pg = kInf;
  double previous_phi = kInf;
  int flat = 0;

  for (int iter = 0; iter < options.max_inner; ++iter) {
    const double pg = projected_step_norm(pt.grad_phi, pt.x, box);
    if (pg <= tol) {
      out.converged = true;
      break;
    }
    // Stop once neither phi nor the gradient moves above rounding level.
    const bool phi_moved =
        previous_phi - pt.phi > 1e-12 * std::max(1.0, std::abs(pt.phi));
    if (pg < 0.5 * best_pg || phi_moved) {
      best_pg = std::min(best_pg, pg);
      flat = 0;
    } else if (++flat >= 10) {
      out.converged = true;
      break;
    }
    previous_phi = pt.phi;

    const double eps = std::min(1e-6, pg);
    const auto free = free_mask(pt.x, pt.grad_phi, box, eps);
    Vector d;
    const bool steepest = failures > 0;
    if (steepest) {
      d = -projected(pt.grad_phi, pt.x, box);
      d /= std::max(1.0, d.lpNorm<Eigen::Infinity>());
    } else if (options.inner == InnerMethod::kLbfgs) {
      d = lbfgs_direction(pt, state, free);
    } else {
      const Matrix& model =
          problem.lagrangian_hessian
              ? Matrix(problem.lagrangian_hessian(
                    pt.x, al.lambda() + al.rho() * pt.c))
              : state.B;
      d = structured_direction(pt, model, free, al.rho(), problem.num_equalities,
                               state);
    }
    // Active variables are moved by the projected gradient step.
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      if (!free[i]) d[i] = -pt.grad_phi[i];
    }

    double alpha = 1.0;
    bool accepted = false;
    Point trial;
    for (int ls = 0; ls < 50; ++ls, alpha *= 0.5) {
      const Vector xt = box.project(pt.x + alpha * d);
      const double slope = pt.grad_phi.dot(xt - pt.x);
      if (!(slope < 0.0)) {
        if ((xt - pt.x).lpNorm<Eigen::Infinity>() == 0.0) break;
        continue;
      }
      trial = al.value(xt);
      if (!std::isfinite(trial.phi)) continue;
      if (trial.phi <= pt.phi + kArmijo * slope) {
        accepted = true;
        break;
      }
      // Below rounding level of phi the decrease cannot be measured; accept
      // the step if it reduces the projected gradient instead.
      const double noise = 64.0 * kEps * std::max(1.0, std::abs(pt.phi));
      if (-slope <= noise && trial.phi <= pt.phi + noise) {
        al.add_gradient(trial);
        if (projected_step_norm(trial.grad_phi, trial.x, box) < pg) {
          accepted = true;
          break;
        }
        trial.grad_phi.resize(0);
      }
    }
    ++out.iterations;
    if (!accepted) {
      if (steepest) {
        out.stalled = true;
        break;
      }
      // Drop curvature information and retry with a gradient step.
      ++failures;
      state.B_scaled = false;
      state.B.setIdentity();
      state.pairs.clear();
      continue;
    }
    failures = 0;
    if (alpha == 1.0) {
      state.damping = state.damping > state.damping_floor ? 0.1 * state.damping : 0.0;
    } else if (alpha < 0.25) {
      state.damping = std::max(state.damping_floor, 10.0 * state.damping);
    }
    if (trial.grad_phi.size() == 0) al.add_gradient(trial);

    const Vector s = trial.x - pt.x;
    if (options.inner == InnerMethod::kLbfgs) {
      const Vector y = trial.grad_phi - pt.grad_phi;
      if (s.dot(y) > 1e-12 * s.norm() * y.norm()) {
        state.pairs.emplace_back(s, y);
        if (static_cast<int>(state.pairs.size()) > options.lbfgs_memory) {
          state.pairs.pop_front();
        }
      }
    } else if (!problem.lagrangian_hessian) {
      const Vector mult = al.lambda() + al.rho() * trial.c;
      const Vector y =
          al.lagrangian_gradient(trial, mult) - al.lagrangian_gradient(pt, mult);
      damped_bfgs_update(state.B, state.B_scaled, s, y);
    }
    pt = std::move(trial);
  }
  out.point = std::move(pt);
  return out;
}

// First-order multiplier estimate: argmin |grad f + J^T lambda| over the
// variables that are not held at a bound.
Vector least_squares_multipliers(const Point& pt, const Box& box) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < pt.x.size(); ++i) {
    if (pt.x[i] > box.lower[i] && pt.x[i] < box.upper[i]) idx.push_back(i);
  }
  const auto nf = static_cast<Eigen::Index>(idx.size());
  Matrix jt(nf, pt.jac.rows());
  Vector g(nf);
  for (Eigen::Index a = 0; a < nf; ++a) {
    jt.row(a) = pt.jac.col(idx[a]).transpose();
    g[a] = pt.grad_f[idx[a]];
  }
  return -jt.colPivHouseholderQr().solve(g);
}

std::string format_line(const char* fmt, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

}  // namespace

std::string to_string(Status s) {
  switch (s) {
    case Status::kOptimal:
      return "optimal";
    case Status::kMaxIter:
      return "max_iter";
    case Status::kStalled:
      return "stalled";
  }
  return "unknown";
}

Vector evaluate_gradient(const Problem& problem, const Vector& x) {
  if (problem.gradient) return problem.gradient(x);
  const double f0 = problem.objective(x);
  Vector g(x.size());
  Vector xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1.5e-8 * std::max(1.0, std::abs(x[i]));
    xp[i] = x[i] + h;
    g[i] = (problem.objective(xp) - f0) / h;
    xp[i] = x[i];
  }
  return g;
}

Matrix evaluate_jacobian(const Problem& problem, const Vector& x) {
  if (problem.num_equalities == 0) return Matrix(0, x.size());
  if (problem.jacobian) return problem.jacobian(x);
  const Vector c0 = problem.constraints(x);
  Matrix jac(c0.size(), x.size());
  Vector xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1.5e-8 * std::max(1.0, std::abs(x[i]));
    xp[i] = x[i] + h;
    jac.col(i) = (problem.constraints(xp) - c0) / h;
    xp[i] = x[i];
  }
  return jac;
}

KktReport kkt_check(const Problem& problem, const Vector& x,
                    const Vector& multipliers) {
  const Box box = make_box(problem);
  KktReport r;
  Vector grad = evaluate_gradient(problem, x);
  const Vector c = constraints_of(problem, x);
  if (problem.num_equalities > 0) {
    grad += evaluate_jacobian(problem, x).transpose() * multipliers;
    r.max_violation = c.lpNorm<Eigen::Infinity>();
  }
  r.stationarity_norm = projected(grad, x, box).lpNorm<Eigen::Infinity>();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    r.max_violation = std::max(
        {r.max_violation, box.lower[i] - x[i], x[i] - box.upper[i]});
    // Implied bound multipliers: z_lo = max(g, 0), z_up = max(-g, 0).
    if (std::isfinite(box.lower[i])) {
      r.complementarity_max = std::max(
          r.complementarity_max, std::max(grad[i], 0.0) * std::abs(x[i] - box.lower[i]));
    }
    if (std::isfinite(box.upper[i])) {
      r.complementarity_max = std::max(
          r.complementarity_max, std::max(-grad[i], 0.0) * std::abs(box.upper[i] - x[i]));
    }
  }
  return r;
}

Solution solve(const Problem& problem, const Vector& x0, const Options& options) {
  const auto clock_start = std::chrono::steady_clock::now();
  if (x0.size() != problem.dimension) {
    throw Error("nlp: initial point has the wrong dimension");
  }
  const Box box = make_box(problem);
  Vector x = box.project(x0);
  if (!std::isfinite(problem.objective(x))) {
    throw Error("nlp: objective is not finite at the initial point");
  }

  Vector lambda = Vector::Zero(problem.num_equalities);
  double rho = options.penalty_init;
  double inner_tol = std::max(0.5 * options.stationarity_tol, 1e-2);
  double previous_violation = kInf;
  int stalled_rounds = 0;

  InnerState state;
  state.B = Matrix::Identity(problem.dimension, problem.dimension);

  Solution sol;
  sol.status = Status::kMaxIter;
  double best_score = kInf;

  for (int outer = 1; outer <= options.max_outer; ++outer) {
    const AugmentedLagrangian al(problem, lambda, rho);
    InnerResult inner = minimize_inner(problem, box, al, x, inner_tol, state, options);
    sol.inner_iterations_total += inner.iterations;
    sol.outer_iterations = outer;
    if (!std::isfinite(inner.point.phi)) {
      sol.status = Status::kStalled;
      if (sol.x.size() == 0) {
        sol.x = x;
        sol.multipliers = lambda;
        sol.objective = problem.objective(x);
        sol.max_violation = kInf;
        sol.stationarity_norm = kInf;
      }
      break;
    }
    x = inner.point.x;
    const Vector& c = inner.point.c;
    const double violation = problem.num_equalities ? c.lpNorm<Eigen::Infinity>() : 0.0;
    if (problem.num_equalities) lambda += rho * c;
    // With the updated multipliers, grad f + J^T lambda equals the inner
    // gradient, so stationarity is measured at no extra cost.
    double stationarity =
        projected(al.lagrangian_gradient(inner.point, lambda), x, box)
            .lpNorm<Eigen::Infinity>();
    // Near feasibility the penalty term rho*c carries rounding noise that
    // lies in the range of J^T; a least-squares estimate removes it.
    if (problem.num_equalities && violation <= options.constraint_tol) {
      const Vector estimate = least_squares_multipliers(inner.point, box);
      const double refined =
          projected(al.lagrangian_gradient(inner.point, estimate), x, box)
              .lpNorm<Eigen::Infinity>();
      if (estimate.allFinite() && refined < stationarity) {
        stationarity = refined;
        lambda = estimate;
      }
    }
    sol.violation_history.push_back(violation);
    sol.objective_history.push_back(inner.point.f);

    if (options.log) {
      options.log(format_line("outer %3d  f %.10e  |c| %.3e  rho %.1e  inner %d",
                              outer, inner.point.f, violation, rho,
                              inner.iterations));
      if (outer > 1 && violation > previous_violation) {
        options.log(format_line("warning: |c| rose from %.3e to %.3e",
                                previous_violation, violation));
      }
    }

    const double score = std::max(violation / options.constraint_tol,
                                  stationarity / options.stationarity_tol);
    if (score <= best_score) {
      best_score = score;
      sol.x = x;
      sol.multipliers = lambda;
      sol.objective = inner.point.f;
      sol.max_violation = violation;
      sol.stationarity_norm = stationarity;
    }
    if (violation <= options.constraint_tol &&
        stationarity <= options.stationarity_tol) {
      sol.status = Status::kOptimal;
      break;
    }

    stalled_rounds = inner.stalled ? stalled_rounds + 1 : 0;
    if (stalled_rounds >= 3) {
      sol.status = Status::kStalled;
      break;
    }
    // An unfinished inner solve says nothing about the penalty.
    if (inner.converged && violation > options.constraint_tol &&
        violation > 0.25 * previous_violation) {
      rho = std::min(rho * options.penalty_growth, options.penalty_max);
    }
    previous_violation = violation;
    inner_tol = std::max(0.5 * options.stationarity_tol, 0.1 * inner_tol);
  }

  sol.runtime_seconds = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - clock_start)
                            .count();
  return sol;
}

}  // namespace trajopt::nlp
