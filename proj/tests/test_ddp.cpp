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
#include <memory>
#include <random>

#include "trajopt/core.hpp"
#include "trajopt/ddp.hpp"
#include "trajopt/dynamics.hpp"

namespace trajopt::ddp {
namespace {

Matrix random_matrix(std::mt19937& rng, int r, int c, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix a(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) a(i, j) = u(rng);
  return a;
}

Matrix random_spd(std::mt19937& rng, int n, double shift) {
  const Matrix a = random_matrix(rng, n, n);
  return a * a.transpose() + shift * Matrix::Identity(n, n);
}

TEST(Linearize, ZeroJacobianGivesIdentity) {
  const LinearPlant plant(Matrix::Zero(3, 3), Matrix::Zero(3, 2));
  const LinearizedStep s = linearize_step(plant, Vector::Ones(3), Vector::Ones(2), 0.0, 0.1);
  EXPECT_EQ(s.Phi, Matrix::Identity(3, 3));
  EXPECT_EQ(s.B, Matrix::Zero(3, 2));
}

TEST(Linearize, ScalarLinearPlant) {
  const double a = -0.7, b = 2.5, dt = 0.05;
  const LinearPlant plant(Matrix::Constant(1, 1, a), Matrix::Constant(1, 1, b));
  const LinearizedStep s = linearize_step(plant, Vector::Ones(1), Vector::Ones(1), 0.0, dt);
  EXPECT_DOUBLE_EQ(s.Phi(0, 0), 1.0 + a * dt);
  EXPECT_DOUBLE_EQ(s.B(0, 0), b * dt);
}

TEST(Linearize, ZeroStepIsIdentity) {
  const CartPole plant;
  const LinearizedStep s =
      linearize_step(plant, Vector::Constant(4, 0.3), Vector::Ones(1), 0.0, 0.0);
  EXPECT_EQ(s.Phi, Matrix::Identity(4, 4));
  EXPECT_EQ(s.B, Matrix::Zero(4, 1));
}

TEST(BackwardPass, ScalarLqrStepByHand) {
  LinearizedStep dyn{Matrix::Ones(1, 1), Matrix::Ones(1, 1)};
  CostExpansion c;
  c.qvec = Vector::Zero(1);
  c.rvec = Vector::Zero(1);
  c.Q = Matrix::Zero(1, 1);
  c.R = Matrix::Ones(1, 1);
  c.N = Matrix::Zero(1, 1);
  c.M = Matrix::Zero(1, 1);
  ValueExpansion terminal{0.0, Vector::Zero(1), Matrix::Ones(1, 1)};
  const BackwardPassResult bp = backward_pass({dyn}, {c}, terminal, 0.0);
  ASSERT_TRUE(bp.ok());
  EXPECT_DOUBLE_EQ(bp.gains.H[0](0, 0), 2.0);
  EXPECT_DOUBLE_EQ(bp.gains.g[0](0), 0.0);
  EXPECT_DOUBLE_EQ(bp.gains.G[0](0, 0), 1.0);
  EXPECT_DOUBLE_EQ(bp.gains.l[0](0), 0.0);
  EXPECT_DOUBLE_EQ(bp.gains.L[0](0, 0), -0.5);
  // Vxx = 1 - 1/2: cost-to-go of x^2/2 + min_u (u^2/2 + (x+u)^2/2).
  EXPECT_DOUBLE_EQ(bp.values[0].Vxx(0, 0), 0.5);
}

TEST(BackwardPass, ZeroCostGivesZeroGains) {
  const LinearPlant plant(Matrix::Identity(2, 2), Matrix::Ones(2, 1));
  QuadraticCost::Weights w{Matrix::Zero(2, 2), Matrix::Zero(1, 1), Matrix::Zero(2, 2),
                           {},                 {},                 {},
                           {}};
  const QuadraticCost cost(w);
  const Trajectory nominal =
      rollout(plant, Vector::Ones(2), std::vector<Vector>(10, Vector::Zero(1)), 0.1);
  const BackwardPassResult bp = backward_pass(plant, cost, nominal, 1e-6);
  ASSERT_TRUE(bp.ok());
  for (int k = 0; k < 10; ++k) {
    EXPECT_EQ(bp.gains.l[k].norm(), 0.0);
    EXPECT_EQ(bp.gains.L[k].norm(), 0.0);
    EXPECT_EQ(bp.values[k].V, 0.0);
  }
}

TEST(BackwardPass, FlagsIndefiniteHessian) {
  LinearizedStep dyn{Matrix::Ones(1, 1), Matrix::Ones(1, 1)};
  CostExpansion c;
  c.qvec = Vector::Zero(1);
  c.rvec = Vector::Ones(1);
  c.Q = Matrix::Zero(1, 1);
  c.R = Matrix::Constant(1, 1, -3.0);
  c.N = Matrix::Zero(1, 1);
  c.M = Matrix::Zero(1, 1);
  ValueExpansion terminal{0.0, Vector::Zero(1), Matrix::Ones(1, 1)};
  const BackwardPassResult bp = backward_pass({dyn, dyn}, {c, c}, terminal, 0.0);
  ASSERT_FALSE(bp.ok());
  EXPECT_EQ(*bp.indefinite_at, 1);
  EXPECT_TRUE(backward_pass({dyn, dyn}, {c, c}, terminal, 10.0).ok());
}

// Linear plant xdot = A x + B u with L = x'Qx + u'Ru and phi = x'Wx.
struct LqProblem {
  Matrix A, B, Q, R, W;
  Vector x0;
  double horizon = 1.0;
  int steps = 50;

  std::shared_ptr<LinearPlant> plant() const { return std::make_shared<LinearPlant>(A, B); }
  std::shared_ptr<QuadraticCost> cost() const {
    return std::make_shared<QuadraticCost>(QuadraticCost::Weights{Q, R, W, {}, {}, {}, {}});
  }
  BoundarySpec boundary() const {
    BoundarySpec b;
    b.x0 = x0;
    b.x_target = Vector::Zero(x0.size());
    b.tf = horizon;
    return b;
  }
};

LqProblem random_lq(std::mt19937& rng, int n, int m) {
  LqProblem p;
  p.A = random_matrix(rng, n, n);
  p.B = random_matrix(rng, n, m);
  p.Q = random_spd(rng, n, 0.1);
  p.R = random_spd(rng, m, 0.5);
  p.W = random_spd(rng, n, 1.0);
  p.x0 = random_matrix(rng, n, 1, 2.0);
  return p;
}

// Discrete Riccati recursion for V_k(x) = x'P_k x on the Euler grid.
struct RiccatiSolution {
  std::vector<Matrix> P;  // 0..N
  std::vector<Matrix> K;  // u_k = -K_k x_k
};

RiccatiSolution riccati(const LqProblem& p) {
  const double dt = p.horizon / p.steps;
  const int n = static_cast<int>(p.A.rows());
  const Matrix ad = Matrix::Identity(n, n) + p.A * dt;
  const Matrix bd = p.B * dt;
  RiccatiSolution s;
  s.P.assign(p.steps + 1, Matrix());
  s.K.assign(p.steps, Matrix());
  s.P[p.steps] = p.W;
  for (int k = p.steps - 1; k >= 0; --k) {
    const Matrix& next = s.P[k + 1];
    const Matrix gain =
        (p.R * dt + bd.transpose() * next * bd).ldlt().solve(bd.transpose() * next * ad);
    s.K[k] = gain;
    s.P[k] = p.Q * dt + ad.transpose() * next * (ad - bd * gain);
    s.P[k] = 0.5 * (s.P[k] + s.P[k].transpose());
  }
  return s;
}

TEST(BackwardPass, MatchesDiscreteRiccati) {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    const LqProblem p = random_lq(rng, 4, 2);
    const RiccatiSolution oracle = riccati(p);
    const double dt = p.horizon / p.steps;
    // Arbitrary nominal: random controls rolled out from x0.
    std::vector<Vector> controls;
    for (int k = 0; k < p.steps; ++k) controls.push_back(random_matrix(rng, 2, 1));
    const Trajectory nominal = rollout(*p.plant(), p.x0, controls, dt);
    const BackwardPassResult bp = backward_pass(*p.plant(), *p.cost(), nominal, 0.0);
    ASSERT_TRUE(bp.ok());
    for (int k = 0; k < p.steps; ++k) {
      const Matrix& xk = nominal.states[k];
      EXPECT_LT((bp.gains.L[k] + oracle.K[k]).cwiseAbs().maxCoeff(), 1e-8) << k;
      const Vector l_expected = -oracle.K[k] * xk - controls[k];
      EXPECT_LT((bp.gains.l[k] - l_expected).cwiseAbs().maxCoeff(), 1e-8) << k;
      EXPECT_LT((bp.values[k].Vxx - 2.0 * oracle.P[k]).cwiseAbs().maxCoeff(), 1e-8) << k;
    }
    const double optimal = p.x0.dot(oracle.P[0] * p.x0);
    EXPECT_NEAR(bp.values[0].V, optimal, 1e-8 * std::max(1.0, optimal));
  }
}

TEST(ForwardPass, FullStepAttainsLqrCost) {
  std::mt19937 rng(22);
  const LqProblem p = random_lq(rng, 4, 2);
  const RiccatiSolution oracle = riccati(p);
  const double dt = p.horizon / p.steps;
  const Trajectory nominal =
      rollout(*p.plant(), p.x0, std::vector<Vector>(p.steps, Vector::Zero(2)), dt);
  const BackwardPassResult bp = backward_pass(*p.plant(), *p.cost(), nominal, 0.0);
  const auto fp = forward_pass(*p.plant(), *p.cost(), nominal, bp.gains, 1.0);
  ASSERT_TRUE(fp.has_value());
  const double optimal = p.x0.dot(oracle.P[0] * p.x0);
  EXPECT_NEAR(fp->cost, optimal, 1e-8 * std::max(1.0, optimal));
  EXPECT_NEAR(fp->cost, trajectory_cost(*p.cost(), fp->trajectory), 1e-12 * optimal);
  // The recursion's value prediction equals the realized rollout cost.
  EXPECT_NEAR(bp.values[0].V, fp->cost, 1e-8 * std::max(1.0, optimal));
}

TEST(ForwardPass, ZeroStepReproducesNominal) {
  const CartPole plant;
  const QuadraticCost cost(QuadraticCost::Weights{
      Matrix::Identity(4, 4), Matrix::Identity(1, 1), Matrix::Identity(4, 4), {}, {}, {}, {}});
  std::vector<Vector> controls;
  for (int k = 0; k < 40; ++k) controls.push_back(Vector::Constant(1, std::sin(0.2 * k)));
  const Trajectory nominal = rollout(plant, Vector::Zero(4), controls, 0.02);
  const BackwardPassResult bp = backward_pass(plant, cost, nominal, 1e-3);
  ASSERT_TRUE(bp.ok());
  const auto fp = forward_pass(plant, cost, nominal, bp.gains, 0.0);
  ASSERT_TRUE(fp.has_value());
  for (int k = 0; k <= 40; ++k) EXPECT_EQ(fp->trajectory.states[k], nominal.states[k]);
  EXPECT_EQ(fp->cost, trajectory_cost(cost, nominal));
}

TEST(ForwardPass, ZeroGainsReRollNominalControls) {
  const CartPole plant;
  const QuadraticCost cost(QuadraticCost::Weights{
      Matrix::Identity(4, 4), Matrix::Identity(1, 1), Matrix::Identity(4, 4), {}, {}, {}, {}});
  std::vector<Vector> controls(30, Vector::Constant(1, 2.0));
  const Trajectory nominal = rollout(plant, Vector::Zero(4), controls, 0.02);
  GainSchedule gains;
  gains.l.assign(30, Vector::Zero(1));
  gains.L.assign(30, Matrix::Zero(1, 4));
  const auto fp = forward_pass(plant, cost, nominal, gains, 1.0);
  ASSERT_TRUE(fp.has_value());
  EXPECT_EQ(fp->trajectory.states.back(), nominal.states.back());
}

TEST(ForwardPass, ClampsToControlBounds) {
  const LinearPlant plant(Matrix::Zero(1, 1), Matrix::Ones(1, 1));
  const QuadraticCost cost(QuadraticCost::Weights{
      Matrix::Zero(1, 1), Matrix::Ones(1, 1), Matrix::Ones(1, 1), {}, {}, {}, {}});
  const Trajectory nominal =
      rollout(plant, Vector::Zero(1), std::vector<Vector>(5, Vector::Zero(1)), 0.1);
  GainSchedule gains;
  gains.l.assign(5, Vector::Constant(1, 10.0));
  gains.L.assign(5, Matrix::Zero(1, 1));
  const Bounds box{Vector::Constant(1, -1.0), Vector::Constant(1, 1.0)};
  const auto fp = forward_pass(plant, cost, nominal, gains, 1.0, box);
  ASSERT_TRUE(fp.has_value());
  for (const Vector& u : fp->trajectory.controls) EXPECT_EQ(u[0], 1.0);
}

TEST(ForwardPass, DivergenceReturnsNullopt) {
  const LinearPlant plant(Matrix::Constant(1, 1, 1e200), Matrix::Ones(1, 1));
  const QuadraticCost cost(QuadraticCost::Weights{
      Matrix::Zero(1, 1), Matrix::Ones(1, 1), Matrix::Ones(1, 1), {}, {}, {}, {}});
  Trajectory nominal;
  nominal.dt = 1.0;
  for (int k = 0; k <= 4; ++k) {
    nominal.times.push_back(k);
    nominal.states.push_back(Vector::Zero(1));
  }
  nominal.controls.assign(4, Vector::Zero(1));
  GainSchedule gains;
  gains.l.assign(4, Vector::Ones(1));
  gains.L.assign(4, Matrix::Zero(1, 1));
  EXPECT_FALSE(forward_pass(plant, cost, nominal, gains, 1.0).has_value());
}

// Q(dx, du) for one step, written from the definitions without the gain
// formulas.
double q_function(const LinearizedStep& dyn, const CostExpansion& c, const ValueExpansion& next,
                  const Vector& dx, const Vector& du) {
  const Vector y = dyn.Phi * dx + dyn.B * du;
  return c.q0 + c.qvec.dot(dx) + c.rvec.dot(du) + 0.5 * dx.dot(c.Q * dx) +
         0.5 * du.dot(c.R * du) + 0.5 * du.dot(c.N * dx) + 0.5 * dx.dot(c.M * du) + next.V +
         next.Vx.dot(y) + 0.5 * y.dot(next.Vxx * y);
}

// Minimizes a smooth function by Newton steps on central-difference
// derivatives.
Vector numeric_minimize(const std::function<double(const Vector&)>& f, int m) {
  const double h = 1e-3;
  Vector u = Vector::Zero(m);
  for (int iter = 0; iter < 3; ++iter) {
    Vector grad(m);
    Matrix hess(m, m);
    for (int i = 0; i < m; ++i) {
      const Vector ei = h * Vector::Unit(m, i);
      grad[i] = (f(u + ei) - f(u - ei)) / (2 * h);
      for (int j = 0; j < m; ++j) {
        const Vector ej = h * Vector::Unit(m, j);
        hess(i, j) = (f(u + ei + ej) - f(u + ei - ej) - f(u - ei + ej) + f(u - ei - ej)) /
                     (4 * h * h);
      }
    }
    u -= hess.ldlt().solve(grad);
  }
  return u;
}

TEST(BackwardPass, StepMinimizesLocalModel) {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 3;
    const int m = 1 + (trial / 3) % 3;
    LinearizedStep dyn{Matrix::Identity(n, n) + random_matrix(rng, n, n, 0.3),
                       random_matrix(rng, n, m)};
    CostExpansion c;
    c.q0 = random_matrix(rng, 1, 1)(0, 0);
    c.qvec = random_matrix(rng, n, 1);
    c.rvec = random_matrix(rng, m, 1);
    c.Q = random_spd(rng, n, 0.1);
    c.R = random_spd(rng, m, 0.5);
    c.N = random_matrix(rng, m, n, 0.3);
    c.M = c.N.transpose();
    ValueExpansion next{random_matrix(rng, 1, 1)(0, 0), random_matrix(rng, n, 1),
                        random_spd(rng, n, 0.1)};
    const BackwardPassResult bp = backward_pass({dyn}, {c}, next, 0.0);
    ASSERT_TRUE(bp.ok());
    for (int probe = 0; probe < 3; ++probe) {
      const Vector dx = random_matrix(rng, n, 1);
      auto qf = [&](const Vector& du) { return q_function(dyn, c, next, dx, du); };
      const Vector best = numeric_minimize(qf, m);
      const Vector du = bp.gains.l[0] + bp.gains.L[0] * dx;
      EXPECT_LT((du - best).cwiseAbs().maxCoeff(), 1e-6) << "trial " << trial;
      const ValueExpansion& v = bp.values[0];
      const double predicted = v.V + v.Vx.dot(dx) + 0.5 * dx.dot(v.Vxx * dx);
      EXPECT_NEAR(predicted, qf(best), 1e-6 * std::max(1.0, std::abs(predicted)));
    }
  }
}

TEST(Solve, LinearQuadraticConvergesInTwoIterations) {
  std::mt19937 rng(24);
  const LqProblem p = random_lq(rng, 4, 2);
  const RiccatiSolution oracle = riccati(p);
  Options opt;
  opt.steps = p.steps;
  const Report r = solve(*p.plant(), *p.cost(), p.boundary(), opt);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.status, "converged");
  EXPECT_LE(r.iterations, 2);
  const double optimal = p.x0.dot(oracle.P[0] * p.x0);
  EXPECT_NEAR(r.final_cost, optimal, 1e-8 * std::max(1.0, optimal));
}

TEST(Solve, AcceptedCostsNeverIncrease) {
  const CartPole plant;
  QuadraticCost::Weights w;
  w.Q = Matrix::Zero(4, 4);
  w.R = 1e-2 * Matrix::Identity(1, 1);
  w.W_f = 1e4 * Matrix::Identity(4, 4);
  w.x_target = Vector::Zero(4);
  w.x_target[1] = M_PI;
  const QuadraticCost cost(w);
  BoundarySpec b;
  b.x0 = Vector::Zero(4);
  b.x_target = w.x_target;
  b.tf = 2.0;
  Options opt;
  opt.max_iters = 40;
  int trace_lines = 0;
  opt.trace = [&](const std::string&) { ++trace_lines; };
  const Report r = solve(plant, cost, b, opt);
  ASSERT_GE(r.cost_history.size(), 2u);
  for (size_t i = 1; i < r.cost_history.size(); ++i) {
    EXPECT_LE(r.cost_history[i], r.cost_history[i - 1]);
  }
  EXPECT_EQ(static_cast<size_t>(trace_lines), r.trials.size());
  size_t accepted = 0;
  for (const TrialRecord& t : r.trials) accepted += t.accepted;
  EXPECT_EQ(accepted + 1, r.cost_history.size());
  EXPECT_LE(r.iterations, 40);
  EXPECT_EQ(r.trajectory.steps(), opt.steps);
  EXPECT_EQ(r.final_cost, r.cost_history.back());
}

TEST(Solve, MaxIterationsIsNotAnError) {
  const CartPole plant;
  const QuadraticCost cost(QuadraticCost::Weights{
      Matrix::Zero(4, 4), 1e-2 * Matrix::Identity(1, 1), 1e4 * Matrix::Identity(4, 4),
      {}, {}, {}, Vector::Unit(4, 1) * M_PI});
  BoundarySpec b;
  b.x0 = Vector::Zero(4);
  b.x_target = Vector::Unit(4, 1) * M_PI;
  b.tf = 2.0;
  Options opt;
  opt.max_iters = 3;
  const Report r = solve(plant, cost, b, opt);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.status, "max_iter");
  EXPECT_EQ(r.iterations, 3);
}

TEST(Solve, RegularizesSingularControlHessian) {
  // R = 0 and a zero terminal weight leave H = 0 on the first pass.
  const LinearPlant plant(Matrix::Zero(1, 1), Matrix::Ones(1, 1));
  const QuadraticCost cost(QuadraticCost::Weights{
      Matrix::Ones(1, 1), Matrix::Zero(1, 1), Matrix::Zero(1, 1), {}, {}, {}, {}});
  BoundarySpec b;
  b.x0 = Vector::Ones(1);
  b.x_target = Vector::Zero(1);
  Options opt;
  opt.steps = 20;
  opt.max_iters = 20;
  const Report r = solve(plant, cost, b, opt);
  EXPECT_GE(r.regularization_events, 1);
  EXPECT_LT(r.final_cost, r.cost_history.front());
}

TEST(Solve, PersistentIndefinitenessThrows) {
  const LinearPlant plant(Matrix::Zero(1, 1), Matrix::Ones(1, 1));
  const QuadraticCost cost(QuadraticCost::Weights{
      Matrix::Zero(1, 1), Matrix::Constant(1, 1, -1e9), Matrix::Zero(1, 1), {}, {}, {}, {}});
  BoundarySpec b;
  b.x0 = Vector::Ones(1);
  b.x_target = Vector::Zero(1);
  Options opt;
  opt.steps = 5;
  EXPECT_THROW(solve(plant, cost, b, opt), Error);
}

TEST(Solve, RejectsMismatchedWarmStart) {
  const LinearPlant plant(Matrix::Zero(1, 1), Matrix::Ones(1, 1));
  const QuadraticCost cost(QuadraticCost::Weights{
      Matrix::Ones(1, 1), Matrix::Ones(1, 1), Matrix::Ones(1, 1), {}, {}, {}, {}});
  BoundarySpec b;
  b.x0 = Vector::Ones(1);
  b.x_target = Vector::Zero(1);
  Options opt;
  opt.steps = 5;
  opt.initial_controls.assign(4, Vector::Zero(1));
  EXPECT_THROW(solve(plant, cost, b, opt), Error);
}

TEST(Solve, HalvingStepChangesCostAtFirstOrder) {
  // Double integrator, minimum effort with a soft terminal weight.
  Matrix a(2, 2), bm(2, 1);
  a << 0, 1, 0, 0;
  bm << 0, 1;
  LqProblem p{a, bm, Matrix::Zero(2, 2), Matrix::Identity(1, 1), 10.0 * Matrix::Identity(2, 2),
              Vector::Zero(2), 1.0, 0};
  p.x0 << 1.0, 0.0;
  std::vector<double> costs;
  for (int steps : {200, 400, 800}) {
    p.steps = steps;
    Options opt;
    opt.steps = steps;
    costs.push_back(solve(*p.plant(), *p.cost(), p.boundary(), opt).final_cost);
  }
  const double ratio = (costs[0] - costs[1]) / (costs[1] - costs[2]);
  EXPECT_GT(ratio, 1.8);
  EXPECT_LT(ratio, 2.2);
}

}  // namespace
}  // namespace trajopt::ddp
