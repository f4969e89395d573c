/*
 Copyright 2026 citopt contributors

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

#include <doctest.h>

#include <cmath>

#include "ilqr.hpp"
#include "support.hpp"

using namespace citopt;
using test::dense_lqr_solve;
using test::DenseLqr;
using test::LinearPlant;
using test::lqr_setup;
using test::LqrSetup;
using test::random_vec;
using test::split_controls;

namespace {

// Frictionless pendulum, torque-controlled, semi-implicit Euler. Smooth
// and genuinely nonlinear, so the solver needs several iterations.
class PendulumPlant final : public DynamicsModel {
 public:
  int state_dim() const override { return 2; }
  int control_dim() const override { return 1; }
  Vec step(const Vec& x, const Vec& u) const override {
    const double dt = 0.05;
    Vec next(2);
    next(1) = x(1) + dt * (-std::sin(x(0)) + u(0));
    next(0) = x(0) + dt * next(1);
    return next;
  }
};

}  // namespace

TEST_CASE("backward pass feedforward vanishes at the optimum") {
  const LqrSetup s = lqr_setup(20);
  const DenseLqr opt = dense_lqr_solve(s);
  const Trajectory traj = rollout(s.problem, split_controls(opt.u_star, 1, 20));
  const LinearDynamics lin = linearize(s.problem, traj);
  const BackwardPass bp = ilqr_backward(s.problem, traj, lin, 0.0);
  REQUIRE(bp.ok);
  for (const Vec& k : bp.k) CHECK(k.lpNorm<Eigen::Infinity>() < 1e-6);
  // No descent left to predict.
  CHECK(std::abs(bp.d1) < 1e-10);
}

TEST_CASE("one backward pass solves a linear-quadratic problem exactly") {
  const LqrSetup s = lqr_setup(20);
  const DenseLqr opt = dense_lqr_solve(s);

  std::mt19937 rng(5);
  const Vec u0 = random_vec(rng, 20, -1.0, 1.0);
  const Trajectory nominal = rollout(s.problem, split_controls(u0, 1, 20));
  const LinearDynamics lin = linearize(s.problem, nominal);
  const BackwardPass bp = ilqr_backward(s.problem, nominal, lin, 0.0);
  REQUIRE(bp.ok);

  // Closed-loop rollout at full step, no clamping needed.
  Trajectory out;
  out.x.push_back(s.problem.x0);
  for (int t = 0; t < 20; ++t) {
    const Vec du = bp.k[t] + bp.kk[t] * (out.x.back() - nominal.x[t]);
    out.u.push_back(nominal.u[t] + du);
    out.x.push_back(s.problem.model->step(out.x.back(), out.u.back()));
  }
  const double cost = total_cost(s.problem, out, true);
  CHECK(cost == doctest::Approx(opt.cost).epsilon(1e-9));
  for (int t = 0; t < 20; ++t)
    CHECK(out.u[t](0) == doctest::Approx(opt.u_star(t)).epsilon(1e-6));

  // The quadratic model is exact here, so the predicted reduction matches
  // the achieved one.
  const double before = total_cost(s.problem, nominal, true);
  CHECK(before - cost == doctest::Approx(-(bp.d1 + bp.d2)).epsilon(1e-8));
}

TEST_CASE("solver converges on a linear-quadratic problem immediately") {
  const LqrSetup s = lqr_setup(20);
  const DenseLqr opt = dense_lqr_solve(s);

  IlqrParams params;
  params.cost_tol = 1e-10;
  const std::vector<Vec> u_init(20, Vec::Zero(1));
  const SolverReport rep = solve_ilqr(s.problem, params, u_init);
  CHECK(rep.status == SolveStatus::kConverged);
  CHECK(rep.accepted_iterations <= 3);
  CHECK(rep.final_cost == doctest::Approx(opt.cost).epsilon(1e-8));
  CHECK(static_cast<int>(rep.trajectory.u.size()) == 20);
}

TEST_CASE("control limits hold exactly and clamped rows lose feedback") {
  LqrSetup s = lqr_setup(20);
  s.problem.goal << 4.0, 0.0;  // far enough that the limit saturates
  s.problem.u_min = Vec::Constant(1, -0.4);
  s.problem.u_max = Vec::Constant(1, 0.4);

  IlqrParams params;
  const std::vector<Vec> u_init(20, Vec::Zero(1));
  const SolverReport rep = solve_ilqr(s.problem, params, u_init);

  bool saturated = false;
  for (const Vec& u : rep.trajectory.u) {
    CHECK(u(0) >= -0.4);
    CHECK(u(0) <= 0.4);
    if (u(0) == 0.4 || u(0) == -0.4) saturated = true;
  }
  CHECK(saturated);

  // At the solution, rebuild the gains: clamped steps must carry zero
  // feedback rows, free steps a nonzero one.
  const LinearDynamics lin = linearize(s.problem, rep.trajectory);
  const BackwardPass bp = ilqr_backward(s.problem, rep.trajectory, lin, 1e-6);
  REQUIRE(bp.ok);
  int clamped_rows = 0;
  for (int t = 0; t < 20; ++t) {
    const double u_new = rep.trajectory.u[t](0) + bp.k[t](0);
    CHECK(u_new >= -0.4 - 1e-12);
    CHECK(u_new <= 0.4 + 1e-12);
    if (u_new == 0.4 || u_new == -0.4) {
      CHECK(bp.kk[t].row(0).lpNorm<Eigen::Infinity>() == 0.0);
      ++clamped_rows;
    }
  }
  CHECK(clamped_rows > 0);
}

TEST_CASE("accepted iterations never increase the cost") {
  PendulumPlant plant;
  Problem p;
  p.model = &plant;
  p.horizon = 40;
  p.x0 = Vec::Zero(2);
  p.finish_defaults();
  p.goal << M_PI, 0.0;
  p.final_weight << 30.0, 2.0;
  p.control_weight << 0.05;
  p.u_min = Vec::Constant(1, -2.5);
  p.u_max = Vec::Constant(1, 2.5);

  IlqrParams params;
  params.max_iterations = 60;
  const std::vector<Vec> u_init(40, Vec::Constant(1, 0.1));
  const SolverReport rep = solve_ilqr(p, params, u_init);

  REQUIRE(!rep.iterations.empty());
  double last = rep.initial_cost;
  int accepted = 0;
  for (const IterationRecord& rec : rep.iterations) {
    if (!rec.accepted) continue;
    CHECK(rec.cost <= last + 1e-12);
    last = rec.cost;
    ++accepted;
  }
  CHECK(accepted == rep.accepted_iterations);
  CHECK(rep.final_cost == doctest::Approx(last).epsilon(1e-12));
  CHECK(rep.final_cost < rep.initial_cost);
  for (const Vec& u : rep.trajectory.u) {
    CHECK(u(0) >= -2.5);
    CHECK(u(0) <= 2.5);
  }
}

TEST_CASE("zero cost weights leave the backward pass degenerate") {
  // With no cost at all, every control Hessian is singular; the backward
  // pass must report that instead of inventing gains.
  const LqrSetup base = lqr_setup(10);
  Problem p = base.problem;
  p.final_weight.setZero();
  p.state_weight.setZero();
  p.control_weight.setZero();

  const std::vector<Vec> u_init(10, Vec::Constant(1, 0.3));
  const Trajectory traj = rollout(p, u_init);
  const LinearDynamics lin = linearize(p, traj);
  CHECK(!ilqr_backward(p, traj, lin, 0.0).ok);
}

TEST_CASE("a pure control penalty drives the feedforward to cancel u") {
  // Only the control term is active: the optimal policy is u = 0, so the
  // feedforward is exactly -u and there is nothing to feed back.
  const LqrSetup base = lqr_setup(10);
  Problem p = base.problem;
  p.final_weight.setZero();
  p.state_weight.setZero();

  const std::vector<Vec> u_init(10, Vec::Constant(1, 0.3));
  const Trajectory traj = rollout(p, u_init);
  const LinearDynamics lin = linearize(p, traj);
  const BackwardPass bp = ilqr_backward(p, traj, lin, 0.0);
  REQUIRE(bp.ok);
  for (int t = 0; t < 10; ++t) {
    CHECK(bp.k[t](0) == doctest::Approx(-0.3).epsilon(1e-12));
    CHECK(bp.kk[t].lpNorm<Eigen::Infinity>() == 0.0);
  }
}

TEST_CASE("ilqr parameters are validated") {
  IlqrParams params;
  params.cost_tol = 0.0;
  CHECK_THROWS_AS(params.validate(), InvalidArgument);
  params = IlqrParams{};
  params.accept_ratio = 1.5;
  CHECK_THROWS_AS(params.validate(), InvalidArgument);
  params = IlqrParams{};
  params.reg_init = 1e-12;  // below reg_min
  CHECK_THROWS_AS(params.validate(), InvalidArgument);
}
