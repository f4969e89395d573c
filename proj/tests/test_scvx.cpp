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

#include "scvx.hpp"
#include "support.hpp"

using namespace citopt;
using test::dense_lqr_solve;
using test::lqr_setup;
using test::LqrSetup;
using test::random_vec;

namespace {

struct BuiltSubproblem {
  Trajectory traj;
  LinearDynamics lin;
  ScvxSubproblem sub;
};

BuiltSubproblem build_at(const Problem& problem, const std::vector<Vec>& u_init,
                         double virtual_weight) {
  BuiltSubproblem b;
  b.traj = rollout(problem, u_init);
  b.lin = linearize(problem, b.traj);
  b.sub = build_subproblem(problem, b.traj, b.lin, virtual_weight);
  return b;
}

}  // namespace

TEST_CASE("subproblem objective at zero equals the rollout cost") {
  const LqrSetup s = lqr_setup(15);
  const auto b = build_at(s.problem, std::vector<Vec>(15, Vec::Constant(1, 0.2)), 1e3);
  CHECK(b.sub.objective_at(Vec::Zero(b.sub.size_z)) ==
        doctest::Approx(total_cost(s.problem, b.traj, true)).epsilon(1e-15));
}

TEST_CASE("subproblem objective is the exact cost of a perturbed trajectory") {
  // The objective terms are quadratic, so with zero virtual slacks the
  // subproblem model must reproduce the true cost of (X + dX, U + dU)
  // exactly, not just to second order.
  const LqrSetup s = lqr_setup(8);
  const auto b = build_at(s.problem, std::vector<Vec>(8, Vec::Constant(1, -0.1)), 1e3);

  std::mt19937 rng(3);
  Vec z = Vec::Zero(b.sub.size_z);
  Trajectory perturbed = b.traj;
  for (int i = 0; i <= 8; ++i) {
    const Vec dx = random_vec(rng, 2, -0.5, 0.5);
    z.segment(b.sub.off_dx + 2 * i, 2) = dx;
    perturbed.x[i] += dx;
  }
  for (int i = 0; i < 8; ++i) {
    const Vec du = random_vec(rng, 1, -0.5, 0.5);
    z.segment(b.sub.off_du + i, 1) = du;
    perturbed.u[i] += du;
  }
  CHECK(b.sub.objective_at(z) ==
        doctest::Approx(total_cost(s.problem, perturbed, true)).epsilon(1e-12));
}

TEST_CASE("a vanishing trust radius forces the null step") {
  const LqrSetup s = lqr_setup(10);
  auto b = build_at(s.problem, std::vector<Vec>(10, Vec::Constant(1, 0.1)), 1e3);
  b.sub.set_trust_radius(1e-9);
  SparseQpSolver solver;
  const auto sol = solver.solve(b.sub.qp);
  REQUIRE(sol.status == QpStatus::kSolved);
  CHECK(b.sub.deviation_l1(sol.z) < 1e-7);
  CHECK(b.sub.virtual_l1(sol.z) < 1e-7);
  CHECK(std::abs(sol.objective) < 1e-7);
  CHECK_THROWS_AS(b.sub.set_trust_radius(-1.0), InvalidArgument);
}

TEST_CASE("solutions respect the l1 trust row") {
  const LqrSetup s = lqr_setup(10);
  auto b = build_at(s.problem, std::vector<Vec>(10, Vec::Zero(1)), 1e3);
  for (double radius : {0.5, 5.0}) {
    b.sub.set_trust_radius(radius);
    SparseQpSolver solver;
    const auto sol = solver.solve(b.sub.qp);
    REQUIRE(sol.status == QpStatus::kSolved);
    CHECK(b.sub.deviation_l1(sol.z) <= radius + 1e-6);
  }
}

TEST_CASE("consistent linearized dynamics leave no virtual control") {
  // Linear plant: the linearization is the plant, so the subproblem can
  // reach the optimum without paying the virtual penalty, and its
  // prediction equals the true optimal cost change.
  const LqrSetup s = lqr_setup(20);
  const auto opt = dense_lqr_solve(s);
  auto b = build_at(s.problem, std::vector<Vec>(20, Vec::Zero(1)), 1e3);
  b.sub.set_trust_radius(1e6);
  SparseQpSolver solver;
  const auto sol = solver.solve(b.sub.qp);
  REQUIRE(sol.status == QpStatus::kSolved);
  CHECK(b.sub.virtual_l1(sol.z) < 1e-6);

  const double initial = total_cost(s.problem, b.traj, true);
  CHECK(-sol.objective == doctest::Approx(initial - opt.cost).epsilon(1e-6));

  const std::vector<Vec> du = b.sub.delta_u(sol.z);
  for (int t = 0; t < 20; ++t)
    CHECK(b.traj.u[t](0) + du[t](0) == doctest::Approx(opt.u_star(t)).epsilon(1e-4));
}

TEST_CASE("a cheap virtual control rewrites the dynamics") {
  // With a negligible price on v the subproblem teleports the state to
  // the goal instead of steering through the plant.
  const LqrSetup s = lqr_setup(10);
  auto b = build_at(s.problem, std::vector<Vec>(10, Vec::Zero(1)), 1e-9);
  b.sub.set_trust_radius(1e6);
  SparseQpSolver solver;
  const auto sol = solver.solve(b.sub.qp);
  REQUIRE(sol.status == QpStatus::kSolved);
  CHECK(b.sub.virtual_l1(sol.z) > 0.1);
}

TEST_CASE("similarity ratio is actual over predicted") {
  CHECK(similarity_ratio(0.5, 1.0) == doctest::Approx(0.5));
  CHECK(similarity_ratio(-1.0, 2.0) == doctest::Approx(-0.5));
  CHECK(similarity_ratio(3.0, 3.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(similarity_ratio(1.0, 0.0), InvalidArgument);
}

TEST_CASE("trust region update follows the acceptance bands") {
  const ScvxParams params;  // rho1 = 0.25, rho2 = 0.7, factors 2
  CHECK(update_trust_region(100.0, 0.1, params) == doctest::Approx(50.0));
  CHECK(update_trust_region(100.0, 0.5, params) == doctest::Approx(100.0));
  CHECK(update_trust_region(100.0, 0.9, params) == doctest::Approx(200.0));
  // Band edges: shrink strictly below rho1, expand at rho2.
  CHECK(update_trust_region(100.0, 0.25, params) == doctest::Approx(100.0));
  CHECK(update_trust_region(100.0, 0.7, params) == doctest::Approx(200.0));
  // Floor after the update, then the cap.
  CHECK(update_trust_region(1.5e-6, 0.1, params) == doctest::Approx(params.trust_floor));
  CHECK(update_trust_region(8e7, 0.9, params) == doctest::Approx(params.trust_cap));
  CHECK_THROWS_AS(update_trust_region(0.0, 0.5, params), InvalidArgument);
}

TEST_CASE("scvx lands on the linear-quadratic optimum") {
  const LqrSetup s = lqr_setup(20);
  const auto opt = dense_lqr_solve(s);

  ScvxParams params;
  const SolverReport rep = solve_scvx(s.problem, params, std::vector<Vec>(20, Vec::Zero(1)));
  CHECK(rep.status == SolveStatus::kConverged);
  CHECK(rep.accepted_iterations <= 2);
  CHECK(rep.final_cost == doctest::Approx(opt.cost).epsilon(1e-6));

  for (const IterationRecord& rec : rep.iterations) {
    if (!rec.accepted) continue;
    CHECK(rec.predicted_reduction > 0.0);
    // The model is exact on a linear plant.
    CHECK(rec.ratio == doctest::Approx(1.0).epsilon(1e-5));
  }
}

TEST_CASE("scvx accepted costs decrease and match the trajectory") {
  LqrSetup s = lqr_setup(20);
  s.problem.u_min = Vec::Constant(1, -0.4);
  s.problem.u_max = Vec::Constant(1, 0.4);
  s.problem.goal << 4.0, 0.0;

  ScvxParams params;
  const SolverReport rep = solve_scvx(s.problem, params, std::vector<Vec>(20, Vec::Zero(1)));
  double last = rep.initial_cost;
  for (const IterationRecord& rec : rep.iterations) {
    if (!rec.accepted) continue;
    CHECK(rec.cost <= last + 1e-12);
    last = rec.cost;
  }
  CHECK(rep.final_cost == doctest::Approx(total_cost(s.problem, rep.trajectory, true)).epsilon(1e-12));
  for (const Vec& u : rep.trajectory.u) {
    CHECK(u(0) >= -0.4);
    CHECK(u(0) <= 0.4);
  }
}

TEST_CASE("starting at the goal terminates without a step") {
  LqrSetup s = lqr_setup(10);
  s.problem.x0 << 1.0, 0.0;
  s.problem.goal << 1.0, 0.0;
  s.problem.state_weight.setZero();

  ScvxParams params;
  const SolverReport rep = solve_scvx(s.problem, params, std::vector<Vec>(10, Vec::Zero(1)));
  CHECK(rep.status == SolveStatus::kConverged);
  CHECK(rep.accepted_iterations == 0);
  CHECK(rep.final_cost == doctest::Approx(0.0));
  CHECK(static_cast<int>(rep.iterations.size()) == 1);
}

TEST_CASE("an infeasible subproblem stalls through the rejection cap") {
  // A state floor above the fixed initial state cannot be satisfied at any
  // trust radius, so every subproblem is rejected until the cap trips.
  LqrSetup s = lqr_setup(8);
  s.problem.x_min = Vec::Constant(2, 0.5);  // x0 = 0 violates this

  ScvxParams params;
  params.max_consecutive_rejections = 4;
  const SolverReport rep = solve_scvx(s.problem, params, std::vector<Vec>(8, Vec::Zero(1)));
  CHECK(rep.status == SolveStatus::kStalled);
  CHECK(rep.accepted_iterations == 0);
  CHECK(static_cast<int>(rep.iterations.size()) == params.max_consecutive_rejections + 1);
  for (const IterationRecord& rec : rep.iterations) CHECK(!rec.accepted);
  // The radius halves on every rejection.
  for (size_t i = 1; i < rep.iterations.size(); ++i)
    CHECK(rep.iterations[i].step_scale ==
          doctest::Approx(rep.iterations[i - 1].step_scale / 2.0));
}

TEST_CASE("scvx parameters are validated") {
  ScvxParams params;
  params.accept_threshold = 0.5;
  params.shrink_threshold = 0.25;  // violates rho0 < rho1
  CHECK_THROWS_AS(params.validate(), InvalidArgument);

  params = ScvxParams{};
  params.trust_init = 0.0;
  CHECK_THROWS_AS(params.validate(), InvalidArgument);

  params = ScvxParams{};
  params.expand_threshold = 1.0;
  CHECK_THROWS_AS(params.validate(), InvalidArgument);

  params = ScvxParams{};
  params.virtual_weight = -1.0;
  CHECK_THROWS_AS(params.validate(), InvalidArgument);
}
