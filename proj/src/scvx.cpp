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

#include "scvx.hpp"

#include <chrono>

namespace citopt {
namespace {

using Clock = std::chrono::steady_clock;
using Triplet = Eigen::Triplet<double>;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Below this scale the subproblem has nothing left to promise and the
// ratio is meaningless; the iterate is already a fixed point. The scale
// matches what the convex solver can resolve: its objective is accurate
// only to the duality-gap tolerance, so predictions under that are noise.
double machine_delta_l(double cost) { return 1e-9 * std::max(1.0, std::abs(cost)); }

}  // namespace

void ScvxParams::validate() const {
  if (max_iterations < 1) throw InvalidArgument("max_iterations must be positive");
  if (!(trust_init > 0.0)) throw InvalidArgument("trust_init must be positive");
  if (!(virtual_weight > 0.0)) throw InvalidArgument("virtual_weight must be positive");
  if (!(0.0 < accept_threshold && accept_threshold < shrink_threshold &&
        shrink_threshold < expand_threshold && expand_threshold < 1.0))
    throw InvalidArgument("require 0 < rho0 < rho1 < rho2 < 1");
  if (!(shrink_factor > 1.0 && expand_factor > 1.0))
    throw InvalidArgument("trust factors must exceed 1");
  if (!(delta_l_tol > 0.0)) throw InvalidArgument("delta_l_tol must be positive");
  if (!(trust_floor >= 0.0 && trust_cap > trust_floor))
    throw InvalidArgument("trust radius range invalid");
  if (max_consecutive_rejections < 1)
    throw InvalidArgument("max_consecutive_rejections must be positive");
}

void ScvxSubproblem::set_trust_radius(double r) {
  if (r < 0.0) throw InvalidArgument("trust radius must be nonnegative");
  qp.u(trust_row) = r;
}

double ScvxSubproblem::objective_at(const Vec& z) const {
  if (z.size() != size_z) throw InvalidArgument("solution size mismatch");
  return objective_constant + 0.5 * z.dot(qp.p * z) + qp.q.dot(z);
}

std::vector<Vec> ScvxSubproblem::delta_u(const Vec& z) const {
  std::vector<Vec> du(steps);
  for (int i = 0; i < steps; ++i) du[i] = z.segment(off_du + i * m, m);
  return du;
}

double ScvxSubproblem::deviation_l1(const Vec& z) const {
  return z.segment(off_dx, n * (steps + 1)).lpNorm<1>() +
         z.segment(off_du, m * steps).lpNorm<1>();
}

double ScvxSubproblem::virtual_l1(const Vec& z) const {
  return z.segment(off_v, n * steps).lpNorm<1>();
}

ScvxSubproblem build_subproblem(const Problem& problem, const Trajectory& traj,
                                const LinearDynamics& lin, double virtual_weight) {
  const int n = problem.model->state_dim();
  const int m = problem.model->control_dim();
  const int steps = static_cast<int>(traj.u.size());
  if (traj.x.size() != static_cast<size_t>(steps) + 1 ||
      lin.a.size() != static_cast<size_t>(steps) || lin.b.size() != static_cast<size_t>(steps))
    throw InvalidArgument("trajectory/linearization shape mismatch");

  ScvxSubproblem sp;
  sp.n = n;
  sp.m = m;
  sp.steps = steps;
  const int nx = n * (steps + 1);
  const int nu = m * steps;
  const int nv = n * steps;
  sp.off_dx = 0;
  sp.off_du = nx;
  sp.off_v = nx + nu;
  sp.off_sv = nx + nu + nv;
  sp.off_tx = nx + nu + 2 * nv;
  sp.off_tu = nx + nu + 2 * nv + nx;
  sp.size_z = 2 * nx + 2 * nu + 2 * nv;
  sp.objective_constant = total_cost(problem, traj, true);

  // Quadratic objective: running state and control terms at the iterate,
  // final error term at x_N, linear price on the virtual-control slacks.
  // Everything is diagonal; entries are kept even when a weight is zero so
  // the pattern does not depend on the task.
  std::vector<Triplet> pt;
  Vec q = Vec::Zero(sp.size_z);
  for (int i = 0; i < steps; ++i)
    for (int j = 0; j < n; ++j) {
      pt.emplace_back(sp.off_dx + i * n + j, sp.off_dx + i * n + j, 2.0 * problem.state_weight(j));
      q(sp.off_dx + i * n + j) = 2.0 * problem.state_weight(j) * traj.x[i](j);
    }
  const Vec final_err = problem.final_error(traj.x.back());
  for (int j = 0; j < n; ++j) {
    pt.emplace_back(sp.off_dx + steps * n + j, sp.off_dx + steps * n + j,
                    2.0 * problem.final_weight(j));
    q(sp.off_dx + steps * n + j) = 2.0 * problem.final_weight(j) * final_err(j);
  }
  for (int i = 0; i < steps; ++i)
    for (int j = 0; j < m; ++j) {
      pt.emplace_back(sp.off_du + i * m + j, sp.off_du + i * m + j,
                      2.0 * problem.control_weight(j));
      q(sp.off_du + i * m + j) = 2.0 * problem.control_weight(j) * traj.u[i](j);
    }
  q.segment(sp.off_sv, nv).setConstant(virtual_weight);

  sp.qp.p.resize(sp.size_z, sp.size_z);
  sp.qp.p.setFromTriplets(pt.begin(), pt.end());
  sp.qp.q = std::move(q);

  // Constraint rows, in order: initial state, dynamics, control bounds,
  // state bounds, |v| <= sv, |dx| <= tx, |du| <= tu, trust region.
  const double inf = std::numeric_limits<double>::infinity();
  const int rows = n + n * steps + nu + nx + 2 * nv + 2 * nx + 2 * nu + 1;
  std::vector<Triplet> ct;
  Vec l = Vec::Zero(rows), u = Vec::Zero(rows);
  int row = 0;

  for (int j = 0; j < n; ++j, ++row) ct.emplace_back(row, sp.off_dx + j, 1.0);
  // l = u = 0 for the initial block.

  for (int i = 0; i < steps; ++i)
    for (int r = 0; r < n; ++r, ++row) {
      for (int c = 0; c < n; ++c) ct.emplace_back(row, sp.off_dx + i * n + c, lin.a[i](r, c));
      for (int c = 0; c < m; ++c) ct.emplace_back(row, sp.off_du + i * m + c, lin.b[i](r, c));
      ct.emplace_back(row, sp.off_v + i * n + r, 1.0);
      ct.emplace_back(row, sp.off_dx + (i + 1) * n + r, -1.0);
      // l = u = 0: exact linearized dynamics with virtual control.
    }

  for (int i = 0; i < steps; ++i)
    for (int j = 0; j < m; ++j, ++row) {
      ct.emplace_back(row, sp.off_du + i * m + j, 1.0);
      l(row) = problem.u_min(j) - traj.u[i](j);
      u(row) = problem.u_max(j) - traj.u[i](j);
    }

  for (int i = 0; i <= steps; ++i)
    for (int j = 0; j < n; ++j, ++row) {
      ct.emplace_back(row, sp.off_dx + i * n + j, 1.0);
      l(row) = std::isfinite(problem.x_min(j)) ? problem.x_min(j) - traj.x[i](j) : -inf;
      u(row) = std::isfinite(problem.x_max(j)) ? problem.x_max(j) - traj.x[i](j) : inf;
    }

  auto abs_rows = [&](int off_val, int off_slack, int count) {
    for (int j = 0; j < count; ++j, ++row) {  // val - slack <= 0
      ct.emplace_back(row, off_val + j, 1.0);
      ct.emplace_back(row, off_slack + j, -1.0);
      l(row) = -inf;
      u(row) = 0.0;
    }
    for (int j = 0; j < count; ++j, ++row) {  // val + slack >= 0
      ct.emplace_back(row, off_val + j, 1.0);
      ct.emplace_back(row, off_slack + j, 1.0);
      l(row) = 0.0;
      u(row) = inf;
    }
  };
  abs_rows(sp.off_v, sp.off_sv, nv);
  abs_rows(sp.off_dx, sp.off_tx, nx);
  abs_rows(sp.off_du, sp.off_tu, nu);

  sp.trust_row = row;
  for (int j = 0; j < nx; ++j) ct.emplace_back(row, sp.off_tx + j, 1.0);
  for (int j = 0; j < nu; ++j) ct.emplace_back(row, sp.off_tu + j, 1.0);
  l(row) = -inf;
  u(row) = 0.0;  // radius filled in by set_trust_radius
  ++row;

  sp.qp.c.resize(rows, sp.size_z);
  sp.qp.c.setFromTriplets(ct.begin(), ct.end());
  sp.qp.l = std::move(l);
  sp.qp.u = std::move(u);
  return sp;
}

double similarity_ratio(double actual, double predicted) {
  if (predicted == 0.0) throw InvalidArgument("predicted reduction is zero");
  return actual / predicted;
}

double update_trust_region(double r, double rho, const ScvxParams& params) {
  if (!(r > 0.0)) throw InvalidArgument("trust radius must be positive");
  double next = r;
  if (rho < params.shrink_threshold) next = r / params.shrink_factor;
  else if (rho >= params.expand_threshold) next = r * params.expand_factor;
  // Radius floor applied after the band update, then the optional cap.
  next = std::max(next, params.trust_floor);
  next = std::min(next, params.trust_cap);
  return next;
}

SolverReport solve_scvx(const Problem& problem, const ScvxParams& params,
                        const std::vector<Vec>& u_init) {
  problem.validate();
  params.validate();
  const auto t_start = Clock::now();

  SolverReport report;
  report.acceptable_threshold = params.acceptable_cost;
  report.trajectory = rollout(problem, u_init);
  double cost = total_cost(problem, report.trajectory, true);
  report.initial_cost = cost;

  SparseQpSolver qp_solver(params.qp);
  double radius = params.trust_init;
  int s = 1;
  int consecutive_rejections = 0;
  bool done = false;

  while (!done) {
    if (s > params.max_iterations) {
      report.status = SolveStatus::kMaxIterations;
      break;
    }

    auto t0 = Clock::now();
    const LinearDynamics lin = linearize(problem, report.trajectory);
    const double t_deriv = seconds_since(t0);
    ScvxSubproblem sub = build_subproblem(problem, report.trajectory, lin, params.virtual_weight);

    // Rejections re-solve the same subproblem with a tighter radius; the
    // linearization is reused.
    bool first_solve = true;
    while (true) {
      IterationRecord rec;
      rec.iteration = s;
      rec.step_scale = radius;
      rec.t_deriv = first_solve ? t_deriv : 0.0;
      first_solve = false;

      sub.set_trust_radius(radius);
      t0 = Clock::now();
      QpSolution sol = qp_solver.solve(sub.qp);
      rec.t_solve = seconds_since(t0);

      bool reject = sol.status != QpStatus::kSolved;
      const double predicted = reject ? 0.0 : -sol.objective;
      rec.predicted_reduction = predicted;

      if (!reject && std::abs(predicted) <= machine_delta_l(cost)) {
        rec.cost = cost;
        rec.cost_comparable = total_cost(problem, report.trajectory, false);
        rec.accepted = false;
        report.iterations.push_back(rec);
        report.status = SolveStatus::kConverged;
        done = true;
        break;
      }

      Trajectory candidate;
      double actual = 0.0;
      if (!reject) {
        std::vector<Vec> u_next = sub.delta_u(sol.z);
        for (int i = 0; i < sub.steps; ++i) u_next[i] += report.trajectory.u[i];
        t0 = Clock::now();
        try {
          candidate = rollout(problem, u_next);
          actual = cost - total_cost(problem, candidate, true);
        } catch (const DivergenceError&) {
          reject = true;
        }
        rec.t_forward = seconds_since(t0);
      }

      double rho = 0.0;
      if (!reject) {
        rho = similarity_ratio(actual, predicted);
        rec.actual_reduction = actual;
        rec.ratio = rho;
        reject = rho < params.accept_threshold;
      }

      if (reject) {
        rec.cost = cost;
        rec.cost_comparable = total_cost(problem, report.trajectory, false);
        rec.accepted = false;
        report.iterations.push_back(rec);
        radius /= params.shrink_factor;
        if (++consecutive_rejections > params.max_consecutive_rejections) {
          report.status = SolveStatus::kStalled;
          done = true;
        }
        if (done) break;
        continue;
      }

      consecutive_rejections = 0;
      report.trajectory = std::move(candidate);
      cost -= actual;
      radius = update_trust_region(radius, rho, params);
      report.accepted_iterations = s;

      rec.cost = cost;
      rec.cost_comparable = total_cost(problem, report.trajectory, false);
      rec.accepted = true;
      report.iterations.push_back(rec);

      if (report.iterations_to_acceptable < 0 && rec.cost_comparable < params.acceptable_cost)
        report.iterations_to_acceptable = s;

      s += 1;
      if (std::abs(predicted) <= params.delta_l_tol) {
        report.status = SolveStatus::kConverged;
        done = true;
      }
      break;
    }
  }

  report.final_cost = cost;
  report.final_cost_comparable = total_cost(problem, report.trajectory, false);
  report.total_time = seconds_since(t_start);
  return report;
}

}  // namespace citopt
