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

#include "ilqr.hpp"

#include <chrono>

#include "boxqp.hpp"

namespace citopt {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct ForwardResult {
  bool ok = false;
  Trajectory traj;
  double cost = 0.0;
};

// Closed-loop rollout with clamping; fails on divergence.
ForwardResult forward_pass(const Problem& problem, const Trajectory& ref, const BackwardPass& bp,
                           double alpha) {
  ForwardResult fr;
  const int n_steps = static_cast<int>(ref.u.size());
  fr.traj.x.reserve(n_steps + 1);
  fr.traj.u.reserve(n_steps);
  fr.traj.x.push_back(problem.x0);
  for (int i = 0; i < n_steps; ++i) {
    const Vec du = alpha * bp.k[i] + bp.kk[i] * (fr.traj.x.back() - ref.x[i]);
    fr.traj.u.push_back((ref.u[i] + du).cwiseMax(problem.u_min).cwiseMin(problem.u_max));
    Vec next = problem.model->step(fr.traj.x.back(), fr.traj.u.back());
    if (!next.allFinite() || next.lpNorm<Eigen::Infinity>() > 1e6) return fr;
    fr.traj.x.push_back(std::move(next));
  }
  fr.cost = total_cost(problem, fr.traj, true);
  fr.ok = std::isfinite(fr.cost);
  return fr;
}

}  // namespace

void IlqrParams::validate() const {
  if (max_iterations < 1) throw InvalidArgument("max_iterations must be positive");
  if (!(cost_tol > 0.0)) throw InvalidArgument("cost_tol must be positive");
  if (!(reg_min > 0.0 && reg_init >= reg_min && reg_max > reg_min))
    throw InvalidArgument("regularization range invalid");
  if (!(reg_up > 1.0 && reg_down > 1.0)) throw InvalidArgument("reg factors must exceed 1");
  if (line_search_steps < 1) throw InvalidArgument("line_search_steps must be positive");
  if (!(accept_ratio > 0.0 && accept_ratio < 1.0))
    throw InvalidArgument("accept_ratio must be in (0, 1)");
}

BackwardPass ilqr_backward(const Problem& problem, const Trajectory& traj,
                           const LinearDynamics& lin, double reg) {
  const int n_steps = static_cast<int>(traj.u.size());
  const int n = problem.model->state_dim();
  const int m = problem.model->control_dim();

  BackwardPass bp;
  bp.k.assign(n_steps, Vec::Zero(m));
  bp.kk.assign(n_steps, Mat::Zero(m, n));

  Vec vx = problem.final_cost_gradient(traj.x.back());
  Mat vxx = problem.final_cost_hessian();

  const Mat lxx = (2.0 * problem.state_weight).asDiagonal();
  const Mat luu_base = (2.0 * problem.control_weight).asDiagonal();

  for (int i = n_steps - 1; i >= 0; --i) {
    const Mat& a = lin.a[i];
    const Mat& b = lin.b[i];
    const Vec lx = 2.0 * problem.state_weight.cwiseProduct(traj.x[i]);
    const Vec lu = 2.0 * problem.control_weight.cwiseProduct(traj.u[i]);

    const Vec qx = lx + a.transpose() * vx;
    const Vec qu = lu + b.transpose() * vx;
    const Mat qxx = lxx + a.transpose() * vxx * a;
    const Mat quu = luu_base + b.transpose() * vxx * b;
    const Mat qux = b.transpose() * vxx * a;

    // Regularize through the value Hessian so the gains stay consistent.
    const Mat vxx_reg = vxx + reg * Mat::Identity(n, n);
    const Mat quu_reg = luu_base + b.transpose() * vxx_reg * b;
    const Mat qux_reg = b.transpose() * vxx_reg * a;

    const Vec lo = problem.u_min - traj.u[i];
    const Vec hi = problem.u_max - traj.u[i];
    const Vec seed = i + 1 < n_steps ? bp.k[i + 1] : Vec::Zero(m);
    BoxQpResult qp = box_qp(quu_reg, qu, lo, hi, seed);
    if (!qp.success) return bp;  // caller raises the regularization

    bp.k[i] = qp.u;
    // Feedback only on free controls; clamped rows stay pinned.
    if (!qp.free_idx.empty()) {
      const int nf = static_cast<int>(qp.free_idx.size());
      Mat qux_f(nf, n);
      for (int r = 0; r < nf; ++r) qux_f.row(r) = qux_reg.row(qp.free_idx[r]);
      const Mat kf = -qp.free_llt.solve(qux_f);
      for (int r = 0; r < nf; ++r) bp.kk[i].row(qp.free_idx[r]) = kf.row(r);
    }

    const Vec& k = bp.k[i];
    const Mat& kk = bp.kk[i];
    bp.d1 += k.dot(qu);
    bp.d2 += 0.5 * k.dot(quu * k);

    vx = qx + kk.transpose() * (quu * k + qu) + qux.transpose() * k;
    vxx = qxx + kk.transpose() * quu * kk + kk.transpose() * qux + qux.transpose() * kk;
    vxx = 0.5 * (vxx + vxx.transpose());
  }
  bp.ok = true;
  return bp;
}

SolverReport solve_ilqr(const Problem& problem, const IlqrParams& params,
                        const std::vector<Vec>& u_init) {
  problem.validate();
  params.validate();
  const auto t_start = Clock::now();

  SolverReport report;
  report.acceptable_threshold = params.acceptable_cost;
  report.trajectory = rollout(problem, u_init);
  double cost = total_cost(problem, report.trajectory, true);
  report.initial_cost = cost;

  double reg = params.reg_init;
  int accepted = 0;

  for (int outer = 0; outer < params.max_iterations; ++outer) {
    IterationRecord rec;
    rec.iteration = accepted + 1;
    rec.regularization = reg;

    auto t0 = Clock::now();
    const LinearDynamics lin = linearize(problem, report.trajectory);
    rec.t_deriv = seconds_since(t0);

    t0 = Clock::now();
    BackwardPass bp = ilqr_backward(problem, report.trajectory, lin, reg);
    while (!bp.ok && reg < params.reg_max) {
      reg = std::min(reg * params.reg_up, params.reg_max);
      bp = ilqr_backward(problem, report.trajectory, lin, reg);
    }
    rec.t_solve = seconds_since(t0);
    if (!bp.ok) {
      report.status = SolveStatus::kStalled;
      rec.cost = cost;
      report.iterations.push_back(rec);
      break;
    }

    t0 = Clock::now();
    bool step_taken = false;
    ForwardResult best;
    double used_alpha = 0.0;
    double expected = 0.0;
    for (int ls = 0; ls < params.line_search_steps; ++ls) {
      const double alpha =
          params.line_search_steps == 1
              ? 1.0
              : std::pow(10.0, -3.0 * ls / (params.line_search_steps - 1));
      ForwardResult fr = forward_pass(problem, report.trajectory, bp, alpha);
      if (!fr.ok) continue;
      const double actual = cost - fr.cost;
      expected = -(alpha * bp.d1 + alpha * alpha * bp.d2);
      const bool accept = expected > 0.0 ? (actual / expected > params.accept_ratio)
                                         : (actual > 0.0);
      if (accept) {
        step_taken = true;
        best = std::move(fr);
        used_alpha = alpha;
        break;
      }
    }
    rec.t_forward = seconds_since(t0);

    if (!step_taken) {
      rec.cost = cost;
      rec.accepted = false;
      report.iterations.push_back(rec);
      if (reg >= params.reg_max) {
        report.status = SolveStatus::kStalled;
        break;
      }
      reg = std::min(reg * params.reg_up, params.reg_max);
      continue;
    }

    const double actual = cost - best.cost;
    cost = best.cost;
    report.trajectory = std::move(best.traj);
    accepted += 1;
    reg = std::max(reg / params.reg_down, params.reg_min);

    rec.cost = cost;
    rec.cost_comparable = total_cost(problem, report.trajectory, false);
    rec.actual_reduction = actual;
    rec.predicted_reduction = expected;
    rec.ratio = expected > 0.0 ? actual / expected : 1.0;
    rec.step_scale = used_alpha;
    rec.accepted = true;
    report.iterations.push_back(rec);

    if (report.iterations_to_acceptable < 0 && rec.cost_comparable < params.acceptable_cost)
      report.iterations_to_acceptable = accepted;

    if (std::abs(actual) < params.cost_tol) {
      report.status = SolveStatus::kConverged;
      break;
    }
  }

  report.accepted_iterations = accepted;
  report.final_cost = cost;
  report.final_cost_comparable = total_cost(problem, report.trajectory, false);
  report.total_time = seconds_since(t_start);
  return report;
}

}  // namespace citopt
