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

#include "trajopt.hpp"

#include <thread>

namespace citopt {
namespace {

bool state_ok(const Vec& x) {
  return x.allFinite() && x.lpNorm<Eigen::Infinity>() < 1e6;
}

}  // namespace

Trajectory rollout(const Problem& problem, const std::vector<Vec>& controls) {
  if (static_cast<int>(controls.size()) != problem.horizon)
    throw InvalidArgument("control count does not match horizon");
  Trajectory traj;
  traj.x.reserve(problem.horizon + 1);
  traj.u.reserve(problem.horizon);
  traj.x.push_back(problem.x0);
  for (int i = 0; i < problem.horizon; ++i) {
    traj.u.push_back(controls[i].cwiseMax(problem.u_min).cwiseMin(problem.u_max));
    Vec next = problem.model->step(traj.x.back(), traj.u.back());
    if (!state_ok(next)) throw DivergenceError(i);
    traj.x.push_back(std::move(next));
  }
  return traj;
}

LinearDynamics linearize(const Problem& problem, const Trajectory& traj) {
  const DynamicsModel& model = *problem.model;
  const int n = model.state_dim();
  const int m = model.control_dim();
  const int steps = static_cast<int>(traj.u.size());

  LinearDynamics lin;
  lin.a.assign(steps, Mat(n, n));
  lin.b.assign(steps, Mat(n, m));

  auto diff_step = [&](int i) {
    const Vec& x = traj.x[i];
    const Vec& u = traj.u[i];
    for (int j = 0; j < n; ++j) {
      const double h = problem.fd_step_x(j);
      Vec lo = x, hi = x;
      lo(j) -= h;
      hi(j) += h;
      lin.a[i].col(j) = (model.step(hi, u) - model.step(lo, u)) / (2.0 * h);
    }
    for (int j = 0; j < m; ++j) {
      const double h = problem.fd_step_u(j);
      Vec lo = u, hi = u;
      lo(j) -= h;
      hi(j) += h;
      lin.b[i].col(j) = (model.step(x, hi) - model.step(x, lo)) / (2.0 * h);
    }
  };

  const int workers =
      std::max(1, std::min<int>(steps, static_cast<int>(std::thread::hardware_concurrency())));
  if (workers == 1) {
    for (int i = 0; i < steps; ++i) diff_step(i);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int i = w; i < steps; i += workers) diff_step(i);
      });
    for (auto& t : pool) t.join();
  }
  return lin;
}

double positioning_error_mm(const Problem& problem, const Trajectory& traj) {
  if (problem.model->state_dim() != kStateDim)
    throw InvalidArgument("positioning error is defined for the pushing task only");
  const Vec& xf = traj.x.back();
  const Vec2 err = xf.segment<2>(kIdxBoxPose) - problem.goal.segment<2>(kIdxBoxPose);
  return 1e3 * err.norm();
}

double physical_inaccuracy(const PlanarWorld& world, const Trajectory& traj) {
  double psi = 0.0;
  for (size_t i = 0; i < traj.u.size(); ++i)
    psi += world.step_virtual_impulse(traj.x[i], traj.u[i]);
  return psi;
}

}  // namespace citopt
