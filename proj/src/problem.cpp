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

#include "problem.hpp"

#include <algorithm>

namespace citopt {

void Problem::finish_defaults() {
  const int n = model->state_dim();
  const int m = model->control_dim();
  const double inf = std::numeric_limits<double>::infinity();
  if (goal.size() == 0) goal = Vec::Zero(n);
  if (final_weight.size() == 0) final_weight = Vec::Zero(n);
  if (state_weight.size() == 0) state_weight = Vec::Zero(n);
  if (control_weight.size() == 0) control_weight = Vec::Zero(m);
  if (u_min.size() == 0) u_min = Vec::Constant(m, -inf);
  if (u_max.size() == 0) u_max = Vec::Constant(m, inf);
  if (x_min.size() == 0) x_min = Vec::Constant(n, -inf);
  if (x_max.size() == 0) x_max = Vec::Constant(n, inf);
  if (fd_step_x.size() == 0) fd_step_x = Vec::Constant(n, 1e-6);
  if (fd_step_u.size() == 0) fd_step_u = Vec::Constant(m, 1e-6);
}

void Problem::validate() const {
  if (!model) throw InvalidArgument("problem has no model");
  const int n = model->state_dim();
  const int m = model->control_dim();
  if (horizon < 1) throw InvalidArgument("horizon must be at least 1");
  if (x0.size() != n) throw InvalidArgument("x0 size mismatch");
  if (goal.size() != n || final_weight.size() != n || state_weight.size() != n ||
      x_min.size() != n || x_max.size() != n || fd_step_x.size() != n)
    throw InvalidArgument("state-sized field mismatch");
  if (control_weight.size() != m || u_min.size() != m || u_max.size() != m ||
      fd_step_u.size() != m)
    throw InvalidArgument("control-sized field mismatch");
  if (final_weight.minCoeff() < 0.0 || state_weight.minCoeff() < 0.0 ||
      control_weight.minCoeff() < 0.0)
    throw InvalidArgument("cost weights must be nonnegative");
  if (((u_max - u_min).array() < 0.0).any()) throw InvalidArgument("u_min must not exceed u_max");
  for (int j : wrap_indices)
    if (j < 0 || j >= n) throw InvalidArgument("wrap index out of range");
  if ((fd_step_x.array() <= 0.0).any() || (fd_step_u.array() <= 0.0).any())
    throw InvalidArgument("finite difference steps must be positive");
}

Vec Problem::final_error(const Vec& x) const {
  Vec err = x - goal;
  for (int j : wrap_indices) err(j) = wrap_angle(err(j));
  return err;
}

double Problem::final_cost(const Vec& x) const {
  const Vec err = final_error(x);
  return err.dot(final_weight.cwiseProduct(err));
}

Vec Problem::final_cost_gradient(const Vec& x) const {
  return 2.0 * final_weight.cwiseProduct(final_error(x));
}

Mat Problem::final_cost_hessian() const { return (2.0 * final_weight).asDiagonal(); }

double Problem::running_cost(const Vec& x, const Vec& u, bool include_state_weight) const {
  double c = u.dot(control_weight.cwiseProduct(u));
  if (include_state_weight) c += x.dot(state_weight.cwiseProduct(x));
  return c;
}

double total_cost(const Problem& problem, const Trajectory& traj, bool include_state_weight) {
  if (traj.x.size() != traj.u.size() + 1) throw InvalidArgument("trajectory shape mismatch");
  double c = 0.0;
  for (size_t i = 0; i < traj.u.size(); ++i)
    c += problem.running_cost(traj.x[i], traj.u[i], include_state_weight);
  return c + problem.final_cost(traj.x.back());
}

}  // namespace citopt
