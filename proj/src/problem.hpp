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

#ifndef CITOPT_PROBLEM_HPP
#define CITOPT_PROBLEM_HPP

#include <vector>

#include "dynamics_model.hpp"

namespace citopt {

// Finite-horizon optimal control problem over a discrete plant:
//
//   min  sum_i [ u_i' diag(control_weight) u_i + x_i' diag(state_weight) x_i ]
//        + sum_j final_weight(j) * err_j(x_N)^2
//   s.t. x_{i+1} = model.step(x_i, u_i),  u_min <= u_i <= u_max,
//        x_min <= x_i <= x_max
//
// err_j is x_N(j) - goal(j), wrapped to (-pi, pi] for coordinates listed
// in wrap_indices. All weights are diagonal; the running state term is an
// absolute penalty (no goal), used for velocity regularization.
struct Problem {
  const DynamicsModel* model = nullptr;
  int horizon = 0;
  Vec x0;
  Vec goal;
  Vec final_weight;
  Vec state_weight;
  Vec control_weight;
  std::vector<int> wrap_indices;
  Vec u_min, u_max;
  Vec x_min, x_max;  // default unbounded
  Vec fd_step_x, fd_step_u;  // central difference steps for linearization

  void validate() const;

  // Fills unset vectors with defaults for the model's dimensions.
  void finish_defaults();

  Vec final_error(const Vec& x) const;
  double final_cost(const Vec& x) const;
  Vec final_cost_gradient(const Vec& x) const;
  Mat final_cost_hessian() const;

  double running_cost(const Vec& x, const Vec& u, bool include_state_weight) const;
};

struct Trajectory {
  std::vector<Vec> x;  // horizon + 1 states
  std::vector<Vec> u;  // horizon controls
};

// Total objective along a trajectory. include_state_weight toggles the
// running state penalty so solvers that regularize velocities can still be
// compared on the common part of the objective.
double total_cost(const Problem& problem, const Trajectory& traj, bool include_state_weight = true);

}  // namespace citopt

#endif  // CITOPT_PROBLEM_HPP
