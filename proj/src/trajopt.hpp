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

#ifndef CITOPT_TRAJOPT_HPP
#define CITOPT_TRAJOPT_HPP

#include "problem.hpp"
#include "world.hpp"

namespace citopt {

// Integrates the plant from problem.x0 under the given controls, clamping
// each one to the control bounds first. The returned controls are the
// clamped ones, so traj.x is exactly the rollout of traj.u (zero defects).
// Throws DivergenceError when a state leaves the finite range.
Trajectory rollout(const Problem& problem, const std::vector<Vec>& controls);

struct LinearDynamics {
  std::vector<Mat> a;  // d step / d x along the trajectory
  std::vector<Mat> b;  // d step / d u
};

// Central-difference linearization of the plant along a trajectory, one
// (A, B) pair per step. Column evaluations are distributed across threads;
// results do not depend on the schedule.
LinearDynamics linearize(const Problem& problem, const Trajectory& traj);

// Euclidean distance from the final box position to the goal, in mm.
double positioning_error_mm(const Problem& problem, const Trajectory& traj);

// Integral of the virtual force magnitude over the whole trajectory: how
// much non-physical pushing the plan still relies on.
double physical_inaccuracy(const PlanarWorld& world, const Trajectory& traj);

}  // namespace citopt

#endif  // CITOPT_TRAJOPT_HPP
