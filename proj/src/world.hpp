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

#ifndef CITOPT_WORLD_HPP
#define CITOPT_WORLD_HPP

#include "contact.hpp"
#include "dynamics_model.hpp"
#include "robot_arm.hpp"
#include "vscm.hpp"

namespace citopt {

// State vector helpers for the arm-plus-box layout in types.hpp.
inline Vec4 arm_q(const Vec& x) { return x.segment<kArmDof>(kIdxQ); }
inline Vec4 arm_qd(const Vec& x) { return x.segment<kArmDof>(kIdxQd); }
inline BoxPose box_pose(const Vec& x) {
  return BoxPose{x.segment<2>(kIdxBoxPose), x(kIdxBoxPose + 2)};
}
inline Vec2 box_vel(const Vec& x) { return x.segment<2>(kIdxBoxVel); }
inline double box_omega(const Vec& x) { return x(kIdxBoxVel + 2); }

Vec pack_state(const Vec4& q, const Vec4& qd, const BoxPose& pose, const Vec2& vel, double omega);

// Planar arm pushing a box on a horizontal surface. One planner step of
// length step_duration is integrated with `substeps` semi-implicit Euler
// substeps; the virtual contact wrench is re-evaluated at every substep.
//
// Controls are [joint torques (4), contact gains (4)], held constant over
// the step. Bounds are not enforced here; the optimizers own them.
class PlanarWorld final : public DynamicsModel {
 public:
  RobotModel robot;
  BoxModel box;
  ContactParams contact;
  VscmParams vscm;
  double step_duration = 0.1;
  int substeps = 50;
  // Torques are commanded on top of exact gravity/Coriolis compensation.
  // Disable to integrate the raw chain (used by energy drift checks).
  bool compensate_bias = true;

  void validate() const;

  int state_dim() const override { return kStateDim; }
  int control_dim() const override { return kControlDim; }
  Vec step(const Vec& x, const Vec& u) const override;

  // Single inner integration step with an externally supplied virtual
  // wrench on the box. Exposed for tests; step() composes these.
  Vec substep(const Vec& x, const Vec& u, const PlanarWrench& virtual_wrench, double dt) const;

  // Time integral of the per-edge virtual force norm over one planner
  // step, the physical inconsistency this state/control pair injects.
  double step_virtual_impulse(const Vec& x, const Vec& u) const;

  double substep_dt() const { return step_duration / substeps; }

 private:
  Vec integrate(const Vec& x, const Vec& u, double* impulse) const;
};

}  // namespace citopt

#endif  // CITOPT_WORLD_HPP
