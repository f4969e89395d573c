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

#include "world.hpp"

#include <algorithm>
#include <cmath>

namespace citopt {

Vec pack_state(const Vec4& q, const Vec4& qd, const BoxPose& pose, const Vec2& vel, double omega) {
  Vec x(kStateDim);
  x.segment<kArmDof>(kIdxQ) = q;
  x.segment<kArmDof>(kIdxQd) = qd;
  x.segment<2>(kIdxBoxPose) = pose.pos;
  x(kIdxBoxPose + 2) = pose.theta;
  x.segment<2>(kIdxBoxVel) = vel;
  x(kIdxBoxVel + 2) = omega;
  return x;
}

void PlanarWorld::validate() const {
  robot.validate();
  box.validate();
  contact.validate();
  vscm.validate();
  if (!(step_duration > 0.0)) throw InvalidArgument("step_duration must be positive");
  if (substeps < 1) throw InvalidArgument("substeps must be at least 1");
}

Vec PlanarWorld::substep(const Vec& x, const Vec& u, const PlanarWrench& virtual_wrench,
                         double dt) const {
  const Vec4 q = arm_q(x);
  const Vec4 qd = arm_qd(x);
  const BoxPose pose = box_pose(x);
  const Vec2 vel = box_vel(x);
  const double omega = box_omega(x);
  const Vec4 tau = u.head<kArmDof>();

  const Vec2 ee = ee_position(robot, q);
  const SpringContact spring = point_box_spring(box, pose, ee, contact.spring_stiffness);

  // Arm: M qdd + bias + D qd = tau + bias_compensation + J^T f_contact.
  Vec4 rhs = tau - robot.joint_damping.cwiseProduct(qd);
  if (!compensate_bias) rhs -= bias_forces(robot, q, qd);
  if (spring.touching) rhs += ee_jacobian(robot, q).transpose() * spring.force_on_ee;
  const Vec4 qdd = mass_matrix(robot, q).ldlt().solve(rhs);

  // Box: spring reaction and the virtual wrench integrate explicitly; the
  // virtual forces act on the box only, the arm feels no reaction.
  const Vec2 force = spring.force_on_box + virtual_wrench.force;
  const double moment = spring.moment_on_box + virtual_wrench.moment;

  // Semi-implicit Euler: velocities first, positions with the new
  // velocities.
  const Vec4 qd_next = qd + dt * qdd;
  Vec2 vel_next = vel + dt * force / box.mass;
  double omega_next = omega + dt * moment / box.inertia;

  // Ground friction comes last as an impulse that may stop the box within
  // the substep but never reverse it. The smoothing scale sits far below
  // the velocity one substep of threshold force produces, so evaluating
  // the law at the pre-friction velocity keeps sub-threshold pushes
  // stationary instead of rattling the box around zero velocity.
  const PlanarWrench friction =
      ground_friction(box, vel_next, omega_next, contact.vel_smoothing);
  const double speed = vel_next.norm();
  if (speed > 1e-12)
    vel_next *= 1.0 - std::min(dt * friction.force.norm() / (box.mass * speed), 1.0);
  const double spin = std::abs(omega_next);
  if (spin > 1e-12)
    omega_next *= 1.0 - std::min(dt * std::abs(friction.moment) / (box.inertia * spin), 1.0);

  BoxPose pose_next;
  pose_next.pos = pose.pos + dt * vel_next;
  pose_next.theta = pose.theta + dt * omega_next;

  return pack_state(q + dt * qd_next, qd_next, pose_next, vel_next, omega_next);
}

Vec PlanarWorld::integrate(const Vec& x, const Vec& u, double* impulse) const {
  if (x.size() != kStateDim || u.size() != kControlDim)
    throw InvalidArgument("state/control size mismatch");
  const double dt = substep_dt();
  const Vec4 gains = u.tail<kBoxEdges>();
  Vec cur = x;
  for (int i = 0; i < substeps; ++i) {
    const BoxPose pose = box_pose(cur);
    const Vec2 ee = ee_position(robot, arm_q(cur));
    const Vec4 gamma = virtual_force_magnitudes(box, vscm, pose, ee, gains);
    if (impulse) *impulse += gamma.norm() * dt;

    const Vec2 lever = ee - pose.pos;
    PlanarWrench vw;
    for (int e = 0; e < kBoxEdges; ++e)
      vw += virtual_wrench(gamma(e), -body_to_world_dir(pose, edge_normal_body(e)), lever);

    cur = substep(cur, u, vw, dt);
  }
  return cur;
}

Vec PlanarWorld::step(const Vec& x, const Vec& u) const { return integrate(x, u, nullptr); }

double PlanarWorld::step_virtual_impulse(const Vec& x, const Vec& u) const {
  double impulse = 0.0;
  integrate(x, u, &impulse);
  return impulse;
}

}  // namespace citopt
