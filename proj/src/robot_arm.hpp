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

#ifndef CITOPT_ROBOT_ARM_HPP
#define CITOPT_ROBOT_ARM_HPP

#include <array>

#include "types.hpp"

namespace citopt {

// Planar serial arm with revolute joints. Link i spans from joint i to
// joint i+1 along its local x axis; the center of mass sits com_offset(i)
// from the proximal joint. gravity is the in-plane acceleration vector and
// is (0, 0) for a horizontal workspace.
struct RobotModel {
  Vec2 base = Vec2::Zero();
  Vec4 link_length = Vec4::Constant(0.3);
  Vec4 link_mass = Vec4::Constant(0.5);
  Vec4 link_inertia = Vec4::Constant(0.00375);  // about the COM
  Vec4 com_offset = Vec4::Constant(0.15);
  Vec4 joint_damping = Vec4::Constant(0.05);
  Vec2 gravity = Vec2::Zero();
  Vec4 tau_min = Vec4::Constant(-1.0);
  Vec4 tau_max = Vec4::Constant(1.0);

  void validate() const;
};

// Forward kinematics snapshot. joint[0] is the base, joint[kArmDof] the
// end effector point; angle(i) is the world orientation of link i.
struct ArmKinematics {
  std::array<Vec2, kArmDof + 1> joint;
  Vec4 angle;
};

using ArmJacobian = Eigen::Matrix<double, 2, kArmDof>;

ArmKinematics forward_kinematics(const RobotModel& robot, const Vec4& q);

Vec2 ee_position(const RobotModel& robot, const Vec4& q);

// Translational Jacobian of the end effector point.
ArmJacobian ee_jacobian(const RobotModel& robot, const Vec4& q);

Vec2 ee_velocity(const RobotModel& robot, const Vec4& q, const Vec4& qd);

// Joint-space inertia matrix, symmetric positive definite for any valid
// model.
Mat4 mass_matrix(const RobotModel& robot, const Vec4& q);

// Coriolis/centrifugal plus gravity torques, so the unforced chain obeys
// M(q) qdd + bias(q, qd) = 0. Joint damping is applied separately by the
// caller; the velocity-dependent part here is exactly quadratic in qd.
Vec4 bias_forces(const RobotModel& robot, const Vec4& q, const Vec4& qd);

// Kinetic plus potential energy, used by integrator drift checks.
double mechanical_energy(const RobotModel& robot, const Vec4& q, const Vec4& qd);

}  // namespace citopt

#endif  // CITOPT_ROBOT_ARM_HPP
