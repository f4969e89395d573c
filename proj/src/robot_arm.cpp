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

#include "robot_arm.hpp"

namespace citopt {
namespace {

// Rotates a vector by +90 degrees; the column of a point Jacobian for a
// revolute joint is perp(p - joint).
inline Vec2 perp(const Vec2& v) { return Vec2(-v.y(), v.x()); }

struct LinkFrames {
  ArmKinematics kin;
  std::array<Vec2, kArmDof> com;
};

LinkFrames link_frames(const RobotModel& robot, const Vec4& q) {
  LinkFrames f;
  f.kin.joint[0] = robot.base;
  double theta = 0.0;
  for (int i = 0; i < kArmDof; ++i) {
    theta += q(i);
    f.kin.angle(i) = theta;
    const Vec2 axis(std::cos(theta), std::sin(theta));
    f.kin.joint[i + 1] = f.kin.joint[i] + robot.link_length(i) * axis;
    f.com[i] = f.kin.joint[i] + robot.com_offset(i) * axis;
  }
  return f;
}

// Translational Jacobian of a point rigidly attached to link `link`.
ArmJacobian point_jacobian(const LinkFrames& f, int link, const Vec2& point) {
  ArmJacobian jac = ArmJacobian::Zero();
  for (int j = 0; j <= link; ++j) jac.col(j) = perp(point - f.kin.joint[j]);
  return jac;
}

}  // namespace

void RobotModel::validate() const {
  for (int i = 0; i < kArmDof; ++i) {
    if (!(link_length(i) > 0.0)) throw InvalidArgument("link_length must be positive");
    if (!(link_mass(i) > 0.0)) throw InvalidArgument("link_mass must be positive");
    if (!(link_inertia(i) > 0.0)) throw InvalidArgument("link_inertia must be positive");
    if (com_offset(i) < 0.0 || com_offset(i) > link_length(i))
      throw InvalidArgument("com_offset must lie on the link");
    if (joint_damping(i) < 0.0) throw InvalidArgument("joint_damping must be nonnegative");
    if (!(tau_min(i) < 0.0 && 0.0 < tau_max(i)))
      throw InvalidArgument("torque limits must straddle zero");
  }
}

ArmKinematics forward_kinematics(const RobotModel& robot, const Vec4& q) {
  return link_frames(robot, q).kin;
}

Vec2 ee_position(const RobotModel& robot, const Vec4& q) {
  return forward_kinematics(robot, q).joint[kArmDof];
}

ArmJacobian ee_jacobian(const RobotModel& robot, const Vec4& q) {
  const LinkFrames f = link_frames(robot, q);
  return point_jacobian(f, kArmDof - 1, f.kin.joint[kArmDof]);
}

Vec2 ee_velocity(const RobotModel& robot, const Vec4& q, const Vec4& qd) {
  return ee_jacobian(robot, q) * qd;
}

Mat4 mass_matrix(const RobotModel& robot, const Vec4& q) {
  const LinkFrames f = link_frames(robot, q);
  Mat4 m = Mat4::Zero();
  for (int i = 0; i < kArmDof; ++i) {
    const ArmJacobian jv = point_jacobian(f, i, f.com[i]);
    m.noalias() += robot.link_mass(i) * jv.transpose() * jv;
    // The angular Jacobian of link i is ones on joints 0..i.
    for (int a = 0; a <= i; ++a)
      for (int b = 0; b <= i; ++b) m(a, b) += robot.link_inertia(i);
  }
  return m;
}

Vec4 bias_forces(const RobotModel& robot, const Vec4& q, const Vec4& qd) {
  const LinkFrames f = link_frames(robot, q);

  // COM accelerations with qdd = 0. Link angular accelerations vanish, so
  // each segment contributes only the centripetal term -w^2 (b - a).
  std::array<Vec2, kArmDof> com_acc;
  Vec2 joint_acc = Vec2::Zero();
  double w = 0.0;
  for (int i = 0; i < kArmDof; ++i) {
    w += qd(i);
    com_acc[i] = joint_acc - w * w * (f.com[i] - f.kin.joint[i]);
    joint_acc -= w * w * (f.kin.joint[i + 1] - f.kin.joint[i]);
  }

  Vec4 bias = Vec4::Zero();
  for (int i = 0; i < kArmDof; ++i) {
    const ArmJacobian jv = point_jacobian(f, i, f.com[i]);
    bias += jv.transpose() * (robot.link_mass(i) * (com_acc[i] - robot.gravity));
  }
  return bias;
}

double mechanical_energy(const RobotModel& robot, const Vec4& q, const Vec4& qd) {
  const LinkFrames f = link_frames(robot, q);
  double e = 0.0;
  double w = 0.0;
  for (int i = 0; i < kArmDof; ++i) {
    w += qd(i);
    const ArmJacobian jv = point_jacobian(f, i, f.com[i]);
    const Vec2 v = jv * qd;
    e += 0.5 * robot.link_mass(i) * v.squaredNorm() + 0.5 * robot.link_inertia(i) * w * w;
    e -= robot.link_mass(i) * robot.gravity.dot(f.com[i]);
  }
  return e;
}

}  // namespace citopt
