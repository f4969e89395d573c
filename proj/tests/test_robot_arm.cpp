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

#include <doctest.h>

#include <random>

#include "robot_arm.hpp"

using namespace citopt;

namespace {

// Shrinks links 3 and 4 to negligible mass so the chain reduces to the
// textbook two-link arm, for which closed forms exist.
RobotModel two_link_like(double l1, double l2, double m1, double m2, double i1, double i2,
                         double r1, double r2) {
  RobotModel robot;
  robot.link_length << l1, l2, 1e-3, 1e-3;
  robot.link_mass << m1, m2, 1e-12, 1e-12;
  robot.link_inertia << i1, i2, 1e-15, 1e-15;
  robot.com_offset << r1, r2, 5e-4, 5e-4;
  robot.joint_damping.setZero();
  return robot;
}

Vec4 rand_vec4(std::mt19937& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return Vec4(d(rng), d(rng), d(rng), d(rng));
}

}  // namespace

TEST_CASE("forward kinematics of the straight arm") {
  RobotModel robot;
  const ArmKinematics kin = forward_kinematics(robot, Vec4::Zero());
  for (int i = 0; i <= kArmDof; ++i) {
    CHECK(kin.joint[i].x() == doctest::Approx(0.3 * i).epsilon(1e-12));
    CHECK(kin.joint[i].y() == doctest::Approx(0.0).epsilon(1e-12));
  }
  CHECK(ee_position(robot, Vec4::Zero()).x() == doctest::Approx(1.2));
}

TEST_CASE("forward kinematics of the zigzag start posture") {
  // Joint angles chosen so the tip lands at (0.38, 0) with alternating
  // elbow directions; each link advances x by 0.095.
  RobotModel robot;
  const double a = std::acos(0.38 / 1.2);
  Vec4 q;
  q << a, -2.0 * a, 2.0 * a, -2.0 * a;
  const Vec2 tip = ee_position(robot, q);
  CHECK(tip.x() == doctest::Approx(0.38).epsilon(1e-10));
  CHECK(tip.y() == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("mass matrix matches the two-link closed form") {
  const double l1 = 0.4, l2 = 0.25, m1 = 0.8, m2 = 0.6, i1 = 0.011, i2 = 0.007;
  const double r1 = 0.21, r2 = 0.12;
  RobotModel robot = two_link_like(l1, l2, m1, m2, i1, i2, r1, r2);

  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Vec4 q = rand_vec4(rng, -3.0, 3.0);
    const Mat4 m = mass_matrix(robot, q);
    const double c2 = std::cos(q(1));
    const double m11 = i1 + i2 + m1 * r1 * r1 + m2 * (l1 * l1 + r2 * r2 + 2.0 * l1 * r2 * c2);
    const double m12 = i2 + m2 * (r2 * r2 + l1 * r2 * c2);
    const double m22 = i2 + m2 * r2 * r2;
    CHECK(m(0, 0) == doctest::Approx(m11).epsilon(1e-8));
    CHECK(m(0, 1) == doctest::Approx(m12).epsilon(1e-8));
    CHECK(m(1, 0) == doctest::Approx(m12).epsilon(1e-8));
    CHECK(m(1, 1) == doctest::Approx(m22).epsilon(1e-8));
  }
}

TEST_CASE("bias forces match the two-link closed form") {
  const double l1 = 0.4, l2 = 0.25, m1 = 0.8, m2 = 0.6;
  RobotModel robot = two_link_like(l1, l2, m1, m2, 0.011, 0.007, 0.21, 0.12);
  const double r2 = 0.12;

  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Vec4 q = rand_vec4(rng, -3.0, 3.0);
    Vec4 qd = rand_vec4(rng, -2.0, 2.0);
    q(2) = q(3) = 0.0;
    qd(2) = qd(3) = 0.0;
    const Vec4 bias = bias_forces(robot, q, qd);
    const double h = m2 * l1 * r2 * std::sin(q(1));
    const double c1 = -h * (2.0 * qd(0) * qd(1) + qd(1) * qd(1));
    const double c2 = h * qd(0) * qd(0);
    CHECK(bias(0) == doctest::Approx(c1).epsilon(1e-6).scale(1.0));
    CHECK(bias(1) == doctest::Approx(c2).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("gravity torque of a hanging single link") {
  RobotModel robot = two_link_like(0.5, 1e-3, 1.2, 1e-12, 0.02, 1e-15, 0.3, 5e-4);
  robot.gravity = Vec2(0.0, -9.81);
  std::mt19937 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    Vec4 q = Vec4::Zero();
    q(0) = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
    const Vec4 bias = bias_forces(robot, q, Vec4::Zero());
    CHECK(bias(0) == doctest::Approx(1.2 * 9.81 * 0.3 * std::cos(q(0))).epsilon(1e-8));
  }
}

TEST_CASE("mass matrix is symmetric positive definite") {
  RobotModel robot;
  std::mt19937 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec4 q = rand_vec4(rng, -M_PI, M_PI);
    const Mat4 m = mass_matrix(robot, q);
    CHECK((m - m.transpose()).lpNorm<Eigen::Infinity>() < 1e-12);
    const Eigen::SelfAdjointEigenSolver<Mat4> es(m);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("mass matrix is 2pi-periodic in every joint") {
  RobotModel robot;
  std::mt19937 rng(29);
  const Vec4 q = rand_vec4(rng, -1.0, 1.0);
  for (int j = 0; j < kArmDof; ++j) {
    Vec4 shifted = q;
    shifted(j) += 2.0 * M_PI;
    CHECK((mass_matrix(robot, q) - mass_matrix(robot, shifted)).lpNorm<Eigen::Infinity>() <
          1e-10);
  }
}

TEST_CASE("velocity bias is quadratic in joint rates") {
  RobotModel robot;  // zero gravity: bias is purely the velocity term
  std::mt19937 rng(31);
  const Vec4 q = rand_vec4(rng, -2.0, 2.0);
  const Vec4 qd = rand_vec4(rng, -1.5, 1.5);
  const Vec4 b1 = bias_forces(robot, q, qd);
  const Vec4 b2 = bias_forces(robot, q, 2.0 * qd);
  CHECK((b2 - 4.0 * b1).lpNorm<Eigen::Infinity>() < 1e-10);
  CHECK(bias_forces(robot, q, Vec4::Zero()).lpNorm<Eigen::Infinity>() < 1e-14);
}

TEST_CASE("end effector jacobian matches finite differences") {
  RobotModel robot;
  std::mt19937 rng(37);
  const Vec4 q = rand_vec4(rng, -2.0, 2.0);
  const ArmJacobian jac = ee_jacobian(robot, q);
  const double h = 1e-7;
  for (int j = 0; j < kArmDof; ++j) {
    Vec4 lo = q, hi = q;
    lo(j) -= h;
    hi(j) += h;
    const Vec2 fd = (ee_position(robot, hi) - ee_position(robot, lo)) / (2.0 * h);
    CHECK((jac.col(j) - fd).norm() < 1e-6);
  }
}

TEST_CASE("model validation rejects bad parameters") {
  RobotModel robot;
  robot.link_mass(1) = 0.0;
  CHECK_THROWS_AS(robot.validate(), InvalidArgument);
  robot = RobotModel{};
  robot.com_offset(2) = 0.4;  // beyond the link
  CHECK_THROWS_AS(robot.validate(), InvalidArgument);
  robot = RobotModel{};
  robot.tau_min(0) = 0.5;  // limits must straddle zero
  CHECK_THROWS_AS(robot.validate(), InvalidArgument);
  CHECK_NOTHROW(RobotModel{}.validate());
}

TEST_CASE("mechanical energy of a swinging single link") {
  RobotModel robot = two_link_like(0.5, 1e-3, 1.2, 1e-12, 0.02, 1e-15, 0.3, 5e-4);
  robot.gravity = Vec2(0.0, -9.81);
  Vec4 q = Vec4::Zero(), qd = Vec4::Zero();
  q(0) = 0.7;
  qd(0) = 1.3;
  const double expect = 0.5 * (0.02 + 1.2 * 0.3 * 0.3) * 1.3 * 1.3 +
                        1.2 * 9.81 * 0.3 * std::sin(0.7);
  CHECK(mechanical_energy(robot, q, qd) == doctest::Approx(expect).epsilon(1e-9));
}
