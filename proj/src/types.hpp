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

#ifndef CITOPT_TYPES_HPP
#define CITOPT_TYPES_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace citopt {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;

// Planar pushing scene dimensions. The solver stack itself is written
// against runtime dimensions; these constants only pin the layout of the
// arm-plus-box state vector.
inline constexpr int kArmDof = 4;
inline constexpr int kBoxEdges = 4;
inline constexpr int kStateDim = 2 * kArmDof + 6;   // q, qdot, box pose, box twist
inline constexpr int kControlDim = kArmDof + kBoxEdges;  // joint torques, contact gains

// State layout: [q(4), qdot(4), box x, box y, box theta, box vx, box vy, box omega].
inline constexpr int kIdxQ = 0;
inline constexpr int kIdxQd = kArmDof;
inline constexpr int kIdxBoxPose = 2 * kArmDof;
inline constexpr int kIdxBoxVel = 2 * kArmDof + 3;

struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown when a nonlinear rollout leaves the finite range (NaN/inf or a
// norm blowup). Carries the first offending step so callers can report it.
struct DivergenceError : std::runtime_error {
  int step;
  explicit DivergenceError(int step_)
      : std::runtime_error("trajectory diverged at step " + std::to_string(step_)),
        step(step_) {}
};

// 2D cross products. The scalar-vector form is the planar analogue of
// omega x r; the vector-vector form returns the z component.
inline Vec2 cross2(double w, const Vec2& r) { return Vec2(-w * r.y(), w * r.x()); }
inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  const double two_pi = 2.0 * M_PI;
  a = std::fmod(a, two_pi);
  if (a <= -M_PI) a += two_pi;
  if (a > M_PI) a -= two_pi;
  return a;
}

// Planar force/moment pair acting at a body's center of mass.
struct PlanarWrench {
  Vec2 force = Vec2::Zero();
  double moment = 0.0;

  PlanarWrench& operator+=(const PlanarWrench& o) {
    force += o.force;
    moment += o.moment;
    return *this;
  }
};

}  // namespace citopt

#endif  // CITOPT_TYPES_HPP
