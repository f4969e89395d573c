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

#ifndef CITOPT_CONTACT_HPP
#define CITOPT_CONTACT_HPP

#include "box.hpp"

namespace citopt {

struct ContactParams {
  double spring_stiffness = 1e4;
  // tanh scale of the friction law. The integrator caps the friction
  // impulse at a full stop, so this only shapes the force near rest.
  double vel_smoothing = 1e-3;

  void validate() const {
    if (!(spring_stiffness > 0.0)) throw InvalidArgument("spring_stiffness must be positive");
    if (!(vel_smoothing > 0.0)) throw InvalidArgument("vel_smoothing must be positive");
  }
};

// Frictionless penalty contact between the end-effector point and the box.
// When the point is inside the box it is pushed out along the least
// penetrated face; the box feels the equal and opposite force.
struct SpringContact {
  bool touching = false;
  double depth = 0.0;
  Vec2 force_on_ee = Vec2::Zero();
  Vec2 force_on_box = Vec2::Zero();
  double moment_on_box = 0.0;
};

SpringContact point_box_spring(const BoxModel& box, const BoxPose& pose, const Vec2& point,
                               double stiffness);

// Support-surface friction on the sliding box: smoothed Coulomb force
// saturating at mu * m * g, plus a torsional moment with the same shape.
// Always dissipative.
PlanarWrench ground_friction(const BoxModel& box, const Vec2& vel, double omega, double eps);

}  // namespace citopt

#endif  // CITOPT_CONTACT_HPP
