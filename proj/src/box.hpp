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

#ifndef CITOPT_BOX_HPP
#define CITOPT_BOX_HPP

#include "types.hpp"

namespace citopt {

// Rectangular slider resting on a horizontal plane. normal_gravity is the
// out-of-plane acceleration that loads the support surface; friction_coeff
// is the Coulomb coefficient against that surface.
struct BoxModel {
  Vec2 half_extents = Vec2(0.1, 0.1);
  double mass = 0.4;
  double inertia = 0.4 * (0.04 + 0.04) / 12.0;
  double friction_coeff = 0.75;
  double normal_gravity = 9.81;

  void validate() const {
    if (!(half_extents.minCoeff() > 0.0)) throw InvalidArgument("half_extents must be positive");
    if (!(mass > 0.0)) throw InvalidArgument("box mass must be positive");
    if (!(inertia > 0.0)) throw InvalidArgument("box inertia must be positive");
    if (friction_coeff < 0.0) throw InvalidArgument("friction_coeff must be nonnegative");
    if (normal_gravity < 0.0) throw InvalidArgument("normal_gravity must be nonnegative");
  }

  // Lever arm used by the torsional friction model.
  double torsion_radius() const { return 0.5 * (half_extents.x() + half_extents.y()); }
};

struct BoxPose {
  Vec2 pos = Vec2::Zero();
  double theta = 0.0;
};

inline Mat2 rotation(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Mat2 r;
  r << c, -s, s, c;
  return r;
}

inline Vec2 world_to_body(const BoxPose& pose, const Vec2& p) {
  return rotation(pose.theta).transpose() * (p - pose.pos);
}

inline Vec2 body_to_world_dir(const BoxPose& pose, const Vec2& d) {
  return rotation(pose.theta) * d;
}

// Outward unit normals of the four box edges in the body frame, indexed
// +x, +y, -x, -y. The same order is used for contact gains everywhere.
inline Vec2 edge_normal_body(int edge) {
  switch (edge) {
    case 0: return Vec2(1.0, 0.0);
    case 1: return Vec2(0.0, 1.0);
    case 2: return Vec2(-1.0, 0.0);
    case 3: return Vec2(0.0, -1.0);
    default: throw InvalidArgument("edge index out of range");
  }
}

inline double edge_half_extent(const BoxModel& box, int edge) {
  return (edge % 2 == 0) ? box.half_extents.x() : box.half_extents.y();
}

}  // namespace citopt

#endif  // CITOPT_BOX_HPP
