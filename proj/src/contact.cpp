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

#include "contact.hpp"

namespace citopt {

SpringContact point_box_spring(const BoxModel& box, const BoxPose& pose, const Vec2& point,
                               double stiffness) {
  SpringContact c;
  const Vec2 p = world_to_body(pose, point);
  if (std::abs(p.x()) > box.half_extents.x() || std::abs(p.y()) > box.half_extents.y()) return c;

  // Least penetrated face: the cheapest direction to separate.
  int face = 0;
  double depth = std::numeric_limits<double>::infinity();
  for (int e = 0; e < kBoxEdges; ++e) {
    const double d = edge_half_extent(box, e) - p.dot(edge_normal_body(e));
    if (d < depth) {
      depth = d;
      face = e;
    }
  }

  c.touching = true;
  c.depth = depth;
  const Vec2 outward = body_to_world_dir(pose, edge_normal_body(face));
  c.force_on_ee = stiffness * depth * outward;
  c.force_on_box = -c.force_on_ee;
  c.moment_on_box = cross2(point - pose.pos, c.force_on_box);
  return c;
}

PlanarWrench ground_friction(const BoxModel& box, const Vec2& vel, double omega, double eps) {
  const double load = box.friction_coeff * box.mass * box.normal_gravity;
  PlanarWrench w;
  const double speed = vel.norm();
  if (speed > 1e-12) w.force = -load * std::tanh(speed / eps) * vel / speed;
  const double r = box.torsion_radius();
  w.moment = -load * r * std::tanh(omega * r / eps);
  return w;
}

}  // namespace citopt
