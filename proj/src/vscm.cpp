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

#include "vscm.hpp"

#include <algorithm>
#include <limits>

namespace citopt {

double edge_gap(const BoxModel& box, const BoxPose& pose, const Vec2& point, int edge) {
  const Vec2 p = world_to_body(pose, point);

  // Only the face the point entered through may report a negative gap.
  // Giving every face a plane distance would let the far side of the box
  // exert an exp(alpha * depth) phantom force the moment the point crosses
  // the near surface.
  double plane_max = -std::numeric_limits<double>::infinity();
  int exit_face = 0;
  for (int e = 0; e < kBoxEdges; ++e) {
    const double d = p.dot(edge_normal_body(e)) - edge_half_extent(box, e);
    if (d > plane_max) {
      plane_max = d;
      exit_face = e;
    }
  }
  if (plane_max <= 0.0 && edge == exit_face) return plane_max;

  // Distance to the edge segment. Clamp the tangential coordinate to the
  // edge extent so corner regions measure to the corner, not the plane.
  const Vec2 n = edge_normal_body(edge);
  const double h = edge_half_extent(box, edge);
  const double t_half = (edge % 2 == 0) ? box.half_extents.y() : box.half_extents.x();
  const Vec2 t(-n.y(), n.x());
  const double along = std::clamp(p.dot(t), -t_half, t_half);
  const Vec2 closest = h * n + along * t;
  return (p - closest).norm();
}

double virtual_force_magnitude(double k, double alpha, double gap) {
  if (k < 0.0) throw InvalidArgument("contact gain must be nonnegative");
  return k * std::exp(-alpha * gap);
}

PlanarWrench virtual_wrench(double gamma, const Vec2& direction, const Vec2& lever) {
  PlanarWrench w;
  w.force = gamma * direction;
  w.moment = cross2(lever, w.force);
  return w;
}

Vec4 virtual_force_magnitudes(const BoxModel& box, const VscmParams& vscm, const BoxPose& pose,
                              const Vec2& point, const Vec4& gains) {
  Vec4 gamma;
  for (int e = 0; e < kBoxEdges; ++e)
    gamma(e) = virtual_force_magnitude(gains(e), vscm.alpha, edge_gap(box, pose, point, e));
  return gamma;
}

PlanarWrench net_virtual_wrench(const BoxModel& box, const VscmParams& vscm, const BoxPose& pose,
                                const Vec2& point, const Vec4& gains) {
  const Vec4 gamma = virtual_force_magnitudes(box, vscm, pose, point, gains);
  const Vec2 lever = point - pose.pos;
  PlanarWrench total;
  for (int e = 0; e < kBoxEdges; ++e) {
    const Vec2 inward = -body_to_world_dir(pose, edge_normal_body(e));
    total += virtual_wrench(gamma(e), inward, lever);
  }
  return total;
}

}  // namespace citopt
