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

#ifndef CITOPT_VSCM_HPP
#define CITOPT_VSCM_HPP

#include "box.hpp"

namespace citopt {

// Variable smooth contact model: each end-effector/edge pair carries a
// virtual force gamma = k * exp(-alpha * phi) that acts on the box from
// any distance. The gains k are decision variables of the planner and are
// driven to zero as the motion becomes physically consistent; alpha sets
// how fast the force decays with the gap.
struct VscmParams {
  double alpha = 15.0;
  double k_max = 5.0;
  double k_init = 5.0;

  void validate() const {
    if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
    if (!(k_max > 0.0)) throw InvalidArgument("k_max must be positive");
    if (k_init < 0.0 || k_init > k_max) throw InvalidArgument("k_init must lie in [0, k_max]");
  }
};

// Gap between a point and one box edge. Outside the box this is the
// (positive) Euclidean distance to the edge segment, so faces the point
// does not border decay the virtual force instead of amplifying it; inside
// the box only the least-penetrated face reports its (negative) plane
// distance, every other face keeps its positive segment distance.
double edge_gap(const BoxModel& box, const BoxPose& pose, const Vec2& point, int edge);

// gamma = k * exp(-alpha * gap). Errors on a negative gain; the planner
// keeps k within bounds, anything below zero is a caller bug.
double virtual_force_magnitude(double k, double alpha, double gap);

// Wrench on the box from a force of magnitude gamma along `direction`
// applied at `point`. Moment is taken about the box center of mass.
PlanarWrench virtual_wrench(double gamma, const Vec2& direction, const Vec2& lever);

// Per-edge force magnitudes for the current gains.
Vec4 virtual_force_magnitudes(const BoxModel& box, const VscmParams& vscm, const BoxPose& pose,
                              const Vec2& point, const Vec4& gains);

// Total virtual wrench on the box: each edge pushes inward along its own
// normal. The arm feels no reaction; the mismatch is what the planner
// penalizes away.
PlanarWrench net_virtual_wrench(const BoxModel& box, const VscmParams& vscm, const BoxPose& pose,
                                const Vec2& point, const Vec4& gains);

}  // namespace citopt

#endif  // CITOPT_VSCM_HPP
