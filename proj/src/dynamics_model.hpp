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

#ifndef CITOPT_DYNAMICS_MODEL_HPP
#define CITOPT_DYNAMICS_MODEL_HPP

#include "types.hpp"

namespace citopt {

// Discrete-time plant as seen by the trajectory optimizers: one planner
// step maps (x, u) to the next state. Implementations must be pure
// functions of their arguments; linearization calls step concurrently.
class DynamicsModel {
 public:
  virtual ~DynamicsModel() = default;
  virtual int state_dim() const = 0;
  virtual int control_dim() const = 0;
  virtual Vec step(const Vec& x, const Vec& u) const = 0;
};

}  // namespace citopt

#endif  // CITOPT_DYNAMICS_MODEL_HPP
