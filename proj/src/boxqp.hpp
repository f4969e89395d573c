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

#ifndef CITOPT_BOXQP_HPP
#define CITOPT_BOXQP_HPP

#include <vector>

#include "types.hpp"

namespace citopt {

// minimize 0.5 u'Hu + g'u subject to lo <= u <= hi, H positive definite.
// Projected Newton with exact clamping, so bounds hold to the bit.
struct BoxQpResult {
  Vec u;
  std::vector<bool> clamped;
  std::vector<int> free_idx;
  Eigen::LLT<Mat> free_llt;  // factorization of H restricted to free dims
  int iterations = 0;
  bool success = false;  // false when the free block is not PD
  double value = 0.0;
};

BoxQpResult box_qp(const Mat& h, const Vec& g, const Vec& lo, const Vec& hi, const Vec& u_init);

}  // namespace citopt

#endif  // CITOPT_BOXQP_HPP
