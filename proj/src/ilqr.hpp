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

#ifndef CITOPT_ILQR_HPP
#define CITOPT_ILQR_HPP

#include "report.hpp"
#include "trajopt.hpp"

namespace citopt {

struct IlqrParams {
  int max_iterations = 100;
  double cost_tol = 1e-4;  // |accepted cost change| below this terminates
  double reg_init = 1e-6;
  double reg_min = 1e-9;
  double reg_max = 1e9;
  double reg_up = 10.0;    // factor on backward/line-search failure
  double reg_down = 2.0;   // divisor on success
  int line_search_steps = 10;  // geometric 1 .. 1e-3
  double accept_ratio = 0.1;   // actual/expected reduction gate
  double acceptable_cost = 1.0;

  void validate() const;
};

// Control-limited iterative LQR. The backward pass solves a box QP per
// step for the feedforward and zeroes feedback rows on clamped controls;
// the forward pass clamps and backtracks on the step length. Control
// bounds therefore hold exactly on every iterate; state bounds in the
// problem are ignored by this solver.
SolverReport solve_ilqr(const Problem& problem, const IlqrParams& params,
                        const std::vector<Vec>& u_init);

// Single backward pass at a fixed regularization, exposed for tests.
struct BackwardPass {
  bool ok = false;  // false when a free Hessian block is not PD
  std::vector<Vec> k;
  std::vector<Mat> kk;
  double d1 = 0.0;  // expected reduction coefficients
  double d2 = 0.0;
};
BackwardPass ilqr_backward(const Problem& problem, const Trajectory& traj,
                           const LinearDynamics& lin, double reg);

}  // namespace citopt

#endif  // CITOPT_ILQR_HPP
