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

#ifndef CITOPT_REPORT_HPP
#define CITOPT_REPORT_HPP

#include <vector>

#include "problem.hpp"

namespace citopt {

enum class SolveStatus { kConverged, kMaxIterations, kStalled, kDiverged };

const char* to_string(SolveStatus s);

// One backward/forward (or linearize/subproblem) cycle. Rejected cycles
// are recorded too; `iteration` repeats until a step is accepted.
struct IterationRecord {
  int iteration = 0;
  double cost = 0.0;             // objective after the cycle (unchanged if rejected)
  double cost_comparable = 0.0;  // running state penalty excluded
  double predicted_reduction = 0.0;
  double actual_reduction = 0.0;
  double ratio = 0.0;
  double step_scale = 0.0;      // trust radius or line search step
  double regularization = 0.0;  // value-Hessian shift (iLQR)
  bool accepted = false;
  double t_deriv = 0.0, t_solve = 0.0, t_forward = 0.0;  // seconds
};

struct SolverReport {
  SolveStatus status = SolveStatus::kMaxIterations;
  Trajectory trajectory;
  std::vector<IterationRecord> iterations;
  int accepted_iterations = 0;
  double initial_cost = 0.0;
  double final_cost = 0.0;
  double final_cost_comparable = 0.0;
  // First accepted iteration whose comparable cost drops below the
  // acceptability threshold; -1 if never reached.
  int iterations_to_acceptable = -1;
  double acceptable_threshold = 1.0;
  double total_time = 0.0;
};

}  // namespace citopt

#endif  // CITOPT_REPORT_HPP
