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

#ifndef CITOPT_BENCH_HPP
#define CITOPT_BENCH_HPP

#include "config.hpp"
#include "report.hpp"

namespace citopt {

// Scene construction shared by every run. The end effector starts on the
// ray from the arm base through `ee_target`, reached with an elbow-up
// zigzag, so all of the box's faces stay reachable.
Vec4 arm_pose_for(const RobotModel& robot, const Vec2& ee_target);

// World configured for one planner-step discretization.
PlanarWorld make_world(const BenchConfig& cfg);

// Optimal control problem for the configured task. `world` must outlive
// the returned problem. solver_velocity_penalty toggles the running
// velocity cost (on for ilqr runs).
Problem make_problem(const BenchConfig& cfg, const PlanarWorld& world);

// Trivial initial guess: zero torques, gains at k_init.
std::vector<Vec> initial_guess(const BenchConfig& cfg);

// Flat record of everything the comparison tables consume. Timing fields
// are wall-clock totals; per-iteration means are derived in the tables.
struct RunMetrics {
  std::string task;
  std::string solver;
  std::string status;
  double horizon_s = 0.0;
  int n_steps = 0;
  std::uint64_t seed = 0;
  double initial_cost = 0.0;
  double final_cost = 0.0;
  double final_cost_comparable = 0.0;  // running velocity penalty excluded
  int accepted_iterations = 0;
  int total_cycles = 0;  // accepted + rejected
  int iterations_to_acceptable = -1;
  double psi_ns = 0.0;          // integral of virtual force norm, N*s
  double pos_error_m = 0.0;     // final box position vs goal
  double theta_error_rad = 0.0;
  double mean_gain = 0.0;       // mean k over steps and edges
  double max_abs_torque = 0.0;
  double max_gain = 0.0;
  double t_deriv_s = 0.0;
  double t_solve_s = 0.0;
  double t_forward_s = 0.0;
  double t_total_s = 0.0;

  nlohmann::json to_json() const;
  static RunMetrics from_json(const nlohmann::json& j);
};

struct RunArtifact {
  nlohmann::json config;  // resolved snapshot; re-running it reproduces the trajectory
  SolverReport report;
  RunMetrics metrics;
  std::string dir;  // empty when no files were written
};

// Executes the configured solver on the configured task. When
// cfg.out_dir is nonempty, writes config.json, convergence.csv,
// trajectory.json, and metrics.json there. A stalled or unconverged solve
// still produces a full artifact; only invalid configs and I/O failures
// throw.
RunArtifact run(const BenchConfig& cfg);

// One run per horizon with N re-derived to keep planner steps near 0.1 s.
// Artifacts land in "<out_dir>/h<horizon>" when out_dir is set; the
// per-horizon table goes to sweep.csv there and is also returned.
std::vector<RunArtifact> sweep_horizon(const BenchConfig& cfg, const std::vector<double>& horizons);

// CSV emitters. Schemas are fixed; units are embedded in the headers.
std::string convergence_csv(const SolverReport& report);
std::string sweep_csv(const std::vector<RunArtifact>& artifacts);

// Quality-plus-timing table over a set of runs, one row per run plus one
// cross-task mean row per solver. Cost columns use the comparable cost
// (velocity penalty excluded). Throws when solvers were run on differing
// task sets.
std::string comparison_csv(const std::vector<RunMetrics>& metrics);

nlohmann::json trajectory_json(const BenchConfig& cfg, const Trajectory& traj);

}  // namespace citopt

#endif  // CITOPT_BENCH_HPP
