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

#include "bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace citopt {

using nlohmann::json;

Vec4 arm_pose_for(const RobotModel& robot, const Vec2& ee_target) {
  // Equal-length links fold into an exact zigzag: alternating +-beta link
  // angles put the end effector at distance L*cos(beta) along the ray.
  const double l = robot.link_length(0);
  for (int i = 1; i < kArmDof; ++i)
    if (std::abs(robot.link_length(i) - l) > 1e-12)
      throw InvalidArgument("arm_pose_for requires equal link lengths");

  const Vec2 rel = ee_target - robot.base;
  const double total = robot.link_length.sum();
  const double d = std::clamp(rel.norm(), 0.05 * total, 0.98 * total);
  const double beta = std::acos(d / total);
  const double heading = std::atan2(rel.y(), rel.x());
  return Vec4(heading + beta, -2.0 * beta, 2.0 * beta, -2.0 * beta);
}

PlanarWorld make_world(const BenchConfig& cfg) {
  PlanarWorld world;
  world.robot = cfg.robot;
  world.box = cfg.box;
  world.contact = cfg.contact;
  world.vscm = cfg.vscm;
  world.step_duration = cfg.step_duration();
  world.substeps = cfg.substeps();
  world.validate();
  return world;
}

Problem make_problem(const BenchConfig& cfg, const PlanarWorld& world) {
  const Vec2 ee_start(cfg.box_start.x() + cfg.box.half_extents.x() + cfg.standoff,
                      cfg.box_start.y());
  const Vec4 q0 = arm_pose_for(cfg.robot, ee_start);

  Problem p;
  p.model = &world;
  p.horizon = cfg.steps();
  p.x0 = pack_state(q0, Vec4::Zero(), BoxPose{cfg.box_start, 0.0}, Vec2::Zero(), 0.0);

  p.goal = Vec::Zero(kStateDim);
  p.goal(kIdxBoxPose) = cfg.goal_pos.x();
  p.goal(kIdxBoxPose + 1) = cfg.goal_pos.y();
  p.goal(kIdxBoxPose + 2) = cfg.goal_theta;

  p.final_weight = Vec::Zero(kStateDim);
  p.final_weight(kIdxBoxPose) = cfg.w_pos;
  p.final_weight(kIdxBoxPose + 1) = cfg.w_pos;
  p.final_weight(kIdxBoxPose + 2) = cfg.w_theta;
  p.wrap_indices = {kIdxBoxPose + 2};

  p.state_weight = Vec::Zero(kStateDim);
  if (cfg.solver == "ilqr") {
    for (int i = 0; i < kArmDof; ++i) p.state_weight(kIdxQd + i) = cfg.w_vel;
    for (int i = 0; i < 3; ++i) p.state_weight(kIdxBoxVel + i) = cfg.w_vel;
  }

  p.control_weight = Vec::Zero(kControlDim);
  for (int i = 0; i < kBoxEdges; ++i) p.control_weight(kArmDof + i) = cfg.w_gain;

  p.u_min = Vec::Zero(kControlDim);
  p.u_max = Vec::Zero(kControlDim);
  for (int i = 0; i < kArmDof; ++i) {
    p.u_min(i) = -cfg.tau_limit;
    p.u_max(i) = cfg.tau_limit;
  }
  for (int i = 0; i < kBoxEdges; ++i) {
    p.u_min(kArmDof + i) = 0.0;
    p.u_max(kArmDof + i) = cfg.vscm.k_max;
  }

  p.finish_defaults();
  p.validate();
  return p;
}

std::vector<Vec> initial_guess(const BenchConfig& cfg) {
  Vec u = Vec::Zero(kControlDim);
  for (int i = 0; i < kBoxEdges; ++i) u(kArmDof + i) = cfg.vscm.k_init;
  return std::vector<Vec>(cfg.steps(), u);
}

json RunMetrics::to_json() const {
  return json{{"task", task},
              {"solver", solver},
              {"status", status},
              {"horizon_s", horizon_s},
              {"n_steps", n_steps},
              {"seed", seed},
              {"initial_cost", initial_cost},
              {"final_cost", final_cost},
              {"final_cost_comparable", final_cost_comparable},
              {"accepted_iterations", accepted_iterations},
              {"total_cycles", total_cycles},
              {"iterations_to_acceptable", iterations_to_acceptable},
              {"psi_ns", psi_ns},
              {"pos_error_m", pos_error_m},
              {"theta_error_rad", theta_error_rad},
              {"mean_gain", mean_gain},
              {"max_abs_torque", max_abs_torque},
              {"max_gain", max_gain},
              {"t_deriv_s", t_deriv_s},
              {"t_solve_s", t_solve_s},
              {"t_forward_s", t_forward_s},
              {"t_total_s", t_total_s}};
}

RunMetrics RunMetrics::from_json(const json& j) {
  RunMetrics m;
  try {
    m.task = j.at("task").get<std::string>();
    m.solver = j.at("solver").get<std::string>();
    m.status = j.at("status").get<std::string>();
    m.horizon_s = j.at("horizon_s").get<double>();
    m.n_steps = j.at("n_steps").get<int>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.initial_cost = j.at("initial_cost").get<double>();
    m.final_cost = j.at("final_cost").get<double>();
    m.final_cost_comparable = j.at("final_cost_comparable").get<double>();
    m.accepted_iterations = j.at("accepted_iterations").get<int>();
    m.total_cycles = j.at("total_cycles").get<int>();
    m.iterations_to_acceptable = j.at("iterations_to_acceptable").get<int>();
    m.psi_ns = j.at("psi_ns").get<double>();
    m.pos_error_m = j.at("pos_error_m").get<double>();
    m.theta_error_rad = j.at("theta_error_rad").get<double>();
    m.mean_gain = j.at("mean_gain").get<double>();
    m.max_abs_torque = j.at("max_abs_torque").get<double>();
    m.max_gain = j.at("max_gain").get<double>();
    m.t_deriv_s = j.at("t_deriv_s").get<double>();
    m.t_solve_s = j.at("t_solve_s").get<double>();
    m.t_forward_s = j.at("t_forward_s").get<double>();
    m.t_total_s = j.at("t_total_s").get<double>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid metrics record: ") + e.what());
  }
  return m;
}

namespace {

std::string format_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RunMetrics compute_metrics(const BenchConfig& cfg, const PlanarWorld& world,
                           const SolverReport& report) {
  RunMetrics m;
  m.task = cfg.task;
  m.solver = cfg.solver;
  m.status = to_string(report.status);
  m.horizon_s = cfg.horizon;
  m.n_steps = cfg.steps();
  m.seed = cfg.seed;
  m.initial_cost = report.initial_cost;
  m.final_cost = report.final_cost;
  m.final_cost_comparable = report.final_cost_comparable;
  m.accepted_iterations = report.accepted_iterations;
  m.total_cycles = static_cast<int>(report.iterations.size());
  m.iterations_to_acceptable = report.iterations_to_acceptable;

  const Trajectory& traj = report.trajectory;
  for (size_t i = 0; i < traj.u.size(); ++i)
    m.psi_ns += world.step_virtual_impulse(traj.x[i], traj.u[i]);

  const Vec& xn = traj.x.back();
  m.pos_error_m = (xn.segment<2>(kIdxBoxPose) - cfg.goal_pos).norm();
  m.theta_error_rad = std::abs(wrap_angle(xn(kIdxBoxPose + 2) - cfg.goal_theta));

  double gain_sum = 0.0;
  for (const Vec& u : traj.u) {
    m.max_abs_torque = std::max(m.max_abs_torque, u.head(kArmDof).cwiseAbs().maxCoeff());
    m.max_gain = std::max(m.max_gain, u.tail(kBoxEdges).maxCoeff());
    gain_sum += u.tail(kBoxEdges).sum();
  }
  if (!traj.u.empty()) m.mean_gain = gain_sum / (kBoxEdges * traj.u.size());

  for (const IterationRecord& rec : report.iterations) {
    m.t_deriv_s += rec.t_deriv;
    m.t_solve_s += rec.t_solve;
    m.t_forward_s += rec.t_forward;
  }
  m.t_total_s = report.total_time;
  return m;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("failed to write " + path.string());
}

void write_artifacts(const RunArtifact& artifact) {
  const std::filesystem::path dir(artifact.dir);
  std::filesystem::create_directories(dir);
  write_file(dir / "config.json", artifact.config.dump(2) + "\n");
  write_file(dir / "convergence.csv", convergence_csv(artifact.report));
  write_file(dir / "metrics.json", artifact.metrics.to_json().dump(2) + "\n");
}

}  // namespace

std::string convergence_csv(const SolverReport& report) {
  std::ostringstream os;
  os << "iter,cost,cost_comparable,actual_reduction,predicted_reduction,ratio,"
        "step_scale,regularization,accepted,t_deriv_s,t_solve_s,t_forward_s\n";
  for (const IterationRecord& r : report.iterations) {
    os << r.iteration << ',' << format_num(r.cost) << ',' << format_num(r.cost_comparable) << ','
       << format_num(r.actual_reduction) << ',' << format_num(r.predicted_reduction) << ','
       << format_num(r.ratio) << ',' << format_num(r.step_scale) << ','
       << format_num(r.regularization) << ',' << (r.accepted ? 1 : 0) << ','
       << format_num(r.t_deriv) << ',' << format_num(r.t_solve) << ',' << format_num(r.t_forward)
       << '\n';
  }
  return os.str();
}

json trajectory_json(const BenchConfig& cfg, const Trajectory& traj) {
  json x = json::array(), u = json::array(), ee = json::array(), box = json::array();
  for (const Vec& xi : traj.x) {
    x.push_back(std::vector<double>(xi.data(), xi.data() + xi.size()));
    const Vec2 p = ee_position(cfg.robot, xi.segment<kArmDof>(kIdxQ));
    ee.push_back({p.x(), p.y()});
    box.push_back({xi(kIdxBoxPose), xi(kIdxBoxPose + 1), xi(kIdxBoxPose + 2)});
  }
  for (const Vec& ui : traj.u) u.push_back(std::vector<double>(ui.data(), ui.data() + ui.size()));
  return json{{"step_duration_s", cfg.step_duration()},
              {"n_steps", cfg.steps()},
              {"state_layout", "q[4], qdot[4], box x y theta, box vx vy omega"},
              {"control_layout", "tau[4], k[4]"},
              {"x", std::move(x)},
              {"u", std::move(u)},
              {"ee", std::move(ee)},
              {"box", std::move(box)}};
}

RunArtifact run(const BenchConfig& cfg) {
  cfg.validate();
  const PlanarWorld world = make_world(cfg);
  const Problem problem = make_problem(cfg, world);
  const std::vector<Vec> u_init = initial_guess(cfg);

  RunArtifact artifact;
  artifact.config = config_to_json(cfg);
  if (cfg.solver == "scvx") {
    artifact.report = solve_scvx(problem, cfg.scvx, u_init);
  } else {
    artifact.report = solve_ilqr(problem, cfg.ilqr, u_init);
  }
  artifact.metrics = compute_metrics(cfg, world, artifact.report);

  if (!cfg.out_dir.empty()) {
    artifact.dir = cfg.out_dir;
    write_artifacts(artifact);
    write_file(std::filesystem::path(artifact.dir) / "trajectory.json",
               trajectory_json(cfg, artifact.report.trajectory).dump() + "\n");
  }
  return artifact;
}

std::vector<RunArtifact> sweep_horizon(const BenchConfig& cfg, const std::vector<double>& horizons) {
  if (horizons.empty()) throw ConfigError("sweep requires at least one horizon");
  for (double h : horizons)
    if (!(h > 0.0)) throw ConfigError("sweep horizons must be positive");

  std::vector<RunArtifact> artifacts;
  for (double h : horizons) {
    BenchConfig c = cfg;
    c.horizon = h;
    c.n_steps = -1;  // keep planner steps near 0.1 s at every horizon
    if (!cfg.out_dir.empty()) {
      char sub[32];
      std::snprintf(sub, sizeof sub, "h%g", h);
      c.out_dir = (std::filesystem::path(cfg.out_dir) / sub).string();
    }
    artifacts.push_back(run(c));
  }
  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    write_file(std::filesystem::path(cfg.out_dir) / "sweep.csv", sweep_csv(artifacts));
  }
  return artifacts;
}

std::string sweep_csv(const std::vector<RunArtifact>& artifacts) {
  std::ostringstream os;
  os << "horizon_s,n_steps,task,solver,status,accepted_iterations,iterations_to_acceptable,"
        "initial_cost,final_cost,psi_ns,pos_error_m,t_total_s\n";
  for (const RunArtifact& a : artifacts) {
    const RunMetrics& m = a.metrics;
    os << format_num(m.horizon_s) << ',' << m.n_steps << ',' << m.task << ',' << m.solver << ','
       << m.status << ',' << m.accepted_iterations << ',' << m.iterations_to_acceptable << ','
       << format_num(m.initial_cost) << ',' << format_num(m.final_cost) << ','
       << format_num(m.psi_ns) << ',' << format_num(m.pos_error_m) << ','
       << format_num(m.t_total_s) << '\n';
  }
  return os.str();
}

std::string comparison_csv(const std::vector<RunMetrics>& metrics) {
  if (metrics.empty()) throw ConfigError("comparison requires at least one metrics record");

  std::map<std::string, std::multiset<std::string>> tasks_by_solver;
  for (const RunMetrics& m : metrics) tasks_by_solver[m.solver].insert(m.task);
  const auto& reference = tasks_by_solver.begin()->second;
  for (const auto& [solver, tasks] : tasks_by_solver)
    if (tasks != reference)
      throw ConfigError("comparison requires the same task set per solver; '" + solver +
                        "' differs from '" + tasks_by_solver.begin()->first + "'");

  // Per-iteration timing means mirror the usual reporting convention;
  // totals stay totals.
  std::ostringstream os;
  os << "task,solver,status,accepted_iterations,iterations_to_acceptable,final_cost,"
        "psi_ns,pos_error_m,t_deriv_s,t_solve_s,t_forward_s,t_iter_s,t_total_s\n";
  auto emit = [&os](const std::string& task, const std::string& solver, const std::string& status,
                    double iters, double to_acceptable, double cost, double psi, double pos_err,
                    double td, double ts, double tf, double ti, double tt) {
    os << task << ',' << solver << ',' << status << ',' << format_num(iters) << ','
       << format_num(to_acceptable) << ',' << format_num(cost) << ',' << format_num(psi) << ','
       << format_num(pos_err) << ',' << format_num(td) << ',' << format_num(ts) << ','
       << format_num(tf) << ',' << format_num(ti) << ',' << format_num(tt) << '\n';
  };

  std::vector<const RunMetrics*> ordered;
  for (const RunMetrics& m : metrics) ordered.push_back(&m);
  std::stable_sort(ordered.begin(), ordered.end(), [](const RunMetrics* a, const RunMetrics* b) {
    return std::tie(a->task, a->solver) < std::tie(b->task, b->solver);
  });

  for (const RunMetrics* m : ordered) {
    const double cycles = std::max(1, m->total_cycles);
    emit(m->task, m->solver, m->status, m->accepted_iterations, m->iterations_to_acceptable,
         m->final_cost_comparable, m->psi_ns, m->pos_error_m, m->t_deriv_s / cycles,
         m->t_solve_s / cycles, m->t_forward_s / cycles, m->t_total_s / cycles, m->t_total_s);
  }

  for (const auto& [solver, tasks] : tasks_by_solver) {
    (void)tasks;
    double n = 0, iters = 0, to_acc = 0, cost = 0, psi = 0, pos = 0;
    double td = 0, ts = 0, tf = 0, ti = 0, tt = 0;
    bool all_converged = true;
    for (const RunMetrics& m : metrics) {
      if (m.solver != solver) continue;
      const double cycles = std::max(1, m.total_cycles);
      n += 1;
      iters += m.accepted_iterations;
      to_acc += m.iterations_to_acceptable;
      cost += m.final_cost_comparable;
      psi += m.psi_ns;
      pos += m.pos_error_m;
      td += m.t_deriv_s / cycles;
      ts += m.t_solve_s / cycles;
      tf += m.t_forward_s / cycles;
      ti += m.t_total_s / cycles;
      tt += m.t_total_s;
      all_converged = all_converged && m.status == to_string(SolveStatus::kConverged);
    }
    emit("mean", solver, all_converged ? to_string(SolveStatus::kConverged) : "mixed", iters / n,
         to_acc / n, cost / n, psi / n, pos / n, td / n, ts / n, tf / n, ti / n, tt / n);
  }
  return os.str();
}

}  // namespace citopt
