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

#ifndef CITOPT_SCVX_HPP
#define CITOPT_SCVX_HPP

#include "report.hpp"
#include "sparse_qp.hpp"
#include "trajopt.hpp"

namespace citopt {

struct ScvxParams {
  int max_iterations = 100;      // cap on accepted successions
  double trust_init = 100.0;
  double virtual_weight = 1e3;   // L1 penalty on virtual controls
  double accept_threshold = 0.01;   // rho_0: reject below this
  double shrink_threshold = 0.25;   // rho_1: accept but shrink below this
  double expand_threshold = 0.7;    // rho_2: expand at or above this
  double shrink_factor = 2.0;
  double expand_factor = 2.0;
  // Applied as r = max(r, trust_floor) after each accepted update.
  double trust_floor = 1e-6;
  double trust_cap = 1e8;
  double delta_l_tol = 1e-3;
  int max_consecutive_rejections = 10;
  double acceptable_cost = 1.0;
  QpSettings qp;

  void validate() const;
};

// Convex subproblem around (X, U): exact quadratic cost expansion plus an
// L1 penalty on virtual controls, linearized dynamics with virtual
// controls, bound rows, and a single L1 trust-region row over (dX, dU).
// Variable layout: [dx | du | v | sv | tx | tu], where sv/tx/tu are the
// L1 slacks. The sparsity pattern is identical across iterations, so the
// QP solver's cached symbolic factorization stays valid.
struct ScvxSubproblem {
  SparseQp qp;
  int n = 0, m = 0, steps = 0;
  int off_dx = 0, off_du = 0, off_v = 0, off_sv = 0, off_tx = 0, off_tu = 0;
  int size_z = 0;
  int trust_row = 0;
  double objective_constant = 0.0;  // nonlinear cost at the expansion point

  void set_trust_radius(double r);
  // Full model objective at a solution vector (slacks priced in).
  double objective_at(const Vec& z) const;
  std::vector<Vec> delta_u(const Vec& z) const;
  double deviation_l1(const Vec& z) const;  // |dX|_1 + |dU|_1
  double virtual_l1(const Vec& z) const;
};

ScvxSubproblem build_subproblem(const Problem& problem, const Trajectory& traj,
                                const LinearDynamics& lin, double virtual_weight);

double similarity_ratio(double actual, double predicted);

double update_trust_region(double r, double rho, const ScvxParams& params);

// Successive convexification with hard dynamics enforcement: only the
// control update from the subproblem is applied, states are regenerated by
// a nonlinear rollout, and the step is accepted when the actual cost
// change tracks the prediction.
SolverReport solve_scvx(const Problem& problem, const ScvxParams& params,
                        const std::vector<Vec>& u_init);

}  // namespace citopt

#endif  // CITOPT_SCVX_HPP
