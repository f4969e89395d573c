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

#ifndef CITOPT_SPARSE_QP_HPP
#define CITOPT_SPARSE_QP_HPP

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <iosfwd>

#include "types.hpp"

namespace citopt {

using SpMat = Eigen::SparseMatrix<double>;

// minimize 0.5 z'Pz + q'z  subject to  l <= Cz <= u.
// P must be symmetric positive semidefinite. Equalities are rows with
// l == u; one-sided rows use +/-inf.
struct SparseQp {
  SpMat p;
  Vec q;
  SpMat c;
  Vec l, u;

  int vars() const { return static_cast<int>(q.size()); }
  int rows() const { return static_cast<int>(l.size()); }
  void validate() const;
};

enum class QpStatus { kSolved, kMaxIterations, kPrimalInfeasible };

struct QpSolution {
  QpStatus status = QpStatus::kMaxIterations;
  Vec z;  // primal
  Vec y;  // one multiplier per constraint row; positive pushes down from u
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double objective = 0.0;
};

struct QpSettings {
  double eps_abs = 1e-6;
  double eps_rel = 1e-6;
  // Relative tolerance of the Farkas certificate used to declare the
  // problem primal-infeasible from a diverging dual ray.
  double eps_infeasible = 1e-7;
  int max_iterations = 100;  // interior-point steps
  bool warm_start = true;    // seed the next solve from the last solution
};

// Primal-dual interior-point QP solver (predictor-corrector) over a
// quasi-definite KKT system. The KKT sparsity pattern is constant across
// iterations and across solves of identically structured problems, so the
// symbolic factorization is computed once and reused; only the numeric
// factorization is redone per step. Deterministic: no randomization, fixed
// update schedule.
class SparseQpSolver {
 public:
  explicit SparseQpSolver(QpSettings settings = QpSettings{}) : settings_(settings) {}

  QpSolution solve(const SparseQp& qp);

  // Seeds the next solve; sizes must match the next problem.
  void warm_start(const Vec& z, const Vec& y);
  // Drops the warm start and cached factorization.
  void reset();

  const QpSettings& settings() const { return settings_; }

 private:
  QpSettings settings_;
  Vec warm_z_, warm_y_;

  // Symbolic factorization cache, keyed by the KKT pattern.
  Eigen::SimplicialLDLT<SpMat, Eigen::Upper> kkt_;
  std::vector<int> pattern_key_;
  bool analyzed_ = false;
};

// Infinity-norm KKT residuals of a candidate primal/dual pair on the
// original problem data.
struct KktResiduals {
  double primal = 0.0;
  double dual = 0.0;
};
KktResiduals kkt_residuals(const SparseQp& qp, const Vec& z, const Vec& y);

// Plain-text dump of the problem data (matrix-market style triplets), for
// offline reproduction of solver issues.
void dump_qp(const SparseQp& qp, std::ostream& os);

}  // namespace citopt

#endif  // CITOPT_SPARSE_QP_HPP
