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

#ifndef CITOPT_TESTS_SUPPORT_HPP
#define CITOPT_TESTS_SUPPORT_HPP

#include <random>

#include "trajopt.hpp"

namespace citopt::test {

// x+ = A x + B u, the plant on which every solver layer has a closed form.
class LinearPlant final : public DynamicsModel {
 public:
  Mat a, b;
  LinearPlant(Mat a_, Mat b_) : a(std::move(a_)), b(std::move(b_)) {}
  int state_dim() const override { return static_cast<int>(a.rows()); }
  int control_dim() const override { return static_cast<int>(b.cols()); }
  Vec step(const Vec& x, const Vec& u) const override { return a * x + b * u; }
};

// Scalar map x+ = x^2 (control ignored); d step / dx = 2x.
class SquarePlant final : public DynamicsModel {
 public:
  int state_dim() const override { return 1; }
  int control_dim() const override { return 1; }
  Vec step(const Vec& x, const Vec&) const override { return Vec::Constant(1, x(0) * x(0)); }
};

class ConstantPlant final : public DynamicsModel {
 public:
  Vec value;
  explicit ConstantPlant(Vec v) : value(std::move(v)) {}
  int state_dim() const override { return static_cast<int>(value.size()); }
  int control_dim() const override { return 1; }
  Vec step(const Vec&, const Vec&) const override { return value; }
};

inline Vec random_vec(std::mt19937& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = d(rng);
  return v;
}

inline Mat random_mat(std::mt19937& rng, int rows, int cols, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = d(rng);
  return m;
}

// Random symmetric positive definite matrix with moderate conditioning.
inline Mat random_spd(std::mt19937& rng, int n, double ridge = 0.1) {
  const Mat m = random_mat(rng, n, n, -1.0, 1.0);
  return m * m.transpose() + ridge * Mat::Identity(n, n);
}

// Double integrator with dt, a standard well-behaved LQR plant.
inline Problem double_integrator_problem(int horizon) {
  static LinearPlant* plant = [] {
    Mat a(2, 2), b(2, 1);
    a << 1.0, 0.1, 0.0, 1.0;
    b << 0.005, 0.1;
    return new LinearPlant(a, b);
  }();
  Problem p;
  p.model = plant;
  p.horizon = horizon;
  p.x0 = Vec::Zero(2);
  p.finish_defaults();
  return p;
}

struct LqrSetup {
  LinearPlant* plant;
  Problem problem;
};

// Double integrator with nonzero running state weights and a reachable
// goal; bounds wide open unless the test tightens them.
inline LqrSetup lqr_setup(int horizon) {
  static LinearPlant* plant = [] {
    Mat a(2, 2), b(2, 1);
    a << 1.0, 0.1, 0.0, 1.0;
    b << 0.005, 0.1;
    return new LinearPlant(a, b);
  }();
  LqrSetup s;
  s.plant = plant;
  s.problem.model = plant;
  s.problem.horizon = horizon;
  s.problem.x0 = Vec::Zero(2);
  s.problem.finish_defaults();
  s.problem.goal << 1.0, 0.0;
  s.problem.final_weight << 50.0, 10.0;
  s.problem.state_weight << 0.01, 0.02;
  s.problem.control_weight << 0.1;
  return s;
}

// Direct dense solve of the linear-quadratic problem in the stacked
// control vector; the unique optimum the solvers must reproduce.
struct DenseLqr {
  Vec u_star;
  double cost;
};

inline DenseLqr dense_lqr_solve(const LqrSetup& s) {
  const Mat& a = s.plant->a;
  const Mat& b = s.plant->b;
  const int n = static_cast<int>(a.rows());
  const int m = static_cast<int>(b.cols());
  const int nn = s.problem.horizon;

  // States x_1..x_N as an affine map of stacked controls: x = g_mat u + h.
  Mat g_mat = Mat::Zero(n * nn, m * nn);
  Vec h(n * nn);
  Mat apow = a;  // a^(t+1)
  for (int t = 0; t < nn; ++t) {
    h.segment(t * n, n) = apow * s.problem.x0;
    Mat blk = b;
    for (int j = t; j >= 0; --j) {
      g_mat.block(t * n, j * m, n, m) = blk;
      blk = a * blk;
    }
    apow = a * apow;
  }

  // Weight blocks over x_1..x_N: running state weight up to N-1, final
  // weight on x_N with the goal as the only nonzero target.
  Mat w = Mat::Zero(n * nn, n * nn);
  Vec target = Vec::Zero(n * nn);
  for (int t = 0; t < nn - 1; ++t)
    w.block(t * n, t * n, n, n) = Mat(s.problem.state_weight.asDiagonal());
  w.block((nn - 1) * n, (nn - 1) * n, n, n) = Mat(s.problem.final_weight.asDiagonal());
  target.segment((nn - 1) * n, n) = s.problem.final_weight.asDiagonal() * s.problem.goal;

  Mat r = Mat::Zero(m * nn, m * nn);
  for (int t = 0; t < nn; ++t)
    r.block(t * m, t * m, m, m) = Mat(s.problem.control_weight.asDiagonal());

  const Mat hess = r + g_mat.transpose() * w * g_mat;
  const Vec rhs = g_mat.transpose() * (target - w * h);
  DenseLqr out;
  out.u_star = hess.ldlt().solve(rhs);

  std::vector<Vec> u_list(nn);
  for (int t = 0; t < nn; ++t) u_list[t] = out.u_star.segment(t * m, m);
  const Trajectory traj = rollout(s.problem, u_list);
  out.cost = total_cost(s.problem, traj, true);
  return out;
}

inline std::vector<Vec> split_controls(const Vec& stacked, int m, int n_steps) {
  std::vector<Vec> u(n_steps);
  for (int t = 0; t < n_steps; ++t) u[t] = stacked.segment(t * m, m);
  return u;
}

}  // namespace citopt::test

#endif  // CITOPT_TESTS_SUPPORT_HPP
