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

#include "boxqp.hpp"

namespace citopt {
namespace {

constexpr int kMaxIter = 100;
constexpr double kGradTol = 1e-9;
constexpr double kRelImprove = 1e-10;
constexpr double kMinStep = 1e-20;
constexpr double kArmijo = 0.1;

double objective(const Mat& h, const Vec& g, const Vec& u) {
  return 0.5 * u.dot(h * u) + g.dot(u);
}

}  // namespace

BoxQpResult box_qp(const Mat& h, const Vec& g, const Vec& lo, const Vec& hi, const Vec& u_init) {
  const int n = static_cast<int>(g.size());
  if (h.rows() != n || h.cols() != n || lo.size() != n || hi.size() != n || u_init.size() != n)
    throw InvalidArgument("box_qp size mismatch");
  if (((hi - lo).array() < 0.0).any()) throw InvalidArgument("box_qp bounds crossed");

  BoxQpResult res;
  res.u = u_init.cwiseMax(lo).cwiseMin(hi);
  res.clamped.assign(n, false);
  double value = objective(h, g, res.u);

  std::vector<bool> old_clamped;
  for (res.iterations = 1; res.iterations <= kMaxIter; ++res.iterations) {
    const Vec grad = g + h * res.u;

    for (int i = 0; i < n; ++i)
      res.clamped[i] = (res.u(i) <= lo(i) && grad(i) > 0.0) || (res.u(i) >= hi(i) && grad(i) < 0.0);
    res.free_idx.clear();
    for (int i = 0; i < n; ++i)
      if (!res.clamped[i]) res.free_idx.push_back(i);

    if (res.free_idx.empty()) {
      res.success = true;
      break;
    }
    double gnorm = 0.0;
    for (int i : res.free_idx) gnorm = std::max(gnorm, std::abs(grad(i)));
    if (gnorm < kGradTol) {
      res.success = true;
      break;
    }

    if (res.clamped != old_clamped) {
      const int nf = static_cast<int>(res.free_idx.size());
      Mat hff(nf, nf);
      for (int a = 0; a < nf; ++a)
        for (int b = 0; b < nf; ++b) hff(a, b) = h(res.free_idx[a], res.free_idx[b]);
      res.free_llt.compute(hff);
      if (res.free_llt.info() != Eigen::Success) return res;  // not PD
      old_clamped = res.clamped;
    }

    Vec gf(res.free_idx.size());
    for (size_t a = 0; a < res.free_idx.size(); ++a) gf(a) = grad(res.free_idx[a]);
    const Vec df = res.free_llt.solve(-gf);
    Vec dir = Vec::Zero(n);
    for (size_t a = 0; a < res.free_idx.size(); ++a) dir(res.free_idx[a]) = df(a);

    const double slope = grad.dot(dir);
    double step = 1.0;
    Vec candidate;
    double cand_value = value;
    while (step >= kMinStep) {
      candidate = (res.u + step * dir).cwiseMax(lo).cwiseMin(hi);
      cand_value = objective(h, g, candidate);
      if (cand_value <= value + kArmijo * step * slope) break;
      step *= 0.5;
    }
    if (step < kMinStep) {
      res.success = true;  // no descent available within the box
      break;
    }
    const double improve = value - cand_value;
    res.u = candidate;
    value = cand_value;
    if (improve < kRelImprove * (1.0 + std::abs(value))) {
      res.success = true;
      break;
    }
  }
  if (res.iterations > kMaxIter) res.iterations = kMaxIter;

  // Recompute the sets at the final point so gains match the solution.
  const Vec grad = g + h * res.u;
  for (int i = 0; i < n; ++i)
    res.clamped[i] = (res.u(i) <= lo(i) && grad(i) > 0.0) || (res.u(i) >= hi(i) && grad(i) < 0.0);
  res.free_idx.clear();
  for (int i = 0; i < n; ++i)
    if (!res.clamped[i]) res.free_idx.push_back(i);
  if (!res.free_idx.empty() && res.clamped != old_clamped) {
    const int nf = static_cast<int>(res.free_idx.size());
    Mat hff(nf, nf);
    for (int a = 0; a < nf; ++a)
      for (int b = 0; b < nf; ++b) hff(a, b) = h(res.free_idx[a], res.free_idx[b]);
    res.free_llt.compute(hff);
    if (res.free_llt.info() != Eigen::Success) {
      res.success = false;
      return res;
    }
  }
  res.value = objective(h, g, res.u);
  res.success = true;
  return res;
}

}  // namespace citopt
