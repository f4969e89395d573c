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

#include "sparse_qp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <utility>
#include <vector>

namespace citopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Inactive rows drive the slack-space weight to zero; its inverse on the
// KKT diagonal is capped so the factorization stays well scaled.
constexpr double kWeightFloor = 1e-10;
// Guards divisions by collapsing slack gaps.
constexpr double kGapFloor = 1e-12;
// Static primal/dual regularization keeping the KKT strictly quasi-definite;
// guarded iterative refinement removes its bias from each solve.
constexpr double kDelta = 1e-8;
constexpr double kBoundaryFraction = 0.995;

double inf_norm(const Vec& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

// Largest alpha in [0, cap] keeping value + alpha * delta >= 0 on masked
// entries.
double max_step(const Vec& value, const Vec& delta, const std::vector<char>& mask,
                double cap) {
  double alpha = cap;
  for (int i = 0; i < value.size(); ++i) {
    if (!mask[i] || delta[i] >= 0.0) continue;
    alpha = std::min(alpha, -value[i] / delta[i]);
  }
  return alpha;
}

// Attempts to extract a Farkas certificate from the divergence direction of
// the row multipliers. The raw direction mixes the ray with whatever dual
// residual the stalled iteration could not remove, so it is first projected
// onto null(C') and the certificate conditions are then verified on the
// projection itself: C'v = 0 and a negative bound support function, with
// every meaningfully signed component backed by a finite bound.
bool farkas_certificate(const SparseQp& qp, const Vec& y_dir, double rel_tol) {
  const double yn = inf_norm(y_dir);
  if (!(yn > 0.0) || !std::isfinite(yn)) return false;
  const Vec yh = y_dir / yn;

  SpMat ctc(qp.c.transpose() * qp.c);
  SpMat eye(qp.vars(), qp.vars());
  eye.setIdentity();
  ctc += 1e-12 * eye;  // keeps the normal equations solvable for rank-deficient C
  Eigen::SimplicialLDLT<SpMat> chol(ctc);
  if (chol.info() != Eigen::Success) return false;
  const Vec lambda = chol.solve(Vec(qp.c.transpose() * yh));
  const Vec v = yh - qp.c * lambda;

  const double vn = inf_norm(v);
  if (vn < 1e-6) return false;
  const double tol = rel_tol * vn;
  if (inf_norm(Vec(qp.c.transpose() * v)) > tol) return false;
  double support = 0.0;
  for (int i = 0; i < qp.rows(); ++i) {
    if (v[i] > tol) {
      if (!std::isfinite(qp.u[i])) return false;
      support += qp.u[i] * v[i];
    } else if (v[i] < -tol) {
      if (!std::isfinite(qp.l[i])) return false;
      support += qp.l[i] * v[i];
    }
  }
  return support <= -tol;
}

// Ruiz equilibration of the problem data plus objective normalization.
// Interior-point steps behave only when rows, columns, and the cost carry
// comparable magnitudes; the solution maps back as x = d .* xs and
// y = e .* ys / cost.
struct ScaledProblem {
  SparseQp qp;
  Vec d, e;
  double cost = 1.0;
};

ScaledProblem equilibrate(const SparseQp& src) {
  const int n = src.vars();
  const int m = src.rows();
  ScaledProblem sp;
  sp.qp.p = src.p;
  sp.qp.q = src.q;
  sp.qp.c = src.c;
  sp.d = Vec::Ones(n);
  sp.e = Vec::Ones(m);

  const auto factor = [](double norm) {
    if (norm < 1e-10) return 1.0;
    return std::clamp(1.0 / std::sqrt(norm), 1e-3, 1e3);
  };

  for (int sweep = 0; sweep < 10; ++sweep) {
    Vec cn = Vec::Zero(n), rn = Vec::Zero(m);
    for (int k = 0; k < sp.qp.p.outerSize(); ++k)
      for (SpMat::InnerIterator it(sp.qp.p, k); it; ++it)
        cn[it.col()] = std::max(cn[it.col()], std::abs(it.value()));
    for (int k = 0; k < sp.qp.c.outerSize(); ++k)
      for (SpMat::InnerIterator it(sp.qp.c, k); it; ++it) {
        cn[it.col()] = std::max(cn[it.col()], std::abs(it.value()));
        rn[it.row()] = std::max(rn[it.row()], std::abs(it.value()));
      }
    Vec dd(n), ee(m);
    for (int j = 0; j < n; ++j) dd[j] = factor(cn[j]);
    for (int i = 0; i < m; ++i) ee[i] = factor(rn[i]);

    for (int k = 0; k < sp.qp.p.outerSize(); ++k)
      for (SpMat::InnerIterator it(sp.qp.p, k); it; ++it)
        it.valueRef() *= dd[it.row()] * dd[it.col()];
    for (int k = 0; k < sp.qp.c.outerSize(); ++k)
      for (SpMat::InnerIterator it(sp.qp.c, k); it; ++it)
        it.valueRef() *= ee[it.row()] * dd[it.col()];
    sp.qp.q.array() *= dd.array();
    sp.d.array() *= dd.array();
    sp.e.array() *= ee.array();

    // Objective normalization, interleaved as in the matrix sweeps.
    Vec pc = Vec::Zero(n);
    for (int k = 0; k < sp.qp.p.outerSize(); ++k)
      for (SpMat::InnerIterator it(sp.qp.p, k); it; ++it)
        pc[it.col()] = std::max(pc[it.col()], std::abs(it.value()));
    const double scale = std::max(n ? pc.mean() : 0.0, inf_norm(sp.qp.q));
    if (scale > 1e-10) {
      const double gamma = std::clamp(1.0 / scale, 1e-3, 1e3);
      for (int k = 0; k < sp.qp.p.outerSize(); ++k)
        for (SpMat::InnerIterator it(sp.qp.p, k); it; ++it) it.valueRef() *= gamma;
      sp.qp.q *= gamma;
      sp.cost *= gamma;
    }
  }

  sp.qp.l = src.l.cwiseProduct(sp.e);
  sp.qp.u = src.u.cwiseProduct(sp.e);
  return sp;
}

}  // namespace

void SparseQp::validate() const {
  const int n = vars();
  const int m = rows();
  if (p.rows() != n || p.cols() != n) throw InvalidArgument("qp: P must be vars x vars");
  if (c.rows() != m || c.cols() != n) throw InvalidArgument("qp: C must be rows x vars");
  if (u.size() != m) throw InvalidArgument("qp: l and u must have one entry per row");
  for (int i = 0; i < m; ++i) {
    if (std::isnan(l[i]) || std::isnan(u[i])) throw InvalidArgument("qp: NaN bound");
    if (l[i] > u[i]) throw InvalidArgument("qp: crossing bounds l > u");
  }
  for (int k = 0; k < p.outerSize(); ++k)
    for (SpMat::InnerIterator it(p, k); it; ++it)
      if (std::isnan(it.value())) throw InvalidArgument("qp: NaN in P");
  if (q.hasNaN()) throw InvalidArgument("qp: NaN in q");
  for (int k = 0; k < c.outerSize(); ++k)
    for (SpMat::InnerIterator it(c, k); it; ++it)
      if (std::isnan(it.value())) throw InvalidArgument("qp: NaN in C");
}

QpSolution SparseQpSolver::solve(const SparseQp& qp) {
  qp.validate();
  const int n = qp.vars();
  const int m = qp.rows();

  const ScaledProblem sc = equilibrate(qp);
  const SparseQp& sq = sc.qp;

  // Row classification. Equalities pin the slack; one-sided rows carry a
  // single barrier pair.
  std::vector<char> eq(m), has_l(m), has_u(m);
  int npairs = 0;
  for (int i = 0; i < m; ++i) {
    const bool fl = std::isfinite(sq.l[i]);
    const bool fu = std::isfinite(sq.u[i]);
    eq[i] = fl && fu && sq.l[i] == sq.u[i];
    has_l[i] = fl && !eq[i];
    has_u[i] = fu && !eq[i];
    npairs += static_cast<int>(has_l[i]) + static_cast<int>(has_u[i]);
  }

  // Scales of the original data, for the termination tolerances.
  double bound_scale = 0.0;
  for (int i = 0; i < m; ++i) {
    if (std::isfinite(qp.l[i])) bound_scale = std::max(bound_scale, std::abs(qp.l[i]));
    if (std::isfinite(qp.u[i])) bound_scale = std::max(bound_scale, std::abs(qp.u[i]));
  }
  const double q_norm = inf_norm(qp.q);

  // Primal seed; slacks start strictly interior even when the seed is
  // feasible, which re-centers the path without losing the seed itself.
  Vec x = Vec::Zero(n);
  if (settings_.warm_start && warm_z_.size() == n) x = warm_z_.cwiseQuotient(sc.d);

  Vec s(m), y = Vec::Zero(m), zl = Vec::Zero(m), zu = Vec::Zero(m);
  {
    const Vec cx = sq.c * x;
    for (int i = 0; i < m; ++i) {
      if (eq[i]) {
        s[i] = sq.l[i];
        continue;
      }
      double v = cx[i];
      if (has_l[i] && has_u[i]) {
        const double pad = std::min(1.0, 0.25 * (sq.u[i] - sq.l[i]));
        v = std::clamp(v, sq.l[i] + pad, sq.u[i] - pad);
      } else if (has_l[i]) {
        v = std::max(v, sq.l[i] + 1.0);
      } else if (has_u[i]) {
        v = std::min(v, sq.u[i] - 1.0);
      }
      s[i] = v;
      if (has_l[i]) zl[i] = 1.0;
      if (has_u[i]) zu[i] = 1.0;
      y[i] = zu[i] - zl[i];
    }
  }

  // Constant triplet skeleton: upper triangle of P, the x-diagonal
  // regularization, C in the off-diagonal block, and one tail diagonal
  // entry per row. Only the numeric values change across iterations.
  std::vector<Eigen::Triplet<double>> fixed;
  fixed.reserve(sq.p.nonZeros() + sq.c.nonZeros() + n + m);
  for (int k = 0; k < sq.p.outerSize(); ++k)
    for (SpMat::InnerIterator it(sq.p, k); it; ++it)
      if (it.row() <= it.col()) fixed.emplace_back(it.row(), it.col(), it.value());
  for (int i = 0; i < n; ++i) fixed.emplace_back(i, i, kDelta);
  for (int k = 0; k < sq.c.outerSize(); ++k)
    for (SpMat::InnerIterator it(sq.c, k); it; ++it)
      fixed.emplace_back(it.col(), n + it.row(), it.value());
  const std::size_t tail_start = fixed.size();
  for (int i = 0; i < m; ++i) fixed.emplace_back(n + i, n + i, -kDelta);

  SpMat kkt_mat(n + m, n + m);
  Vec winv(m);

  QpSolution out;

  const auto package = [&](QpStatus status, int iters) {
    out.status = status;
    out.iterations = iters;
    out.z = x.cwiseProduct(sc.d);
    out.y = y.cwiseProduct(sc.e) / sc.cost;
    const KktResiduals res = kkt_residuals(qp, out.z, out.y);
    out.primal_residual = res.primal;
    out.dual_residual = res.dual;
    out.objective = 0.5 * out.z.dot(qp.p * out.z) + qp.q.dot(out.z);
    if (settings_.warm_start && status == QpStatus::kSolved) {
      warm_z_ = out.z;
      warm_y_ = out.y;
    }
    return out;
  };

  // Everything inside the loop lives in the scaled space; the convergence
  // metrics are mapped back to the original data so the tolerances keep
  // their plain meaning.
  int stalls = 0;
  int stagnant = 0;
  double mu_prev = kInf;
  for (int iter = 0;; ++iter) {
    const Vec px = sq.p * x;
    const Vec cty = sq.c.transpose() * y;
    const Vec rd = px + sq.q + cty;
    const Vec cx = sq.c * x;
    const Vec rp = cx - s;

    double gap = 0.0;
    for (int i = 0; i < m; ++i) {
      if (has_l[i]) gap += (s[i] - sq.l[i]) * zl[i];
      if (has_u[i]) gap += (sq.u[i] - s[i]) * zu[i];
    }
    const double mu = npairs ? gap / npairs : 0.0;
    stagnant = mu > 0.5 * mu_prev ? stagnant + 1 : 0;
    mu_prev = mu;

    // Unscaled metrics, all O(n + m) given the scaled products.
    double viol = 0.0, cx_norm = 0.0;
    for (int i = 0; i < m; ++i) {
      const double v = cx[i] / sc.e[i];
      cx_norm = std::max(cx_norm, std::abs(v));
      viol = std::max({viol, qp.l[i] - v, v - qp.u[i]});
    }
    viol = std::max(viol, 0.0);
    double rd_norm = 0.0, px_norm = 0.0, cty_norm = 0.0;
    for (int j = 0; j < n; ++j) {
      const double unscale = 1.0 / (sc.cost * sc.d[j]);
      rd_norm = std::max(rd_norm, std::abs(rd[j]) * unscale);
      px_norm = std::max(px_norm, std::abs(px[j]) * unscale);
      cty_norm = std::max(cty_norm, std::abs(cty[j]) * unscale);
    }
    const double gap_u = gap / sc.cost;
    const double obj_u = (0.5 * x.dot(px) + sq.q.dot(x)) / sc.cost;

    if (std::getenv("CITOPT_QP_TRACE"))
      std::fprintf(stderr, "it %3d mu %.3e gap %.3e rd %.3e viol %.3e obj %.6e yinf %.3e\n",
                   iter, mu, gap_u, rd_norm, viol, obj_u, inf_norm(y));

    const double tol_p =
        settings_.eps_abs + settings_.eps_rel * std::max(cx_norm, bound_scale);
    const double tol_d =
        settings_.eps_abs + settings_.eps_rel * std::max({px_norm, cty_norm, q_norm});
    // The gap bounds suboptimality directly, so the data norms that scale
    // the residual tolerances must not relax it. Primal accuracy degrades
    // as the square root of the gap on weakly curved problems, hence the
    // much tighter scale; a stagnating but residual-feasible iterate is
    // still accepted at the looser scale so a centrality floor cannot turn
    // into a spurious iteration-limit failure.
    const double tol_gap = 1e-4 * settings_.eps_abs * (1.0 + std::abs(obj_u));
    const bool gap_ok =
        gap_u <= tol_gap ||
        (stagnant >= 5 && gap_u <= settings_.eps_abs * (1.0 + std::abs(obj_u)));
    if (viol <= tol_p && rd_norm <= tol_d && gap_ok)
      return package(QpStatus::kSolved, iter);

    // Diverging multipliers are the symptom of primal infeasibility; the
    // projection-based certificate turns the symptom into a proof.
    const double y_inf = inf_norm(Vec(y.cwiseProduct(sc.e))) / sc.cost;
    const bool last_chance = iter >= settings_.max_iterations || stalls >= 5;
    if (y_inf > (last_chance ? 1e2 : 1e6) &&
        farkas_certificate(qp, Vec(y.cwiseProduct(sc.e)), settings_.eps_infeasible))
      return package(QpStatus::kPrimalInfeasible, iter);
    if (last_chance) return package(QpStatus::kMaxIterations, iter);

    // Reduced KKT: the slack and bound multipliers are eliminated into a
    // per-row weight; equality rows keep a zero weight so their slack
    // never moves.
    std::vector<Eigen::Triplet<double>> trip = fixed;
    for (int i = 0; i < m; ++i) {
      double w = 0.0;
      if (has_l[i]) w += zl[i] / std::max(s[i] - sq.l[i], kGapFloor);
      if (has_u[i]) w += zu[i] / std::max(sq.u[i] - s[i], kGapFloor);
      winv[i] = eq[i] ? 0.0 : 1.0 / std::max(w, kWeightFloor);
      trip[tail_start + i] = Eigen::Triplet<double>(n + i, n + i, -winv[i] - kDelta);
    }
    kkt_mat.setFromTriplets(trip.begin(), trip.end());

    std::vector<int> key;
    key.reserve(kkt_mat.outerSize() + 1 + kkt_mat.nonZeros());
    key.assign(kkt_mat.outerIndexPtr(), kkt_mat.outerIndexPtr() + kkt_mat.outerSize() + 1);
    key.insert(key.end(), kkt_mat.innerIndexPtr(), kkt_mat.innerIndexPtr() + kkt_mat.nonZeros());
    if (!analyzed_ || key != pattern_key_) {
      kkt_.analyzePattern(kkt_mat);
      pattern_key_ = std::move(key);
      analyzed_ = true;
    }
    kkt_.factorize(kkt_mat);
    double delta_used = kDelta;
    if (kkt_.info() != Eigen::Success) {
      // Retry with heavier regularization before giving up on the step.
      for (int attempt = 0; attempt < 3 && kkt_.info() != Eigen::Success; ++attempt) {
        std::vector<Eigen::Triplet<double>> heavy = trip;
        delta_used *= 100.0;
        const double extra = delta_used - kDelta;  // trip already carries kDelta
        for (int i = 0; i < n; ++i) heavy.emplace_back(i, i, extra);
        for (int i = 0; i < m; ++i) heavy.emplace_back(n + i, n + i, -extra);
        kkt_mat.setFromTriplets(heavy.begin(), heavy.end());
        kkt_.factorize(kkt_mat);
      }
      if (kkt_.info() != Eigen::Success) return package(QpStatus::kMaxIterations, iter);
    }

    const auto kkt_solve = [&](const Vec& rhs) {
      // Refinement against the unregularized system; the regularization is
      // a known diagonal so its action is removed analytically. Passes that
      // stop shrinking the residual are discarded, which keeps an
      // ill-conditioned late-stage factorization from amplifying noise.
      Vec sol = kkt_.solve(rhs);
      Vec reg = delta_used * sol;
      reg.tail(m) = -reg.tail(m);
      Vec resid = rhs - (kkt_mat.selfadjointView<Eigen::Upper>() * sol - reg);
      double rnorm = inf_norm(resid);
      for (int pass = 0; pass < 3 && rnorm > 1e-14 * (1.0 + inf_norm(rhs)); ++pass) {
        Vec cand = sol + kkt_.solve(resid);
        Vec regc = delta_used * cand;
        regc.tail(m) = -regc.tail(m);
        Vec residc = rhs - (kkt_mat.selfadjointView<Eigen::Upper>() * cand - regc);
        const double rc = inf_norm(residc);
        if (rc >= rnorm) break;
        sol = std::move(cand);
        resid = std::move(residc);
        rnorm = rc;
      }
      return sol;
    };

    // Affine predictor. With complementarity targets at zero the
    // eliminated right-hand side collapses to the current multipliers.
    Vec rhs(n + m);
    rhs.head(n) = -rd;
    for (int i = 0; i < m; ++i)
      rhs[n + i] = eq[i] ? -rp[i] : -rp[i] + winv[i] * y[i];
    const Vec sol_aff = kkt_solve(rhs);
    const Vec dx_aff = sol_aff.head(n);
    const Vec cdx_aff = sq.c * dx_aff;

    Vec ds_aff = Vec::Zero(m), dzl_aff = Vec::Zero(m), dzu_aff = Vec::Zero(m);
    for (int i = 0; i < m; ++i) {
      if (eq[i]) continue;
      ds_aff[i] = cdx_aff[i] + rp[i];
      if (has_l[i]) {
        const double gl = std::max(s[i] - sq.l[i], kGapFloor);
        dzl_aff[i] = (-gl * zl[i] - zl[i] * ds_aff[i]) / gl;
      }
      if (has_u[i]) {
        const double gu = std::max(sq.u[i] - s[i], kGapFloor);
        dzu_aff[i] = (-gu * zu[i] + zu[i] * ds_aff[i]) / gu;
      }
    }

    double sigma_mu = 0.0;
    Vec gl_v = Vec::Zero(m), gu_v = Vec::Zero(m);
    if (npairs) {
      for (int i = 0; i < m; ++i) {
        if (has_l[i]) gl_v[i] = s[i] - sq.l[i];
        if (has_u[i]) gu_v[i] = sq.u[i] - s[i];
      }
      double alpha_aff = max_step(gl_v, ds_aff, has_l, 1.0);
      alpha_aff = max_step(gu_v, -ds_aff, has_u, alpha_aff);
      alpha_aff = max_step(zl, dzl_aff, has_l, alpha_aff);
      alpha_aff = max_step(zu, dzu_aff, has_u, alpha_aff);

      double gap_aff = 0.0;
      for (int i = 0; i < m; ++i) {
        if (has_l[i])
          gap_aff += (gl_v[i] + alpha_aff * ds_aff[i]) * (zl[i] + alpha_aff * dzl_aff[i]);
        if (has_u[i])
          gap_aff += (gu_v[i] - alpha_aff * ds_aff[i]) * (zu[i] + alpha_aff * dzu_aff[i]);
      }
      const double mu_aff = gap_aff / npairs;
      const double ratio = mu > 0.0 ? std::clamp(mu_aff / mu, 0.0, 1.0) : 0.0;
      sigma_mu = ratio * ratio * ratio * mu;
    }

    // Corrector: recenter toward sigma*mu and absorb the affine
    // second-order terms.
    Vec rcl = Vec::Zero(m), rcu = Vec::Zero(m);
    for (int i = 0; i < m; ++i) {
      if (has_l[i]) rcl[i] = sigma_mu - (s[i] - sq.l[i]) * zl[i] - ds_aff[i] * dzl_aff[i];
      if (has_u[i]) rcu[i] = sigma_mu - (sq.u[i] - s[i]) * zu[i] + ds_aff[i] * dzu_aff[i];
    }
    for (int i = 0; i < m; ++i) {
      if (eq[i]) {
        rhs[n + i] = -rp[i];
        continue;
      }
      double g = 0.0;
      if (has_u[i]) g += rcu[i] / std::max(sq.u[i] - s[i], kGapFloor);
      if (has_l[i]) g -= rcl[i] / std::max(s[i] - sq.l[i], kGapFloor);
      rhs[n + i] = -rp[i] - winv[i] * g;
    }
    const Vec sol_cor = kkt_solve(rhs);
    const Vec dx = sol_cor.head(n);
    const Vec dy = sol_cor.tail(m);
    const Vec cdx = sq.c * dx;

    Vec ds = Vec::Zero(m), dzl = Vec::Zero(m), dzu = Vec::Zero(m);
    for (int i = 0; i < m; ++i) {
      if (eq[i]) continue;
      ds[i] = cdx[i] + rp[i];
      if (has_l[i]) {
        const double gl = std::max(s[i] - sq.l[i], kGapFloor);
        dzl[i] = (rcl[i] - zl[i] * ds[i]) / gl;
      }
      if (has_u[i]) {
        const double gu = std::max(sq.u[i] - s[i], kGapFloor);
        dzu[i] = (rcu[i] + zu[i] * ds[i]) / gu;
      }
    }

    double alpha = 1.0;
    if (npairs) {
      alpha = max_step(gl_v, ds, has_l, 1.0);
      alpha = max_step(gu_v, -ds, has_u, alpha);
      alpha = max_step(zl, dzl, has_l, alpha);
      alpha = max_step(zu, dzu, has_u, alpha);
      alpha *= kBoundaryFraction;

      // The corrector models only the affine second-order terms; its own
      // cross terms can inflate the complementarity products on hard
      // steps. Backtrack until the mean product actually decreases the way
      // a centering step of this size must.
      const auto mu_at = [&](double a) {
        double g = 0.0;
        for (int i = 0; i < m; ++i) {
          if (has_l[i]) g += (gl_v[i] + a * ds[i]) * (zl[i] + a * dzl[i]);
          if (has_u[i]) g += (gu_v[i] - a * ds[i]) * (zu[i] + a * dzu[i]);
        }
        return g / npairs;
      };
      if (mu > 0.0) {
        const double sigma_ratio = std::min(sigma_mu / mu, 1.0);
        double chosen = alpha;
        double chosen_mu = mu_at(alpha);
        double trial = alpha;
        for (int t = 0; t < 6; ++t) {
          if (chosen_mu <= (1.0 - 0.1 * chosen * (1.0 - sigma_ratio)) * mu) break;
          trial *= 0.5;
          const double mt = mu_at(trial);
          if (mt < chosen_mu) {
            chosen = trial;
            chosen_mu = mt;
          }
        }
        alpha = chosen;
      }
    }
    stalls = alpha < 1e-10 ? stalls + 1 : 0;

    x += alpha * dx;
    s += alpha * ds;
    for (int i = 0; i < m; ++i) {
      if (eq[i]) {
        y[i] += alpha * dy[i];
        continue;
      }
      if (has_l[i]) zl[i] += alpha * dzl[i];
      if (has_u[i]) zu[i] += alpha * dzu[i];
      y[i] = zu[i] - zl[i];
    }
  }
}

void SparseQpSolver::warm_start(const Vec& z, const Vec& y) {
  warm_z_ = z;
  warm_y_ = y;
}

void SparseQpSolver::reset() {
  warm_z_.resize(0);
  warm_y_.resize(0);
  analyzed_ = false;
  pattern_key_.clear();
}

KktResiduals kkt_residuals(const SparseQp& qp, const Vec& z, const Vec& y) {
  KktResiduals res;
  const Vec cz = qp.c * z;
  for (int i = 0; i < qp.rows(); ++i)
    res.primal = std::max({res.primal, qp.l[i] - cz[i], cz[i] - qp.u[i]});
  res.primal = std::max(res.primal, 0.0);
  const Vec rd = qp.p * z + qp.q + qp.c.transpose() * y;
  res.dual = inf_norm(rd);
  return res;
}

void dump_qp(const SparseQp& qp, std::ostream& os) {
  // Triplet sections with %% headers carrying dimensions and counts, so a
  // dump round-trips without guessing sizes.
  os << "%% qp n=" << qp.vars() << " m=" << qp.rows() << "\n";
  os << "%% P " << qp.p.rows() << " " << qp.p.cols() << " " << qp.p.nonZeros() << "\n";
  for (int k = 0; k < qp.p.outerSize(); ++k)
    for (SpMat::InnerIterator it(qp.p, k); it; ++it)
      os << it.row() << " " << it.col() << " " << it.value() << "\n";
  os << "%% q " << qp.q.size() << "\n";
  for (int i = 0; i < qp.q.size(); ++i) os << qp.q[i] << "\n";
  os << "%% C " << qp.c.rows() << " " << qp.c.cols() << " " << qp.c.nonZeros() << "\n";
  for (int k = 0; k < qp.c.outerSize(); ++k)
    for (SpMat::InnerIterator it(qp.c, k); it; ++it)
      os << it.row() << " " << it.col() << " " << it.value() << "\n";
  os << "%% bounds " << qp.rows() << "\n";
  for (int i = 0; i < qp.rows(); ++i) os << qp.l[i] << " " << qp.u[i] << "\n";
}

}  // namespace citopt
