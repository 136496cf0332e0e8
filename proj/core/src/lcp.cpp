// Copyright 2026 The drsolve Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "drsolve/lcp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "drsolve/stationarity.hpp"

namespace drsolve::lcp {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd min_map(const VectorXd& y, const VectorXd& w) {
  return y.cwiseMin(w);
}

LcpSolution make_solution(const LcpInstance& inst, const VectorXd& y_in,
                          bool converged) {
  // Clamp tiny negative components when that does not hurt the residual.
  VectorXd y = y_in;
  VectorXd w = inst.M * y + inst.q;
  double res = min_map(y, w).cwiseAbs().maxCoeff();
  VectorXd yc = y.cwiseMax(0.0);
  VectorXd wc = inst.M * yc + inst.q;
  double res_c = min_map(yc, wc).cwiseAbs().maxCoeff();
  if (res_c <= res) {
    y = yc;
    w = wc;
    res = res_c;
  }
  LcpSolution sol;
  sol.y = y;
  sol.w = w;
  sol.residual = res;
  sol.converged = converged;
  sol.partition = stationarity::classify_indices(y, w, kActiveTol);
  return sol;
}

// Complementary pivoting with the covering vector e (Lemke's method).
// Returns the solution vector y, or nullopt on ray termination.
std::optional<VectorXd> lemke(const LcpInstance& inst) {
  const int m = inst.dim();
  if (inst.q.minCoeff() >= 0.0) return VectorXd::Zero(m);

  // Column layout: w_i -> i, y_i -> m+i, z0 -> 2m.
  MatrixXd T(m, 2 * m + 2);
  T.leftCols(m) = MatrixXd::Identity(m, m);
  T.middleCols(m, m) = -inst.M;
  T.col(2 * m) = -VectorXd::Ones(m);
  T.col(2 * m + 1) = inst.q;

  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = i;

  int r;
  inst.q.minCoeff(&r);
  int entering = 2 * m;  // z0 enters first

  const int max_pivots = 50 * (m + 1) * (m + 1) + 1000;
  for (int iter = 0; iter < max_pivots; ++iter) {
    // Pivot: entering column on row r.
    const double piv = T(r, entering);
    if (std::abs(piv) < 1e-14) return std::nullopt;
    T.row(r) /= piv;
    for (int i = 0; i < m; ++i) {
      if (i != r && T(i, entering) != 0.0)
        T.row(i) -= T(i, entering) * T.row(r);
    }
    const int leaving = basis[r];
    basis[r] = entering;

    if (leaving == 2 * m) break;  // z0 left the basis: solution found

    // Drive the complement of the variable that just left.
    entering = (leaving < m) ? leaving + m : leaving - m;

    // Ratio test, lowest-index tie-break.
    r = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      if (T(i, entering) > 1e-12) {
        const double ratio = T(i, 2 * m + 1) / T(i, entering);
        if (ratio < best - 1e-12) {
          best = ratio;
          r = i;
        } else if (ratio < best + 1e-12 && r >= 0) {
          // Prefer dropping z0 when tied, else the lowest basis index.
          if (basis[i] == 2 * m || (basis[r] != 2 * m && basis[i] < basis[r]))
            r = i;
        }
      }
    }
    if (r < 0) return std::nullopt;  // unbounded ray
  }

  VectorXd y = VectorXd::Zero(m);
  for (int i = 0; i < m; ++i) {
    if (basis[i] >= m && basis[i] < 2 * m) y[basis[i] - m] = T(i, 2 * m + 1);
    if (basis[i] == 2 * m && std::abs(T(i, 2 * m + 1)) > 1e-9)
      return std::nullopt;
  }
  return y;
}

}  // namespace

void LcpInstance::validate() const {
  if (M.rows() != M.cols())
    throw std::invalid_argument("LcpInstance: M must be square");
  if (M.rows() != q.size())
    throw std::invalid_argument("LcpInstance: dimensions of M and q disagree");
}

double LcpInstance::min_symmetric_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (M + M.transpose()));
  return es.eigenvalues().minCoeff();
}

LcpInstance regularize(const LcpInstance& inst, double eps) {
  inst.validate();
  if (!(eps > 0.0)) throw std::invalid_argument("regularize: eps must be > 0");
  LcpInstance out = inst;
  out.M += eps * MatrixXd::Identity(inst.dim(), inst.dim());
  return out;
}

double natural_residual(const LcpInstance& inst, const VectorXd& y) {
  inst.validate();
  if (y.size() != inst.q.size())
    throw std::invalid_argument("natural_residual: dimension mismatch");
  return min_map(y, inst.M * y + inst.q).cwiseAbs().maxCoeff();
}

LcpSolution solve_pd_lcp(const LcpInstance& inst) {
  inst.validate();
  const int m = inst.dim();
  if (inst.min_symmetric_eigenvalue() <= 0.0)
    throw std::invalid_argument(
        "solve_pd_lcp: symmetric part of M is not positive definite");

  VectorXd y = (-inst.q).cwiseMax(0.0);
  VectorXd w = inst.M * y + inst.q;
  VectorXd phi = min_map(y, w);
  double merit = 0.5 * phi.squaredNorm();
  int stall = 0;

  for (int iter = 0; iter < kMaxNewtonIter; ++iter) {
    if (phi.cwiseAbs().maxCoeff() <= kSolveTol) return make_solution(inst, y, true);

    // B-subdifferential element of the minimum map: identity row where the
    // y-branch is active, the M row otherwise.
    MatrixXd J(m, m);
    for (int i = 0; i < m; ++i) {
      if (y[i] <= w[i])
        J.row(i) = VectorXd::Unit(m, i).transpose();
      else
        J.row(i) = inst.M.row(i);
    }
    VectorXd d = J.partialPivLu().solve(-phi);
    if (!d.allFinite()) break;

    double t = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      VectorXd y_t = y + t * d;
      VectorXd w_t = inst.M * y_t + inst.q;
      double merit_t = 0.5 * min_map(y_t, w_t).squaredNorm();
      if (merit_t <= (1.0 - 2e-4 * t) * merit) {
        y = y_t;
        w = w_t;
        phi = min_map(y, w);
        stall = (merit - merit_t < 1e-16 * (1.0 + merit)) ? stall + 1 : 0;
        merit = merit_t;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) ++stall;
    if (stall >= 5) break;
  }

  if (phi.cwiseAbs().maxCoeff() <= kSolveTol) return make_solution(inst, y, true);

  // Newton stalled; complementary pivoting is finite.
  if (auto yl = lemke(inst)) {
    LcpSolution sol = make_solution(inst, *yl, true);
    if (sol.residual <= kSolveTol) return sol;
    if (sol.residual < phi.cwiseAbs().maxCoeff()) {
      sol.converged = false;
      return sol;
    }
  }
  LcpSolution sol = make_solution(inst, y, false);
  sol.converged = false;
  return sol;
}

std::vector<LcpSolution> brute_force_lcp(const LcpInstance& inst,
                                         double feas_tol) {
  inst.validate();
  const int m = inst.dim();
  if (m > 12) throw std::invalid_argument("brute_force_lcp: m > 12");

  std::vector<LcpSolution> sols;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    std::vector<int> active;
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) active.push_back(i);

    VectorXd y = VectorXd::Zero(m);
    if (!active.empty()) {
      const int a = static_cast<int>(active.size());
      MatrixXd Maa(a, a);
      VectorXd qa(a);
      for (int i = 0; i < a; ++i) {
        qa[i] = inst.q[active[i]];
        for (int j = 0; j < a; ++j) Maa(i, j) = inst.M(active[i], active[j]);
      }
      Eigen::FullPivLU<MatrixXd> lu(Maa);
      if (lu.rank() < a) continue;  // singular basis
      VectorXd ya = lu.solve(-qa);
      for (int i = 0; i < a; ++i) y[active[i]] = ya[i];
    }
    VectorXd w = inst.M * y + inst.q;
    if (y.minCoeff() < -feas_tol || w.minCoeff() < -feas_tol) continue;

    bool dup = false;
    for (const auto& s : sols)
      if ((s.y - y).cwiseAbs().maxCoeff() <= 1e-8) dup = true;
    if (!dup) sols.push_back(make_solution(inst, y, true));
  }
  return sols;
}

std::vector<LcpSolution> regularization_path(const LcpInstance& inst,
                                             const std::vector<double>& eps_list) {
  std::vector<LcpSolution> path;
  path.reserve(eps_list.size());
  for (double eps : eps_list) path.push_back(solve_pd_lcp(regularize(inst, eps)));
  return path;
}

}  // namespace drsolve::lcp
