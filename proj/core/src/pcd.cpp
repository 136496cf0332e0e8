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

#include "drsolve/pcd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace drsolve::pcd {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void PcdConfig::validate() const {
  if (T < 1 || m < 1 || tau < 1)
    throw std::invalid_argument("PcdConfig: T, m, tau must be positive");
  if (static_cast<int>(C.size()) != T || static_cast<int>(sigma.size()) != T ||
      static_cast<int>(b.size()) != T)
    throw std::invalid_argument("PcdConfig: per-market data count mismatch");
  for (int t = 0; t < T; ++t) {
    if (C[t].rows() != m || C[t].cols() != tau)
      throw std::invalid_argument("PcdConfig: C_t shape mismatch");
    if (sigma[t].size() != m)
      throw std::invalid_argument("PcdConfig: sigma_t shape mismatch");
  }
  if (x_lo.size() != n() || x_hi.size() != n())
    throw std::invalid_argument("PcdConfig: box dimension must equal n");
  if (domain_lo.size() != 2 || domain_hi.size() != 2 || mu0.size() != 2)
    throw std::invalid_argument("PcdConfig: scenario domain must be in R^2");
  if (!(eta > 0.0)) throw std::invalid_argument("PcdConfig: eta must be > 0");
}

PcdConfig PcdConfig::default_config() {
  PcdConfig cfg;
  cfg.C = {(MatrixXd(2, 1) << 2.0, 3.0).finished()};
  cfg.sigma = {(VectorXd(2) << 1.0, 2.0).finished()};
  cfg.b = {(VectorXd(2) << 0.5, 0.5).finished()};
  cfg.A = {MatrixXd::Identity(2, 2)};
  cfg.x_lo = VectorXd::Zero(5);
  cfg.x_hi = VectorXd::Constant(5, 2.0);
  cfg.domain_lo = VectorXd::Constant(2, -1.0);
  cfg.domain_hi = VectorXd::Constant(2, 1.0);
  cfg.mu0 = VectorXd::Zero(2);
  cfg.eta = 0.5;
  cfg.rho = 1.0;
  return cfg;
}

VectorXd utility(const PcdConfig& cfg, const VectorXd& x, const VectorXd& xi,
                 int t) {
  const DecisionVector d{&cfg, x};
  const VectorXd chi1 = d.x2() + d.x3() * xi[0];
  const double chi2 = std::exp(d.x4() * xi[1]);
  return cfg.C[t] * chi1 - chi2 * cfg.sigma[t] + d.x1(t);
}

lcp::LcpInstance build_block_lcp(const PcdConfig& cfg, const VectorXd& x,
                                 const VectorXd& xi, int t) {
  const int m = cfg.m;
  lcp::LcpInstance inst;
  inst.M = MatrixXd::Zero(m + 1, m + 1);
  inst.M.block(0, m, m, 1).setOnes();
  inst.M.block(m, 0, 1, m).setConstant(-1.0);
  inst.q = VectorXd(m + 1);
  inst.q.head(m) = -utility(cfg, x, xi, t);
  inst.q[m] = 1.0;
  inst.monotone = true;  // M is skew-symmetric
  return inst;
}

std::pair<VectorXd, double> solve_block_regularized(const VectorXd& u,
                                                    double eps) {
  if (!(eps > 0.0))
    throw std::invalid_argument("solve_block_regularized: eps must be > 0");
  const int m = static_cast<int>(u.size());

  // gamma solves sum_i max(0, (u_i - gamma)/eps) = 1 + eps*gamma when the
  // root is positive, else gamma = 0. Strictly decreasing and piecewise
  // linear in gamma, so sorting the breakpoints gives the root exactly.
  double gamma = 0.0;
  if (u.cwiseMax(0.0).sum() / eps > 1.0) {
    std::vector<double> sorted(u.data(), u.data() + m);
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    double prefix = 0.0;
    for (int a = 1; a <= m; ++a) {
      prefix += sorted[a - 1];
      const double cand = (prefix - eps) / (a + eps * eps);
      const bool upper_ok = sorted[a - 1] > cand;
      const bool lower_ok = (a == m) || cand >= sorted[a];
      if (upper_ok && lower_ok && cand > 0.0) {
        gamma = cand;
        break;
      }
    }
  }
  VectorXd s = ((u.array() - gamma) / eps).max(0.0);
  return {s, gamma};
}

MatrixXd share_jacobian(const VectorXd& u, double eps) {
  const auto [s, gamma] = solve_block_regularized(u, eps);
  const int m = static_cast<int>(u.size());
  MatrixXd J = MatrixXd::Zero(m, m);
  std::vector<int> active;
  for (int i = 0; i < m; ++i)
    if (s[i] > 0.0) active.push_back(i);
  if (active.empty()) return J;
  if (gamma > 0.0) {
    const double c = 1.0 / (static_cast<double>(active.size()) + eps * eps);
    for (int i : active)
      for (int j : active) J(i, j) = ((i == j ? 1.0 : 0.0) - c) / eps;
  } else {
    for (int i : active) J(i, i) = 1.0 / eps;
  }
  return J;
}

ShareSet argmax_share_set(const VectorXd& u) {
  ShareSet set;
  const double top = u.maxCoeff();
  set.least_norm = VectorXd::Zero(u.size());
  if (top < 0.0) {
    set.contains_zero = true;
    return set;
  }
  for (int i = 0; i < u.size(); ++i)
    if (u[i] == top) set.support.push_back(i);
  if (top == 0.0) {
    set.contains_zero = true;  // hull of the argmax vertices and the origin
    return set;
  }
  for (int i : set.support)
    set.least_norm[i] = 1.0 / static_cast<double>(set.support.size());
  return set;
}

minimax::Model pcd_objective(const PcdConfig& cfg,
                             const ambiguity::SampleSet& samples, double eps,
                             bool analytic_grad) {
  cfg.validate();
  for (int i = 0; i < samples.count(); ++i)
    if (!samples.in_domain(samples.points.col(i)))
      throw std::invalid_argument("pcd_objective: sample outside the domain");

  minimax::Model model;
  model.x_lo = cfg.x_lo;
  model.x_hi = cfg.x_hi;
  model.samples = samples;
  model.ball = {cfg.mu0, cfg.eta};
  model.image_dim = cfg.m * cfg.T;

  const int mT = cfg.m * cfg.T;
  const PcdConfig c = cfg;

  model.theta = [c](const VectorXd& x) {
    return 0.5 * x.head(c.m * c.T).squaredNorm();
  };

  // Bind the sample matrix by value so the callbacks own their inputs.
  const MatrixXd pts = samples.points;
  model.image = [c, eps, pts, mT](const VectorXd& x) {
    // Column i stacks the per-market regularized share blocks at scenario i.
    MatrixXd F(mT, pts.cols());
    for (int i = 0; i < pts.cols(); ++i) {
      for (int t = 0; t < c.T; ++t) {
        const auto [s, gamma] =
            solve_block_regularized(utility(c, x, pts.col(i), t), eps);
        F.block(t * c.m, i, c.m, 1) = s;
      }
    }
    return F;
  };

  model.h = [c](const VectorXd& v) {
    double val = 0.0;
    for (int t = 0; t < c.T; ++t)
      val += (c.A[t] * v.segment(t * c.m, c.m) - c.b[t]).squaredNorm();
    return c.rho * val;
  };
  model.grad_h = [c](const VectorXd& v) {
    VectorXd g(v.size());
    for (int t = 0; t < c.T; ++t)
      g.segment(t * c.m, c.m) =
          2.0 * c.rho * c.A[t].transpose() *
          (c.A[t] * v.segment(t * c.m, c.m) - c.b[t]);
    return g;
  };

  model.blocks = [c, eps, pts](const VectorXd& x) {
    std::vector<minimax::ComplementarityBlock> blocks;
    blocks.reserve(pts.cols() * c.T);
    for (int i = 0; i < pts.cols(); ++i) {
      for (int t = 0; t < c.T; ++t) {
        minimax::ComplementarityBlock blk;
        blk.inst = lcp::regularize(build_block_lcp(c, x, pts.col(i), t), eps);
        const auto [s, gamma] =
            solve_block_regularized(utility(c, x, pts.col(i), t), eps);
        blk.y = VectorXd(c.m + 1);
        blk.y << s, gamma;
        blocks.push_back(std::move(blk));
      }
    }
    return blocks;
  };

  // grad of G w.r.t. block (i,t): the s-part feels p_i times the share
  // mismatch gradient; the gamma coordinate does not enter G.
  model.grad_y_blocks = [c, pts, image = model.image, grad_h = model.grad_h](
                            const VectorXd& x, const VectorXd& p) {
    const MatrixXd F = image(x);
    const VectorXd gh = grad_h(F * p);
    std::vector<VectorXd> grads;
    grads.reserve(pts.cols() * c.T);
    for (int i = 0; i < pts.cols(); ++i) {
      for (int t = 0; t < c.T; ++t) {
        VectorXd g = VectorXd::Zero(c.m + 1);
        g.head(c.m) = p[i] * gh.segment(t * c.m, c.m);
        grads.push_back(std::move(g));
      }
    }
    return grads;
  };

  if (analytic_grad) {
    // Chain rule through the fixed active set of each share block:
    // grad G = (x1, 0) + sum_i p_i (du/dx)^T (ds/du)^T grad_h segment.
    model.grad_x = [c, eps, pts, mT, image = model.image,
                    grad_h = model.grad_h](const VectorXd& x,
                                           const VectorXd& p) {
      const VectorXd gh = grad_h(image(x) * p);
      const DecisionVector d{&c, x};
      VectorXd g = VectorXd::Zero(x.size());
      g.head(mT) = x.head(mT);
      const int i2 = c.m * c.T, i3 = i2 + c.tau, i4 = i3 + c.tau;
      for (int i = 0; i < pts.cols(); ++i) {
        if (p[i] == 0.0) continue;
        const double xi1 = pts(0, i), xi2 = pts(1, i);
        const double chi2 = std::exp(d.x4() * xi2);
        for (int t = 0; t < c.T; ++t) {
          const VectorXd u = utility(c, x, pts.col(i), t);
          const VectorXd w = p[i] * share_jacobian(u, eps).transpose() *
                             gh.segment(t * c.m, c.m);
          g.segment(t * c.m, c.m) += w;
          g.segment(i2, c.tau) += c.C[t].transpose() * w;
          g.segment(i3, c.tau) += xi1 * (c.C[t].transpose() * w);
          g[i4] += -xi2 * chi2 * c.sigma[t].dot(w);
        }
      }
      return g;
    };
  }

  return model;
}

ambiguity::SampleSet make_grid_samples(const PcdConfig& cfg, int k) {
  const int side = static_cast<int>(std::lround(std::sqrt(double(k))));
  if (k < 1 || side * side != k)
    throw std::invalid_argument("make_grid_samples: k must be a perfect square");

  ambiguity::SampleSet set;
  set.nu = 2;
  set.domain_lo = cfg.domain_lo;
  set.domain_hi = cfg.domain_hi;
  set.points = MatrixXd(2, k);
  int col = 0;
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      // Midpoints: lo + (2j-1)/(2*side) of the box width per axis.
      set.points(0, col) =
          cfg.domain_lo[0] +
          (cfg.domain_hi[0] - cfg.domain_lo[0]) * (2.0 * i + 1.0) / (2.0 * side);
      set.points(1, col) =
          cfg.domain_lo[1] +
          (cfg.domain_hi[1] - cfg.domain_lo[1]) * (2.0 * j + 1.0) / (2.0 * side);
      ++col;
    }
  }
  return set;
}

}  // namespace drsolve::pcd
