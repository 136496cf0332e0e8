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

#ifndef DRSOLVE_PCD_HPP
#define DRSOLVE_PCD_HPP

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "drsolve/ambiguity.hpp"
#include "drsolve/lcp.hpp"
#include "drsolve/minimax.hpp"

namespace drsolve::pcd {

/// Pure-characteristics demand instance: consumers pick the best product by
/// linear utility over the share simplex; product shares are the solution of
/// a skew-symmetric block complementarity system per market.
struct PcdConfig {
  int T = 1;    // markets
  int m = 2;    // products per market
  int tau = 1;  // characteristic dimension

  std::vector<Eigen::MatrixXd> C;      // per market, m x tau
  std::vector<Eigen::VectorXd> sigma;  // per market, m
  std::vector<Eigen::VectorXd> b;      // target shares, per market
  std::vector<Eigen::MatrixXd> A;      // share aggregation (identity here)

  Eigen::VectorXd x_lo, x_hi;            // decision box X in R^n
  Eigen::VectorXd domain_lo, domain_hi;  // scenario box in R^2
  Eigen::VectorXd mu0;
  double eta = 0.5;
  double rho = 1.0;

  int n() const { return m * T + 2 * tau + 1; }
  void validate() const;

  /// Two-product single-market instance with C=(2,3), sigma=(1,2),
  /// b=(0.5,0.5), X=[0,2]^5, domain [-1,1]^2, mu0=0.
  static PcdConfig default_config();
};

/// Accessor views into the stacked decision vector
/// x = (x_11,...,x_1T, x2, x3, x4).
struct DecisionVector {
  const PcdConfig* cfg;
  Eigen::VectorXd x;

  Eigen::VectorXd x1(int t) const { return x.segment(t * cfg->m, cfg->m); }
  Eigen::VectorXd x2() const { return x.segment(cfg->m * cfg->T, cfg->tau); }
  Eigen::VectorXd x3() const {
    return x.segment(cfg->m * cfg->T + cfg->tau, cfg->tau);
  }
  double x4() const { return x[cfg->m * cfg->T + 2 * cfg->tau]; }
};

/// u_t(x, xi) = C_t (x2 + x3 xi_1) - exp(x4 xi_2) sigma_t + x_1t.
Eigen::VectorXd utility(const PcdConfig& cfg, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& xi, int t = 0);

/// The (m+1) x (m+1) skew block M = [[0, e], [-e^T, 0]] with q = (-u; 1).
lcp::LcpInstance build_block_lcp(const PcdConfig& cfg, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& xi, int t = 0);

/// Closed-form solution of the regularized share block
///   0 <= s  perp  eps*s + gamma*e - u >= 0,
///   0 <= gamma  perp  eps*gamma + 1 - e^T s >= 0.
/// The scalar gamma is the root of a piecewise-linear monotone equation,
/// found exactly by sorting the breakpoints.
std::pair<Eigen::VectorXd, double> solve_block_regularized(
    const Eigen::VectorXd& u, double eps);

/// Piecewise Jacobian ds/du of the regularized block at the fixed active
/// set A = {i : s_i > 0}: rows and columns in A carry
/// (I - ee^T/(|A| + eps^2))/eps when gamma > 0, I/eps when gamma = 0.
Eigen::MatrixXd share_jacobian(const Eigen::VectorXd& u, double eps);

/// The argmax face of max {<s, u> : e^T s <= 1, s >= 0}.
struct ShareSet {
  std::vector<int> support;   // coordinates spanning the face
  bool contains_zero = false;
  Eigen::VectorXd least_norm;
};
ShareSet argmax_share_set(const Eigen::VectorXd& u);

/// Minimax objective for the instance: theta = x1 quadratic, image columns
/// are the per-scenario regularized share blocks, h the aggregated
/// squared-share mismatch. With analytic_grad the model carries a chain-rule
/// gradient built from share_jacobian instead of finite differences.
minimax::Model pcd_objective(const PcdConfig& cfg,
                             const ambiguity::SampleSet& samples, double eps,
                             bool analytic_grad = false);

/// Midpoint sqrt(k) x sqrt(k) uniform grid on the scenario box.
ambiguity::SampleSet make_grid_samples(const PcdConfig& cfg, int k);

}  // namespace drsolve::pcd

#endif  // DRSOLVE_PCD_HPP
