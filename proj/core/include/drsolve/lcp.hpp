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

#ifndef DRSOLVE_LCP_HPP
#define DRSOLVE_LCP_HPP

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "drsolve/stationarity_types.hpp"

namespace drsolve::lcp {

// Tolerances shared between the solver and the stationarity certifier.
inline constexpr double kSolveTol = 1e-10;
inline constexpr double kActiveTol = 1e-7;
inline constexpr int kMaxNewtonIter = 200;

/// A linear complementarity problem: find y >= 0 with My + q >= 0 and
/// y complementary to My + q.
struct LcpInstance {
  Eigen::MatrixXd M;
  Eigen::VectorXd q;
  bool monotone = false;  // symmetric part of M is PSD (caller-asserted tag)

  int dim() const { return static_cast<int>(q.size()); }
  void validate() const;  // throws std::invalid_argument on shape mismatch

  /// Smallest eigenvalue of the symmetric part (M + M^T)/2.
  double min_symmetric_eigenvalue() const;
};

struct LcpSolution {
  Eigen::VectorXd y;
  Eigen::VectorXd w;  // w = My + q
  double residual = 0.0;
  stationarity::IndexPartition partition;
  bool converged = true;
};

/// Tikhonov regularization: M -> M + eps*I. A monotone input yields a
/// positive-definite instance.
LcpInstance regularize(const LcpInstance& inst, double eps);

/// max_i |min(y_i, (My+q)_i)|; zero exactly at solutions.
double natural_residual(const LcpInstance& inst, const Eigen::VectorXd& y);

/// Solves an LCP whose matrix has positive-definite symmetric part.
/// Semismooth Newton on the minimum map with Armijo damping; falls back to
/// complementary (Lemke) pivoting if Newton stalls.
LcpSolution solve_pd_lcp(const LcpInstance& inst);

/// Enumerates all 2^m complementary active sets (m <= 12) and keeps feasible
/// solutions. Test oracle; singular bases are skipped.
std::vector<LcpSolution> brute_force_lcp(const LcpInstance& inst,
                                         double feas_tol = 1e-9);

/// Solves LCP(M + eps*I, q) along a decreasing eps list. The recorded norms
/// let the caller track convergence toward the least-norm solution.
std::vector<LcpSolution> regularization_path(const LcpInstance& inst,
                                             const std::vector<double>& eps_list);

}  // namespace drsolve::lcp

#endif  // DRSOLVE_LCP_HPP
