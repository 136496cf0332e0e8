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

#ifndef DRSOLVE_MINIMAX_HPP
#define DRSOLVE_MINIMAX_HPP

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "drsolve/ambiguity.hpp"
#include "drsolve/lcp.hpp"
#include "drsolve/stationarity.hpp"

namespace drsolve::minimax {

struct ComplementarityBlock {
  lcp::LcpInstance inst;
  Eigen::VectorXd y;
};

/// The objective G(x, p) = theta(x) + h(F(x) p) over the box X and the
/// ambiguity weight set P_k. F(x) has the image dimension as row count; its
/// column i comes from the inner regularized complementarity solve at
/// scenario i.
struct Model {
  Eigen::VectorXd x_lo, x_hi;  // box X
  ambiguity::SampleSet samples;
  ambiguity::MeanBallSet ball;
  int image_dim = 0;

  std::function<double(const Eigen::VectorXd&)> theta;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> image;  // F(x), l x k
  std::function<double(const Eigen::VectorXd&)> h;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad_h;

  // Optional analytic gradient of G in x, used instead of finite
  // differences when set.
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)>
      grad_x;

  // Optional hooks used by the stationarity certifier.
  std::function<std::vector<ComplementarityBlock>(const Eigen::VectorXd&)>
      blocks;
  std::function<std::vector<Eigen::VectorXd>(const Eigen::VectorXd&,
                                             const Eigen::VectorXd&)>
      grad_y_blocks;

  int k() const { return samples.count(); }
  bool in_box(const Eigen::VectorXd& x, double tol = 1e-12) const;
  Eigen::VectorXd clamp(const Eigen::VectorXd& x) const;
};

struct SolverConfig {
  double tol_x = 1e-4;  // projection-residual stopping threshold
  double tol_p = 1e-8;  // inner-max improvement threshold
  int max_outer = 500;
  int max_inner_x = 200;
  double fd_step = 1e-6;
  double armijo_c = 1e-4;
  double armijo_backtrack = 0.5;
  int armijo_max_halvings = 40;
  int sweep_directions = 720;
  int fw_starts = 64;
  unsigned seed = 0;
  int jobs = 1;
};

struct MinimaxState {
  Eigen::VectorXd x;
  Eigen::VectorXd p;
  double eps = 0.0;
  int k = 0;
  double value = 0.0;
  double residual_x = 0.0;
  double residual_p = 0.0;
  int iteration = 0;
  bool converged = false;
  bool stalled = false;
};

struct SweepRow {
  double eps = 0.0;
  int k = 0;
  double eta = 0.0;
  double value = 0.0;
  double x_err = -1.0;  // -1 when no reference solution is given
  double res_x = 0.0;
  double res_p = 0.0;
  int iters = 0;
  double seconds = 0.0;
  std::string status = "ok";
  MinimaxState state;
};

double evaluate_objective(const Model& model, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& p);

/// Forward-difference gradient with per-coordinate step
/// fd_step * max(1, |x_i|); flips to a backward step at the box boundary.
Eigen::VectorXd grad_x(const Model& model, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& p, double fd_step = 1e-6);

/// Central-difference verification variant.
Eigen::VectorXd grad_x_central(const Model& model, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& p,
                               double fd_step = 1e-6);

/// Projected gradient descent over the box at fixed p, with Armijo
/// backtracking. Stops at projection residual <= tol_x.
MinimaxState step_min_x(const Model& model, const MinimaxState& state,
                        const SolverConfig& cfg);

/// Inner maximization over P_k at fixed x: image-space direction sweep plus
/// ascent restarts from simplex vertices. Never returns a worse p.
MinimaxState step_max_p(const Model& model, const MinimaxState& state,
                        const SolverConfig& cfg);

/// Alternating minimization-maximization with the projection-residual
/// stopping rule plus an inner-max improvement test.
MinimaxState alternate(const Model& model, const SolverConfig& cfg,
                       const Eigen::VectorXd& p0,
                       const Eigen::VectorXd& x0 = Eigen::VectorXd());

/// One alternate run per (eps, k, eta) triple, rows in list order.
using ModelFactory = std::function<Model(double eps, int k, double eta)>;
std::vector<SweepRow> schedule_solve(
    const ModelFactory& factory, const std::vector<double>& eps_list,
    const std::vector<int>& k_list, const std::vector<double>& eta_list,
    const SolverConfig& cfg,
    const Eigen::VectorXd& reference_x = Eigen::VectorXd());

/// First-order certificate at (x, p): box projection residual in x, the
/// normal-cone projection residual in p, inner complementarity feasibility,
/// and per-sample W/C/M/S classification with recovered multipliers.
stationarity::Certificate certify_block_stationarity(
    const Model& model, const Eigen::VectorXd& x, const Eigen::VectorXd& p,
    double tol = 1e-4, double fd_step = 1e-6);

}  // namespace drsolve::minimax

#endif  // DRSOLVE_MINIMAX_HPP
