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

#ifndef DRSOLVE_AMBIGUITY_HPP
#define DRSOLVE_AMBIGUITY_HPP

#include <optional>
#include <vector>

#include <Eigen/Core>

namespace drsolve::ambiguity {

/// Scenario points inside an axis-aligned box domain.
struct SampleSet {
  int nu = 0;                            // ambient dimension
  Eigen::MatrixXd points;                // nu x k, column i is sample i
  Eigen::VectorXd domain_lo, domain_hi;  // box domain

  int count() const { return static_cast<int>(points.cols()); }
  bool in_domain(const Eigen::VectorXd& x, double tol = 1e-12) const;
  void validate() const;  // points inside the box, pairwise distinct
};

/// Mean constraint ||E_p[xi] - mu0||^2 <= eta.
struct MeanBallSet {
  Eigen::VectorXd mu0;
  double eta = 0.0;  // squared radius
};

/// A point of the probability simplex (up to the stated slacks).
struct WeightVector {
  Eigen::VectorXd p;
  bool valid(double tol = 1e-10) const;
};

struct ProjectionResult {
  Eigen::VectorXd p;
  bool converged = true;
  double infeasibility = 0.0;  // residual against both constraints
};

struct SlaterReport {
  std::optional<WeightVector> witness;  // present iff the cell masses land in P_k
  double violation = 0.0;               // mean-ball violation when infeasible
};

/// Membership in P_k: simplex invariants plus the weighted mean in the ball.
bool member(const SampleSet& samples, const MeanBallSet& ball,
            const Eigen::VectorXd& p, double slack = 1e-9);

/// Euclidean projection onto the probability simplex (sorted-threshold rule).
Eigen::VectorXd project_simplex(const Eigen::VectorXd& z);

/// Euclidean projection onto {p : ||Qp - mu0||^2 <= eta} where Q stacks the
/// sample points columnwise. Single-constraint KKT with a scalar root-find in
/// the Lagrange multiplier, using the nu x nu Gram reduction.
ProjectionResult project_mean_ball(const SampleSet& samples,
                                   const MeanBallSet& ball,
                                   const Eigen::VectorXd& z);

/// Euclidean projection onto P_k = simplex ∩ mean ball via Dykstra's
/// alternating projections.
ProjectionResult project_ambiguity(const SampleSet& samples,
                                   const MeanBallSet& ball,
                                   const Eigen::VectorXd& z,
                                   double tol = 1e-10, int max_sweeps = 5000);

/// Feasibility witness from the Voronoi cell masses of a base distribution.
SlaterReport slater_witness(const SampleSet& samples, const MeanBallSet& ball,
                            const Eigen::VectorXd& cell_weights);

/// (delta/alpha) * dist of the Q-mean from the ball: the Hoffman-type bound
/// on the Wasserstein distance from Q to the ambiguity set.
double hoffman_bound(const MeanBallSet& ball, const Eigen::VectorXd& q_mean,
                     double delta, double alpha);

/// Overload for an arbitrary discrete distribution on the domain: atoms are
/// columns of q_atoms with the matching weights.
double hoffman_bound(const MeanBallSet& ball, const Eigen::MatrixXd& q_atoms,
                     const Eigen::VectorXd& q_weights, double delta,
                     double alpha);

}  // namespace drsolve::ambiguity

#endif  // DRSOLVE_AMBIGUITY_HPP
