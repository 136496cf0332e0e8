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

#ifndef DRSOLVE_TRANSPORT_HPP
#define DRSOLVE_TRANSPORT_HPP

#include <vector>

#include <Eigen/Core>

#include "drsolve/ambiguity.hpp"

namespace drsolve::transport {

/// Finitely supported distribution: atom i is column i of `atoms`.
struct DiscreteDistribution {
  Eigen::MatrixXd atoms;    // nu x n
  Eigen::VectorXd weights;  // nonnegative, sums to 1

  int size() const { return static_cast<int>(atoms.cols()); }
  int dim() const { return static_cast<int>(atoms.rows()); }
  void validate(double tol = 1e-10) const;
};

struct FillDistanceReport {
  double probe_value = 0.0;   // max over the probe grid (includes corners)
  double corner_value = 0.0;  // max over box corners alone
  double value() const { return probe_value; }
};

/// Index of the nearest sample; ties go to the lowest index.
int voronoi_assign(const ambiguity::SampleSet& samples,
                   const Eigen::VectorXd& x);

/// Largest distance from the domain box to the sample set, estimated on a
/// uniform probe grid (probe_resolution points per axis, corners included).
/// Exact for midpoint grids; a lower bound in general.
FillDistanceReport fill_distance(const ambiguity::SampleSet& samples,
                                 int probe_resolution = 401);

/// Pushes each Voronoi cell's mass onto its sample point. Zero-weight atoms
/// are retained.
DiscreteDistribution voronoi_projection(const DiscreteDistribution& p,
                                        const ambiguity::SampleSet& samples);

/// Order-1 Wasserstein distance with Euclidean ground cost, via the primal
/// transportation linear program (transportation simplex).
double wasserstein(const DiscreteDistribution& p,
                   const DiscreteDistribution& q);

/// sup over ps of inf over qs of the pairwise Wasserstein distance.
double deviation(const std::vector<DiscreteDistribution>& ps,
                 const std::vector<DiscreteDistribution>& qs);

}  // namespace drsolve::transport

#endif  // DRSOLVE_TRANSPORT_HPP
