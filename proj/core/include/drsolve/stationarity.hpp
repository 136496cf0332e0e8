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

#ifndef DRSOLVE_STATIONARITY_HPP
#define DRSOLVE_STATIONARITY_HPP

#include <Eigen/Core>

#include "drsolve/stationarity_types.hpp"

namespace drsolve::stationarity {

/// Multipliers of the complementarity KKT system
///   gradY - lambda - M^T mu = 0,
/// with lambda = 0 on the y-active set and mu = 0 on the slack-active set.
struct MultiplierPair {
  Eigen::VectorXd lambda;
  Eigen::VectorXd mu;
  double kkt_residual = 0.0;
};

struct MpecLicqReport {
  bool holds = false;          // family {e_i} u {M_i^T + e_i}
  bool holds_row_variant = false;  // same with rows M_i alone
};

/// Per-sample MPLCC block: activity partition, recovered multipliers, and
/// the W/C/M/S class they certify.
struct BlockCertificate {
  IndexPartition partition;
  MultiplierPair multipliers;
  StationarityClass klass = StationarityClass::kNone;
  MpecLicqReport licq;
};

struct Certificate {
  std::vector<BlockCertificate> blocks;
  StationarityClass klass = StationarityClass::kNone;  // weakest over blocks
  bool licq = true;
  double kkt_residual = 0.0;
  double res_x = 0.0;
  double res_p = 0.0;
  double inner_feasibility = 0.0;
  bool pass = false;
};

/// Partitions indices by activity: y_i > tol & w_i <= tol -> plus_zero;
/// y_i <= tol & w_i > tol -> zero_plus; both small -> zero_zero.
/// Throws if some pair has both components above tolerance.
IndexPartition classify_indices(const Eigen::VectorXd& y,
                                const Eigen::VectorXd& w, double tol_act);

/// Solves the W-stationarity system for (lambda, mu) with the partition's
/// zero constraints enforced exactly; minimum-norm resolution when the
/// reduced system is underdetermined.
MultiplierPair recover_multipliers(const Eigen::VectorXd& gradY,
                                   const Eigen::MatrixXd& M,
                                   const IndexPartition& partition);

/// Strongest of W/C/M/S satisfied by the multipliers on the biactive set;
/// kNone when the KKT residual exceeds 1e-6.
StationarityClass classify_stationarity(const MultiplierPair& mult,
                                        const IndexPartition& partition,
                                        double tol_sign = 1e-8);

/// MPEC-LICQ: linear independence of
///   {e_i : i in I0+ u I00} u {M_i^T + e_i : i in I+0 u I00}.
/// Also reports the variant built from the rows M_i alone.
MpecLicqReport check_mpec_licq(const Eigen::MatrixXd& M,
                               const IndexPartition& partition);

}  // namespace drsolve::stationarity

#endif  // DRSOLVE_STATIONARITY_HPP
