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

#include "drsolve/stationarity.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace drsolve::stationarity {

using Eigen::MatrixXd;
using Eigen::VectorXd;

const char* to_string(StationarityClass k) {
  switch (k) {
    case StationarityClass::kNone: return "none";
    case StationarityClass::kW: return "W";
    case StationarityClass::kC: return "C";
    case StationarityClass::kM: return "M";
    case StationarityClass::kS: return "S";
  }
  return "none";
}

IndexPartition classify_indices(const VectorXd& y, const VectorXd& w,
                                double tol_act) {
  if (y.size() != w.size())
    throw std::invalid_argument("classify_indices: dimension mismatch");
  IndexPartition part;
  part.tol_act = tol_act;
  for (int i = 0; i < y.size(); ++i) {
    const bool y_pos = y[i] > tol_act;
    const bool w_pos = w[i] > tol_act;
    if (y_pos && w_pos)
      throw std::invalid_argument(
          "classify_indices: point is not complementary at index " +
          std::to_string(i));
    if (y_pos)
      part.plus_zero.push_back(i);
    else if (w_pos)
      part.zero_plus.push_back(i);
    else
      part.zero_zero.push_back(i);
  }
  return part;
}

MultiplierPair recover_multipliers(const VectorXd& gradY, const MatrixXd& M,
                                   const IndexPartition& partition) {
  const int m = static_cast<int>(gradY.size());

  // Unknowns: lambda on I0+ u I00, mu on I+0 u I00. The equation is
  // lambda + M^T mu = gradY.
  std::vector<int> lam_idx = partition.zero_plus;
  lam_idx.insert(lam_idx.end(), partition.zero_zero.begin(),
                 partition.zero_zero.end());
  std::vector<int> mu_idx = partition.plus_zero;
  mu_idx.insert(mu_idx.end(), partition.zero_zero.begin(),
                partition.zero_zero.end());

  const int nu = static_cast<int>(lam_idx.size() + mu_idx.size());
  MatrixXd A = MatrixXd::Zero(m, nu);
  int col = 0;
  for (int i : lam_idx) A(i, col++) = 1.0;
  for (int i : mu_idx) A.col(col++) = M.row(i).transpose();

  MultiplierPair out;
  out.lambda = VectorXd::Zero(m);
  out.mu = VectorXd::Zero(m);
  if (nu > 0) {
    Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(A);
    VectorXd zeta = cod.solve(gradY);  // minimum-norm least squares
    col = 0;
    for (int i : lam_idx) out.lambda[i] = zeta[col++];
    for (int i : mu_idx) out.mu[i] = zeta[col++];
    out.kkt_residual = (A * zeta - gradY).cwiseAbs().maxCoeff();
  } else {
    out.kkt_residual = m > 0 ? gradY.cwiseAbs().maxCoeff() : 0.0;
  }
  return out;
}

StationarityClass classify_stationarity(const MultiplierPair& mult,
                                        const IndexPartition& partition,
                                        double tol_sign) {
  if (mult.kkt_residual > 1e-6) return StationarityClass::kNone;

  bool is_c = true, is_m = true, is_s = true;
  for (int i : partition.zero_zero) {
    const double l = mult.lambda[i];
    const double u = mult.mu[i];
    if (l * u < -tol_sign) is_c = false;
    if (!((l > tol_sign && u > tol_sign) || std::abs(l * u) <= tol_sign))
      is_m = false;
    if (l < -tol_sign || u < -tol_sign) is_s = false;
  }
  if (is_s) return StationarityClass::kS;
  if (is_m) return StationarityClass::kM;
  if (is_c) return StationarityClass::kC;
  return StationarityClass::kW;
}

namespace {

bool family_independent(const std::vector<VectorXd>& vecs, int m) {
  if (vecs.empty()) return true;
  if (static_cast<int>(vecs.size()) > m) return false;
  MatrixXd F(m, vecs.size());
  for (size_t j = 0; j < vecs.size(); ++j) F.col(static_cast<int>(j)) = vecs[j];
  Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(F);
  cod.setThreshold(1e-10);
  return cod.rank() == static_cast<Eigen::Index>(vecs.size());
}

}  // namespace

MpecLicqReport check_mpec_licq(const MatrixXd& M,
                               const IndexPartition& partition) {
  const int m = static_cast<int>(M.rows());
  std::vector<VectorXd> fam, fam_rows;
  for (int i : partition.zero_plus) {
    fam.push_back(VectorXd::Unit(m, i));
    fam_rows.push_back(VectorXd::Unit(m, i));
  }
  for (int i : partition.zero_zero) {
    fam.push_back(VectorXd::Unit(m, i));
    fam_rows.push_back(VectorXd::Unit(m, i));
  }
  for (int i : partition.plus_zero) {
    fam.push_back(M.row(i).transpose() + VectorXd::Unit(m, i));
    fam_rows.push_back(M.row(i).transpose());
  }
  for (int i : partition.zero_zero) {
    fam.push_back(M.row(i).transpose() + VectorXd::Unit(m, i));
    fam_rows.push_back(M.row(i).transpose());
  }
  MpecLicqReport rep;
  rep.holds = family_independent(fam, m);
  rep.holds_row_variant = family_independent(fam_rows, m);
  return rep;
}

}  // namespace drsolve::stationarity
