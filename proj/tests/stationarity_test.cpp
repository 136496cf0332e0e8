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

#include <random>

#include <doctest.h>

#include "drsolve/lcp.hpp"
#include "oracles.hpp"

using namespace drsolve;
using namespace drsolve::stationarity;
using Eigen::MatrixXd;
using Eigen::VectorXd;

using testing::grid_attainability;

TEST_CASE("index classification") {
  const auto p1 = classify_indices((VectorXd(2) << 1, 0).finished(),
                                   (VectorXd(2) << 0, 2).finished(), 1e-7);
  CHECK(p1.plus_zero == std::vector<int>{0});
  CHECK(p1.zero_plus == std::vector<int>{1});
  CHECK(p1.zero_zero.empty());

  const auto p2 = classify_indices(VectorXd::Zero(3), VectorXd::Zero(3), 1e-7);
  CHECK(p2.zero_zero.size() == 3);

  const auto p3 = classify_indices((VectorXd(2) << 1e-9, 1).finished(),
                                   (VectorXd(2) << 1e-9, 0).finished(), 1e-7);
  CHECK(p3.zero_zero == std::vector<int>{0});
  CHECK(p3.plus_zero == std::vector<int>{1});

  CHECK_THROWS_AS(classify_indices((VectorXd(1) << 1).finished(),
                                   (VectorXd(1) << 1).finished(), 1e-7),
                  std::invalid_argument);
}

TEST_CASE("multiplier recovery on pure partitions") {
  const MatrixXd M = MatrixXd::Identity(3, 3);
  const VectorXd g = (VectorXd(3) << 1, -2, 3).finished();

  IndexPartition all_zp;
  all_zp.zero_plus = {0, 1, 2};
  const auto zp = recover_multipliers(g, M, all_zp);
  CHECK((zp.lambda - g).norm() <= 1e-12);
  CHECK(zp.mu.norm() <= 1e-12);
  CHECK(zp.kkt_residual <= 1e-12);

  IndexPartition all_pz;
  all_pz.plus_zero = {0, 1, 2};
  const auto pz = recover_multipliers(g, M, all_pz);
  CHECK(pz.lambda.norm() <= 1e-12);
  CHECK((pz.mu - g).norm() <= 1e-12);
}

TEST_CASE("multiplier recovery matches least squares on random data") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 2 + trial % 3;
    const MatrixXd M = testing::random_pd_matrix(m, rng);
    const VectorXd g = testing::random_vector(m, rng);

    IndexPartition part;
    for (int i = 0; i < m; ++i) {
      switch ((trial + i) % 3) {
        case 0: part.plus_zero.push_back(i); break;
        case 1: part.zero_plus.push_back(i); break;
        default: part.zero_zero.push_back(i); break;
      }
    }
    const auto mult = recover_multipliers(g, M, part);
    // Fixed-to-zero constraints exact, equation within the reported residual.
    for (int i : part.plus_zero) CHECK(mult.lambda[i] == 0.0);
    for (int i : part.zero_plus) CHECK(mult.mu[i] == 0.0);
    const double res =
        (g - mult.lambda - M.transpose() * mult.mu).norm();
    CHECK(res <= mult.kkt_residual + 1e-10);
    CHECK(mult.kkt_residual <= 1e-8);  // these systems are always consistent
  }
}

TEST_CASE("classification of the sign conditions") {
  IndexPartition no_bi;
  no_bi.plus_zero = {0};
  no_bi.zero_plus = {1};
  MultiplierPair clean;
  clean.lambda = (VectorXd(2) << 0, 5).finished();
  clean.mu = (VectorXd(2) << -2, 0).finished();
  clean.kkt_residual = 0.0;
  CHECK(classify_stationarity(clean, no_bi) == StationarityClass::kS);

  IndexPartition bi;
  bi.zero_zero = {0};
  MultiplierPair w_only;
  w_only.lambda = (VectorXd(1) << 1).finished();
  w_only.mu = (VectorXd(1) << -1).finished();
  w_only.kkt_residual = 0.0;
  CHECK(classify_stationarity(w_only, bi) == StationarityClass::kW);

  MultiplierPair m_not_s;
  m_not_s.lambda = (VectorXd(1) << 0).finished();
  m_not_s.mu = (VectorXd(1) << -3).finished();
  m_not_s.kkt_residual = 0.0;
  CHECK(classify_stationarity(m_not_s, bi) == StationarityClass::kM);

  MultiplierPair c_not_m;
  c_not_m.lambda = (VectorXd(1) << -1).finished();
  c_not_m.mu = (VectorXd(1) << -1).finished();
  c_not_m.kkt_residual = 0.0;
  CHECK(classify_stationarity(c_not_m, bi) == StationarityClass::kC);

  MultiplierPair s_pair;
  s_pair.lambda = (VectorXd(1) << 2).finished();
  s_pair.mu = (VectorXd(1) << 3).finished();
  s_pair.kkt_residual = 0.0;
  CHECK(classify_stationarity(s_pair, bi) == StationarityClass::kS);

  MultiplierPair bad;
  bad.lambda = s_pair.lambda;
  bad.mu = s_pair.mu;
  bad.kkt_residual = 1e-3;
  CHECK(classify_stationarity(bad, bi) == StationarityClass::kNone);
}

TEST_CASE("classification chain ordering") {
  CHECK(StationarityClass::kS > StationarityClass::kM);
  CHECK(StationarityClass::kM > StationarityClass::kC);
  CHECK(StationarityClass::kC > StationarityClass::kW);
  CHECK(StationarityClass::kW > StationarityClass::kNone);
  CHECK(std::string(to_string(StationarityClass::kS)) == "S");
  CHECK(std::string(to_string(StationarityClass::kNone)) == "none");
}

TEST_CASE("MPEC-LICQ") {
  IndexPartition all_zp;
  all_zp.zero_plus = {0, 1};
  CHECK(check_mpec_licq(MatrixXd::Identity(2, 2), all_zp).holds);

  // m=1, M=[1], I00={1}: family {e1, M_1^T + e1} = {1, 2}, dependent.
  IndexPartition bi;
  bi.zero_zero = {0};
  const auto rep = check_mpec_licq(MatrixXd::Ones(1, 1), bi);
  CHECK_FALSE(rep.holds);
  CHECK_FALSE(rep.holds_row_variant);

  // Share-block skew matrix with no biactivity: independent.
  MatrixXd Mblk = MatrixXd::Zero(3, 3);
  Mblk.block(0, 2, 2, 1).setOnes();
  Mblk.block(2, 0, 1, 2).setConstant(-1.0);
  IndexPartition generic;
  generic.plus_zero = {0, 2};
  generic.zero_plus = {1};
  CHECK(check_mpec_licq(Mblk, generic).holds);
}

TEST_CASE("PD LCP solutions with generic q classify as S") {
  std::mt19937 rng(13);
  int checked = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const int m = 2 + trial % 3;
    lcp::LcpInstance inst;
    inst.M = testing::random_pd_matrix(m, rng);
    inst.q = testing::random_vector(m, rng);
    const auto sol = lcp::solve_pd_lcp(inst);
    if (!sol.partition.zero_zero.empty()) continue;  // generic q only
    // Any gradY consistent with the system: build one from nonneg multipliers.
    VectorXd lam = VectorXd::Zero(m), mu = VectorXd::Zero(m);
    for (int i : sol.partition.zero_plus) lam[i] = 1.0 + i;
    for (int i : sol.partition.plus_zero) mu[i] = 0.5 + i;
    const VectorXd g = lam + inst.M.transpose() * mu;
    const auto rec = recover_multipliers(g, inst.M, sol.partition);
    CHECK(classify_stationarity(rec, sol.partition) == StationarityClass::kS);
    ++checked;
  }
  CHECK(checked >= 40);
}

TEST_CASE("classification agrees with the multiplier-grid oracle") {
  std::mt19937 rng(19);
  int unique_checked = 0, degenerate_checked = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const int m = 2 + trial % 2;  // m <= 3
    const MatrixXd M = testing::random_pd_matrix(m, rng);

    IndexPartition part;
    for (int i = 0; i < m; ++i) {
      switch ((trial / 3 + i) % 3) {
        case 0: part.plus_zero.push_back(i); break;
        case 1: part.zero_plus.push_back(i); break;
        default: part.zero_zero.push_back(i); break;
      }
    }

    // Seed a consistent gradY from random multipliers honoring the zeros.
    VectorXd lam = VectorXd::Zero(m), mu = VectorXd::Zero(m);
    for (int i : part.zero_plus) lam[i] = testing::random_vector(1, rng)[0];
    for (int i : part.zero_zero) lam[i] = testing::random_vector(1, rng)[0];
    for (int i : part.plus_zero) mu[i] = testing::random_vector(1, rng)[0];
    for (int i : part.zero_zero) mu[i] = testing::random_vector(1, rng)[0];
    const VectorXd g = lam + M.transpose() * mu;

    const auto rec = recover_multipliers(g, M, part);
    const auto klass = classify_stationarity(rec, part);
    const auto oracle = grid_attainability(g, M, part);

    // Soundness: the returned class is attainable per the oracle.
    REQUIRE(oracle.w);
    if (klass == StationarityClass::kS) CHECK(oracle.s);
    if (klass >= StationarityClass::kM) CHECK(oracle.m);
    if (klass >= StationarityClass::kC) CHECK(oracle.c);
    CHECK(klass >= StationarityClass::kW);

    if (part.zero_zero.empty()) {
      // Unique-multiplier instances: exact agreement with the strongest class.
      const auto strongest = oracle.s   ? StationarityClass::kS
                             : oracle.m ? StationarityClass::kM
                             : oracle.c ? StationarityClass::kC
                                        : StationarityClass::kW;
      CHECK(klass == strongest);
      ++unique_checked;
    } else {
      ++degenerate_checked;
    }
  }
  CHECK(unique_checked >= 20);
  CHECK(degenerate_checked >= 30);
}
