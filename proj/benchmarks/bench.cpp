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

#include <random>

#include <benchmark/benchmark.h>

#include "drsolve/ambiguity.hpp"
#include "drsolve/lcp.hpp"
#include "drsolve/pcd.hpp"
#include "drsolve/transport.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;
using namespace drsolve;

namespace {

VectorXd random_vector(int n, std::mt19937& rng, double lo = -2.0,
                       double hi = 2.0) {
  std::uniform_real_distribution<double> unif(lo, hi);
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = unif(rng);
  return v;
}

void bm_block_closed_form(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  std::mt19937 rng(1);
  const VectorXd u = random_vector(m, rng);
  for (auto _ : state)
    benchmark::DoNotOptimize(pcd::solve_block_regularized(u, 0.1));
}
BENCHMARK(bm_block_closed_form)->Arg(2)->Arg(5)->Arg(20)->Arg(100);

void bm_block_newton(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  std::mt19937 rng(2);
  lcp::LcpInstance inst;
  inst.M = MatrixXd::Zero(m + 1, m + 1);
  inst.M.block(0, m, m, 1).setOnes();
  inst.M.block(m, 0, 1, m).setConstant(-1.0);
  inst.q = VectorXd(m + 1);
  inst.q.head(m) = -random_vector(m, rng);
  inst.q[m] = 1.0;
  inst.monotone = true;
  const auto reg = lcp::regularize(inst, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(lcp::solve_pd_lcp(reg));
}
BENCHMARK(bm_block_newton)->Arg(2)->Arg(5)->Arg(20);

void bm_wasserstein(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937 rng(3);
  transport::DiscreteDistribution p, q;
  p.atoms = MatrixXd::Random(2, n);
  p.weights = VectorXd::Constant(n, 1.0 / n);
  q.atoms = MatrixXd::Random(2, n);
  q.weights = VectorXd::Constant(n, 1.0 / n);
  for (auto _ : state) benchmark::DoNotOptimize(transport::wasserstein(p, q));
}
BENCHMARK(bm_wasserstein)->Arg(10)->Arg(30)->Arg(100);

void bm_project_ambiguity(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const int side = static_cast<int>(std::lround(std::sqrt(double(k))));
  pcd::PcdConfig cfg = pcd::PcdConfig::default_config();
  const auto samples = pcd::make_grid_samples(cfg, side * side);
  const ambiguity::MeanBallSet ball{VectorXd::Zero(2), 0.05};
  std::mt19937 rng(4);
  const VectorXd z = random_vector(samples.count(), rng, -0.5, 1.5);
  for (auto _ : state)
    benchmark::DoNotOptimize(ambiguity::project_ambiguity(samples, ball, z));
}
BENCHMARK(bm_project_ambiguity)->Arg(25)->Arg(100)->Arg(625)->Arg(2500);

void bm_objective_eval(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  pcd::PcdConfig cfg = pcd::PcdConfig::default_config();
  const auto model = pcd::pcd_objective(cfg, pcd::make_grid_samples(cfg, k), 0.1);
  const VectorXd x = (VectorXd(5) << 0.1, 0.1, 1.2, 0.2, 0.3).finished();
  const VectorXd p = VectorXd::Constant(k, 1.0 / k);
  for (auto _ : state)
    benchmark::DoNotOptimize(minimax::evaluate_objective(model, x, p));
}
BENCHMARK(bm_objective_eval)->Arg(25)->Arg(625)->Arg(2500);

}  // namespace

BENCHMARK_MAIN();
