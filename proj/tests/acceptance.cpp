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
//
// End-to-end acceptance gate. Each criterion prints one PASS/FAIL line; the
// process exits with the number of failed criteria. Tolerances are pinned
// here on purpose; loosening them is not an option.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "drsolve/ambiguity.hpp"
#include "drsolve/io.hpp"
#include "drsolve/lcp.hpp"
#include "drsolve/minimax.hpp"
#include "drsolve/pcd.hpp"
#include "drsolve/stationarity.hpp"
#include "drsolve/transport.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace drsolve;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using nlohmann::json;

namespace {

std::string g_binary;
fs::path g_dir;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

int default_jobs() {
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::min(8u, hw == 0 ? 1u : hw));
}

const VectorXd kXStar = [] {
  VectorXd x(5);
  x << 0, 0, 1, 0, 0;
  return x;
}();

minimax::Model make_model(double eps, int k, double eta) {
  pcd::PcdConfig cfg = pcd::PcdConfig::default_config();
  cfg.eta = eta;
  return pcd::pcd_objective(cfg, pcd::make_grid_samples(cfg, k), eps);
}

minimax::MinimaxState run_pcd(double eps, int k, double eta) {
  const auto model = make_model(eps, k, eta);
  minimax::SolverConfig cfg;
  cfg.jobs = default_jobs();
  return minimax::alternate(model, cfg, VectorXd::Constant(k, 1.0 / k));
}

struct CliResult {
  int code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  const fs::path out_path = g_dir / "cli_stdout.txt";
  const std::string cmd =
      g_binary + " " + args + " > " + out_path.string() + " 2> /dev/null";
  const int rc = std::system(cmd.c_str());
  CliResult res;
  res.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  res.out = io::read_file(out_path.string());
  return res;
}

transport::DiscreteDistribution random_distribution(int nu, int n,
                                                    std::mt19937& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_real_distribution<double> wgt(0.05, 1.0);
  transport::DiscreteDistribution d;
  d.atoms = MatrixXd(nu, n);
  d.weights = VectorXd(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < nu; ++j) d.atoms(j, i) = unif(rng);
    d.weights[i] = wgt(rng);
  }
  d.weights /= d.weights.sum();
  return d;
}

ambiguity::SampleSet midpoint_grid(int side) {
  pcd::PcdConfig cfg = pcd::PcdConfig::default_config();
  return pcd::make_grid_samples(cfg, side * side);
}

// ---------------------------------------------------------------------------

// Criterion 1: the three LCP paths agree on random PD instances and random
// share blocks; natural residuals at solver precision; within 30 s.
bool criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(101);

  for (int trial = 0; trial < 1000; ++trial) {
    const int m = 1 + trial % 6;
    lcp::LcpInstance inst;
    inst.M = testing::random_pd_matrix(m, rng);
    inst.q = testing::random_vector(m, rng);

    const auto sol = lcp::solve_pd_lcp(inst);
    if (!sol.converged || sol.residual > 1e-10) return false;
    if (lcp::natural_residual(inst, sol.y) > 1e-10) return false;

    const auto all = lcp::brute_force_lcp(inst);
    if (all.empty()) return false;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& cand : all)
      best = std::min(best, (cand.y - sol.y).cwiseAbs().maxCoeff());
    if (best > 1e-8) return false;
  }

  const double eps_grid[3] = {0.5, 0.1, 0.01};
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = (trial % 2 == 0) ? 2 : 5;
    const double eps = eps_grid[trial % 3];
    const VectorXd u = testing::random_vector(m, rng);

    lcp::LcpInstance inst;
    inst.M = MatrixXd::Zero(m + 1, m + 1);
    inst.M.block(0, m, m, 1).setOnes();
    inst.M.block(m, 0, 1, m).setConstant(-1.0);
    inst.q = VectorXd(m + 1);
    inst.q.head(m) = -u;
    inst.q[m] = 1.0;
    inst.monotone = true;
    const auto reg = lcp::regularize(inst, eps);

    const auto [s, gamma] = pcd::solve_block_regularized(u, eps);
    VectorXd y(m + 1);
    y << s, gamma;
    if (lcp::natural_residual(reg, y) > 1e-10) return false;

    const auto sol = lcp::solve_pd_lcp(reg);
    if (!sol.converged || (sol.y - y).cwiseAbs().maxCoeff() > 1e-8)
      return false;

    const auto all = lcp::brute_force_lcp(reg);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& cand : all)
      best = std::min(best, (cand.y - y).cwiseAbs().maxCoeff());
    if (best > 1e-8) return false;
  }
  return seconds_since(t0) <= 30.0;
}

// Criterion 2: exact regularization-path deviation at the tied block and the
// closed-form objective value at the reference decision.
bool criterion_2() {
  VectorXd u(2);
  u << 1.0, 1.0;
  VectorXd half(2);
  half << 0.5, 0.5;
  for (double eps : {0.5, 0.2, 0.1, 0.05, 0.01}) {
    const auto [s, gamma] = pcd::solve_block_regularized(u, eps);
    const double dev = (s - half).cwiseAbs().maxCoeff();
    const double exact = eps * (2.0 - eps) / (2.0 * (2.0 + eps * eps));
    if (std::abs(dev - exact) > 1e-10) return false;
  }

  for (double eps : {0.5, 0.1, 0.01}) {
    const auto model = make_model(eps, 25, 0.5);
    const double t = (1.0 + eps) / (2.0 + eps * eps);
    const double expected = 2.0 * (t - 0.5) * (t - 0.5);
    const double got = minimax::evaluate_objective(
        model, kXStar, VectorXd::Constant(25, 1.0 / 25.0));
    if (std::abs(got - expected) > 1e-10) return false;
  }
  return true;
}

// Criterion 3: Voronoi projection error bounded by the fill distance on 100
// random distributions and two grid sizes; within 60 s.
bool criterion_3() {
  const auto t0 = std::chrono::steady_clock::now();

  const auto g25 = midpoint_grid(5);
  const double beta25 = transport::fill_distance(g25).value();
  if (std::abs(beta25 - std::sqrt(2.0) / 5.0) > 1e-6) return false;

  const auto g100 = midpoint_grid(10);
  const double beta100 = transport::fill_distance(g100).value();

  std::mt19937 rng(103);
  std::uniform_int_distribution<int> size(1, 50);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = random_distribution(2, size(rng), rng);
    const auto p25 = transport::voronoi_projection(p, g25);
    if (transport::wasserstein(p, p25) > beta25 + 1e-10) return false;
    const auto p100 = transport::voronoi_projection(p, g100);
    if (transport::wasserstein(p, p100) > beta100 + 1e-10) return false;
  }
  return seconds_since(t0) <= 60.0;
}

// Criterion 4: transportation-LP distance equals the 1-D sorted-quantile
// closed form.
bool criterion_4() {
  std::mt19937 rng(107);
  std::uniform_int_distribution<int> size(1, 30);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = random_distribution(1, size(rng), rng);
    const auto q = random_distribution(1, size(rng), rng);
    const double lp = transport::wasserstein(p, q);
    const double closed =
        testing::wasserstein_1d(p.atoms.row(0).transpose(), p.weights,
                                q.atoms.row(0).transpose(), q.weights);
    if (std::abs(lp - closed) > 1e-8) return false;
  }
  return true;
}

// Criterion 5: Dykstra projection equals the exhaustive QP oracle on random
// feasible instances.
bool criterion_5() {
  std::mt19937 rng(109);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_real_distribution<double> eta_draw(0.01, 0.5);
  std::uniform_int_distribution<int> k_draw(2, 10);

  for (int trial = 0; trial < 100; ++trial) {
    const int k = k_draw(rng);
    ambiguity::SampleSet samples;
    samples.nu = 2;
    samples.domain_lo = VectorXd::Constant(2, -1.0);
    samples.domain_hi = VectorXd::Constant(2, 1.0);
    samples.points = MatrixXd(2, k);
    for (int i = 0; i < k; ++i)
      for (int d = 0; d < 2; ++d) samples.points(d, i) = unif(rng);

    // Center the ball on a reachable mean so the set is nonempty.
    VectorXd w(k);
    for (int i = 0; i < k; ++i) w[i] = 0.05 + std::abs(unif(rng));
    w /= w.sum();
    ambiguity::MeanBallSet ball{samples.points * w, eta_draw(rng)};

    VectorXd z(k);
    for (int i = 0; i < k; ++i) z[i] = unif(rng);

    const auto got = ambiguity::project_ambiguity(samples, ball, z);
    const VectorXd want =
        testing::projection_qp_oracle(samples.points, ball.mu0, ball.eta, z);
    if ((got.p - want).cwiseAbs().maxCoeff() > 1e-6) return false;
  }
  return true;
}

// Criterion 6: end-to-end solves at the published accuracy anchors, within
// the time budgets.
bool criterion_6() {
  auto t0 = std::chrono::steady_clock::now();
  const auto small = run_pcd(0.1, 25, 0.5);
  const double small_s = seconds_since(t0);
  if (!small.converged || small.residual_x > 1e-4) return false;
  if ((small.x - kXStar).norm() > 0.2) return false;
  if (small_s > 60.0) return false;

  t0 = std::chrono::steady_clock::now();
  const auto large = run_pcd(0.1, 2500, 0.5);
  const double large_s = seconds_since(t0);
  if ((large.x - kXStar).norm() > 0.15) return false;
  return large_s <= 900.0;
}

// Criterion 7: optimal values nonincreasing in eps at each eta, small at
// eps=0.01, and nondecreasing in eta at each eps.
bool criterion_7() {
  const std::vector<double> eps_list = {0.5, 0.2, 0.1, 0.05, 0.01};
  const std::vector<double> eta_list = {0.1, 0.2, 0.5, 1.0};

  std::vector<std::vector<double>> value(eta_list.size());
  for (size_t e = 0; e < eta_list.size(); ++e) {
    for (double eps : eps_list)
      value[e].push_back(run_pcd(eps, 25, eta_list[e]).value);
  }

  for (size_t e = 0; e < eta_list.size(); ++e) {
    for (size_t i = 1; i < eps_list.size(); ++i)
      if (value[e][i] > value[e][i - 1] + 1e-6) return false;
    if (value[e].back() > 1e-2) return false;
  }
  for (size_t i = 0; i < eps_list.size(); ++i) {
    for (size_t e = 1; e < eta_list.size(); ++e)
      if (value[e][i] + 1e-6 < value[e - 1][i]) return false;
  }
  return true;
}

// Criterion 8: the optimal value stabilizes in the sample count.
bool criterion_8() {
  double v625 = 0.0, v2500 = 0.0;
  for (int k : {4, 25, 100, 225, 625, 2500}) {
    const double v = run_pcd(0.5, k, 0.5).value;
    if (k == 625) v625 = v;
    if (k == 2500) v2500 = v;
  }
  const double scale = std::max(std::abs(v625), std::abs(v2500));
  return std::abs(v625 - v2500) <= 0.10 * scale;
}

// Criterion 9: W/C/M/S chain on certified points, grid-oracle agreement on
// exhaustive m=3 partitions, and an identical CLI re-certification.
bool criterion_9() {
  // Certified PCD point: every block class must be attainable per the grid
  // oracle, and attainability itself must respect the chain.
  const auto model = make_model(0.1, 25, 0.5);
  minimax::SolverConfig cfg;
  cfg.jobs = default_jobs();
  const auto st = minimax::alternate(model, cfg, VectorXd::Constant(25, 0.04));
  const auto cert = minimax::certify_block_stationarity(model, st.x, st.p);
  if (!cert.pass) return false;

  const auto blocks = model.blocks(st.x);
  const auto grads = model.grad_y_blocks(st.x, st.p);
  for (size_t b = 0; b < cert.blocks.size(); ++b) {
    const auto& bc = cert.blocks[b];
    const auto oracle = testing::grid_attainability(
        grads[b], blocks[b].inst.M, bc.partition);
    if (oracle.s && !oracle.m) return false;  // chain inside the oracle
    if (oracle.m && !oracle.c) return false;
    if (oracle.c && !oracle.w) return false;
    if (bc.klass == stationarity::StationarityClass::kNone) return false;
    if (bc.klass >= stationarity::StationarityClass::kS && !oracle.s)
      return false;
    if (bc.klass >= stationarity::StationarityClass::kM && !oracle.m)
      return false;
    if (bc.klass >= stationarity::StationarityClass::kC && !oracle.c)
      return false;
  }

  // Exhaustive m=3 partitions with random PD matrices and consistent
  // gradients: the returned class is always attainable, and is the strongest
  // attainable one whenever the multipliers are unique.
  std::mt19937 rng(113);
  for (int code = 0; code < 27; ++code) {
    for (int rep = 0; rep < 6; ++rep) {
      const MatrixXd M = testing::random_pd_matrix(3, rng);
      stationarity::IndexPartition part;
      int rem = code;
      for (int i = 0; i < 3; ++i) {
        const int digit = rem % 3;
        rem /= 3;
        if (digit == 0) part.plus_zero.push_back(i);
        else if (digit == 1) part.zero_plus.push_back(i);
        else part.zero_zero.push_back(i);
      }
      VectorXd lam = VectorXd::Zero(3), mu = VectorXd::Zero(3);
      for (int i : part.zero_plus) lam[i] = testing::random_vector(1, rng)[0];
      for (int i : part.zero_zero) lam[i] = testing::random_vector(1, rng)[0];
      for (int i : part.plus_zero) mu[i] = testing::random_vector(1, rng)[0];
      for (int i : part.zero_zero) mu[i] = testing::random_vector(1, rng)[0];
      const VectorXd g = lam + M.transpose() * mu;

      const auto rec = stationarity::recover_multipliers(g, M, part);
      const auto klass = stationarity::classify_stationarity(rec, part);
      const auto oracle = testing::grid_attainability(g, M, part);
      if (!oracle.w || klass < stationarity::StationarityClass::kW)
        return false;
      if (klass >= stationarity::StationarityClass::kS && !oracle.s)
        return false;
      if (klass >= stationarity::StationarityClass::kM && !oracle.m)
        return false;
      if (klass >= stationarity::StationarityClass::kC && !oracle.c)
        return false;
      if (part.zero_zero.empty()) {
        const auto strongest = oracle.s   ? stationarity::StationarityClass::kS
                               : oracle.m ? stationarity::StationarityClass::kM
                               : oracle.c ? stationarity::StationarityClass::kC
                                          : stationarity::StationarityClass::kW;
        if (klass != strongest) return false;
      }
    }
  }

  // CLI round trip: run, then re-certify the written state independently.
  const fs::path out = g_dir / "criterion9";
  if (run_cli("run --eps 0.1 --k 25 --eta 0.5 --jobs " +
              std::to_string(default_jobs()) + " --out " + out.string())
          .code != 0)
    return false;
  const json produced =
      json::parse(io::read_file((out / "certificate.json").string()));
  const auto recert = run_cli("certify " + (out / "state.json").string());
  if (recert.code != 0) return false;
  const json again = json::parse(recert.out);
  if (again["class"] != produced["class"]) return false;
  for (const char* key : {"res_x", "res_p", "kkt_residual"}) {
    if (std::abs(again[key].get<double>() - produced[key].get<double>()) >
        1e-10)
      return false;
  }
  return true;
}

// Criterion 10: byte-identical sweep CSVs for identical config and seed.
bool criterion_10() {
  const fs::path cfg_path = g_dir / "determinism.json";
  io::atomic_write(cfg_path.string(), R"({
    "eps_list": [0.5, 0.1],
    "k_list": [25],
    "eta_list": [0.5],
    "record_timing": false,
    "solver": {"seed": 7, "jobs": 2}
  })");
  const fs::path out_a = g_dir / "det_a", out_b = g_dir / "det_b";
  if (run_cli("sweep --config " + cfg_path.string() + " --out " +
              out_a.string())
          .code != 0)
    return false;
  if (run_cli("sweep --config " + cfg_path.string() + " --out " +
              out_b.string())
          .code != 0)
    return false;
  return io::read_file((out_a / "sweep.csv").string()) ==
         io::read_file((out_b / "sweep.csv").string());
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <drsolve binary>\n");
    return 64;
  }
  g_binary = argv[1];
  g_dir = fs::temp_directory_path() / "drsolve_acceptance";
  fs::create_directories(g_dir);

  struct Entry {
    const char* label;
    bool (*fn)();
  };
  const Entry entries[] = {
      {"criterion 1: LCP solver / closed form / brute force equivalence",
       criterion_1},
      {"criterion 2: regularization-path and objective anchors", criterion_2},
      {"criterion 3: Voronoi projection within the fill distance",
       criterion_3},
      {"criterion 4: Wasserstein matches the 1-D quantile form", criterion_4},
      {"criterion 5: ambiguity projection matches the QP oracle", criterion_5},
      {"criterion 6: end-to-end solve accuracy and time budgets", criterion_6},
      {"criterion 7: value trends in eps and eta", criterion_7},
      {"criterion 8: value stabilization in the sample count", criterion_8},
      {"criterion 9: stationarity chain, grid oracle, CLI round trip",
       criterion_9},
      {"criterion 10: byte-identical sweeps", criterion_10},
  };

  int failures = 0;
  for (const auto& e : entries) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = e.fn();
    } catch (const std::exception& ex) {
      std::fprintf(stderr, "%s threw: %s\n", e.label, ex.what());
    }
    std::printf("%s: %s (%.1f s)\n", e.label, ok ? "PASS" : "FAIL",
                seconds_since(t0));
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures;
}
