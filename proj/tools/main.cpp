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

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "drsolve/ambiguity.hpp"
#include "drsolve/io.hpp"
#include "drsolve/lcp.hpp"
#include "drsolve/minimax.hpp"
#include "drsolve/pcd.hpp"
#include "drsolve/transport.hpp"

namespace {

using drsolve::io::json;
using Eigen::VectorXd;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitSolve = 3;
constexpr int kExitBudget = 4;

struct Overrides {
  std::string config_path;
  std::optional<double> eps;
  std::optional<int> k;
  std::optional<double> eta;
  std::optional<unsigned> seed;
  std::string out_dir;
  std::optional<int> jobs;
};

void add_common_flags(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--config", ov.config_path, "experiment config JSON");
  cmd->add_option("--eps", ov.eps, "regularization parameter");
  cmd->add_option("--k", ov.k, "sample count (perfect square)");
  cmd->add_option("--eta", ov.eta, "mean-ball radius squared");
  cmd->add_option("--seed", ov.seed, "solver seed");
  cmd->add_option("--out", ov.out_dir, "output directory");
  cmd->add_option("--jobs", ov.jobs, "parallel jobs (DROSC_JOBS overrides)");
}

drsolve::io::ExperimentConfig load_experiment(const Overrides& ov) {
  drsolve::io::ExperimentConfig cfg;
  if (!ov.config_path.empty()) {
    cfg = drsolve::io::experiment_config_from_json(
        json::parse(drsolve::io::read_file(ov.config_path)));
  }
  if (ov.eps) cfg.eps_list = {*ov.eps};
  if (ov.k) cfg.k_list = {*ov.k};
  if (ov.eta) cfg.eta_list = {*ov.eta};
  if (ov.seed) cfg.solver.seed = *ov.seed;
  if (ov.jobs) cfg.solver.jobs = *ov.jobs;
  if (const char* env = std::getenv("DROSC_JOBS")) {
    const int j = std::atoi(env);
    if (j >= 1) cfg.solver.jobs = j;
  }
  if (!ov.out_dir.empty()) cfg.output_dir = ov.out_dir;
  return cfg;
}

drsolve::minimax::Model build_model(const drsolve::pcd::PcdConfig& base,
                                    double eps, int k, double eta) {
  drsolve::pcd::PcdConfig cfg = base;
  cfg.eta = eta;
  return drsolve::pcd::pcd_objective(
      cfg, drsolve::pcd::make_grid_samples(cfg, k), eps);
}

int cmd_solve_lcp(const std::string& path, double eps) {
  drsolve::lcp::LcpInstance inst;
  try {
    inst = drsolve::io::lcp_instance_from_json(
        json::parse(drsolve::io::read_file(path)));
  } catch (const std::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  }
  if (eps > 0.0) inst = drsolve::lcp::regularize(inst, eps);
  drsolve::lcp::LcpSolution sol;
  try {
    sol = drsolve::lcp::solve_pd_lcp(inst);
  } catch (const std::exception& e) {
    std::cerr << "solve error: " << e.what() << "\n";
    return kExitSolve;
  }
  std::cout << drsolve::io::lcp_solution_to_json(sol).dump(2) << "\n";
  return (sol.converged && sol.residual <= 1e-8) ? kExitOk : kExitSolve;
}

int cmd_run(const Overrides& ov) {
  drsolve::io::ExperimentConfig cfg;
  try {
    cfg = load_experiment(ov);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitParse;
  }

  const double eps = cfg.eps_list.front();
  const int k = cfg.k_list.front();
  const double eta = cfg.eta_list.front();
  cfg.model.eta = eta;

  try {
    const auto model = build_model(cfg.model, eps, k, eta);
    VectorXd p0 = VectorXd::Constant(k, 1.0 / k);
    if (!drsolve::ambiguity::member(model.samples, model.ball, p0)) {
      const auto proj =
          drsolve::ambiguity::project_ambiguity(model.samples, model.ball, p0);
      if (proj.infeasibility > 1e-8) {
        const auto rep =
            drsolve::ambiguity::slater_witness(model.samples, model.ball, p0);
        json out;
        out["feasible"] = false;
        out["violation"] = rep.violation;
        std::cout << out.dump(2) << "\n";
        std::cerr << "ambiguity set is empty at eta=" << eta << "\n";
        return kExitSolve;
      }
      p0 = drsolve::ambiguity::project_simplex(proj.p);
    }

    const auto state = drsolve::minimax::alternate(model, cfg.solver, p0);
    const auto cert = drsolve::minimax::certify_block_stationarity(
        model, state.x, state.p, cfg.solver.tol_x, cfg.solver.fd_step);

    auto sj = drsolve::io::state_to_json(state, cfg);
    sj["eps"] = eps;
    sj["k"] = k;
    drsolve::io::atomic_write(cfg.output_dir + "/state.json", sj.dump(2) + "\n");
    drsolve::io::atomic_write(
        cfg.output_dir + "/certificate.json",
        drsolve::io::certificate_to_json(cert).dump(2) + "\n");
    std::cout << sj.dump(2) << "\n";
    return state.converged ? kExitOk : kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "solve error: " << e.what() << "\n";
    return kExitSolve;
  }
}

int cmd_sweep(const Overrides& ov) {
  drsolve::io::ExperimentConfig cfg;
  try {
    cfg = load_experiment(ov);
    if (cfg.eps_list.empty() || cfg.k_list.empty() || cfg.eta_list.empty())
      throw std::invalid_argument("sweep: empty axis list");
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitParse;
  }

  try {
    const auto base = cfg.model;
    const auto rows = drsolve::minimax::schedule_solve(
        [&base](double eps, int k, double eta) {
          return build_model(base, eps, k, eta);
        },
        cfg.eps_list, cfg.k_list, cfg.eta_list, cfg.solver, cfg.reference_x);
    const std::string csv = drsolve::io::sweep_to_csv(rows, cfg.record_timing);
    drsolve::io::atomic_write(cfg.output_dir + "/sweep.csv", csv);
    std::cout << csv;
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "solve error: " << e.what() << "\n";
    return kExitSolve;
  }
}

int cmd_certify(const std::string& state_path, const std::string& out_dir) {
  json sj;
  drsolve::pcd::PcdConfig model_cfg;
  drsolve::minimax::SolverConfig solver_cfg;
  VectorXd x, p;
  double eps = 0.0;
  int k = 0;
  try {
    sj = json::parse(drsolve::io::read_file(state_path));
    model_cfg = drsolve::io::pcd_config_from_json(sj.at("model"));
    solver_cfg = drsolve::io::solver_config_from_json(sj.at("solver"));
    eps = sj.at("eps").get<double>();
    k = sj.at("k").get<int>();
    const auto& xv = sj.at("x");
    const auto& pv = sj.at("p");
    x = VectorXd(xv.size());
    for (size_t i = 0; i < xv.size(); ++i)
      x[static_cast<int>(i)] = xv[i].get<double>();
    p = VectorXd(pv.size());
    for (size_t i = 0; i < pv.size(); ++i)
      p[static_cast<int>(i)] = pv[i].get<double>();
  } catch (const std::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  }

  try {
    const auto model = build_model(model_cfg, eps, k, model_cfg.eta);
    if (!drsolve::ambiguity::member(model.samples, model.ball, p)) {
      json out;
      out["pass"] = false;
      out["error"] = "weights outside the ambiguity set";
      std::cout << out.dump(2) << "\n";
      return kExitSolve;
    }
    const auto cert = drsolve::minimax::certify_block_stationarity(
        model, x, p, solver_cfg.tol_x, solver_cfg.fd_step);
    const json cj = drsolve::io::certificate_to_json(cert);
    if (!out_dir.empty())
      drsolve::io::atomic_write(out_dir + "/certificate.json",
                                cj.dump(2) + "\n");
    std::cout << cj.dump(2) << "\n";
    return cert.pass ? kExitOk : kExitSolve;
  } catch (const std::exception& e) {
    std::cerr << "solve error: " << e.what() << "\n";
    return kExitSolve;
  }
}

int cmd_transport(const std::string& p_path, const std::string& q_path,
                  int k) {
  drsolve::transport::DiscreteDistribution P;
  std::optional<drsolve::transport::DiscreteDistribution> Q;
  try {
    P = drsolve::io::distribution_from_csv(p_path);
    if (!q_path.empty()) Q = drsolve::io::distribution_from_csv(q_path);
  } catch (const std::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  }

  try {
    json out;
    if (Q) {
      out["wasserstein"] = drsolve::transport::wasserstein(P, *Q);
    } else {
      const auto grid = drsolve::pcd::make_grid_samples(
          drsolve::pcd::PcdConfig::default_config(), k);
      const auto fill = drsolve::transport::fill_distance(grid);
      const auto pk = drsolve::transport::voronoi_projection(P, grid);
      const double dist = drsolve::transport::wasserstein(P, pk);
      out["fill_distance"] = fill.value();
      out["projection_distance"] = dist;
      out["margin"] = fill.value() - dist;
    }
    std::cout << out.dump(2) << "\n";
    if (!Q && out["margin"].get<double>() < -1e-10) {
      std::cerr << "fill-distance bound violated\n";
      return kExitSolve;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "solve error: " << e.what() << "\n";
    return kExitSolve;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributionally robust complementarity solver toolkit"};
  app.require_subcommand(1);

  std::string lcp_path;
  double lcp_eps = 0.0;
  auto* solve_lcp = app.add_subcommand("solve-lcp", "solve one LCP instance");
  solve_lcp->add_option("instance", lcp_path, "instance JSON")->required();
  solve_lcp->add_option("--eps", lcp_eps, "Tikhonov regularization");

  Overrides run_ov;
  auto* run = app.add_subcommand("run", "single minimax solve");
  add_common_flags(run, run_ov);

  Overrides sweep_ov;
  auto* sweep = app.add_subcommand("sweep", "grid of minimax solves");
  add_common_flags(sweep, sweep_ov);

  std::string state_path, certify_out;
  auto* certify = app.add_subcommand("certify", "re-certify a solver state");
  certify->add_option("state", state_path, "state JSON")->required();
  certify->add_option("--out", certify_out, "output directory");

  std::string tp_path, tq_path;
  int tp_k = 25;
  auto* transport =
      app.add_subcommand("transport", "Wasserstein and projection report");
  transport->add_option("P", tp_path, "distribution CSV")->required();
  transport->add_option("Q", tq_path, "second distribution CSV");
  transport->add_option("--k", tp_k, "grid size for the projection report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitParse;
  }

  if (solve_lcp->parsed()) return cmd_solve_lcp(lcp_path, lcp_eps);
  if (run->parsed()) return cmd_run(run_ov);
  if (sweep->parsed()) return cmd_sweep(sweep_ov);
  if (certify->parsed()) return cmd_certify(state_path, certify_out);
  if (transport->parsed()) return cmd_transport(tp_path, tq_path, tp_k);
  return kExitParse;
}
