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

#include "drsolve/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace drsolve::io {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd vector_from_json(const json& j) {
  VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = j[i].get<double>();
  return v;
}

json vector_to_json(const VectorXd& v) {
  json j = json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

json indices_to_json(const std::vector<int>& v) {
  json j = json::array();
  for (int i : v) j.push_back(i + 1);  // 1-based in reports
  return j;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

lcp::LcpInstance lcp_instance_from_json(const json& j) {
  lcp::LcpInstance inst;
  inst.q = vector_from_json(j.at("q"));
  const int m = inst.dim();
  const auto& M = j.at("M");
  if (static_cast<int>(M.size()) != m * m)
    throw std::invalid_argument("lcp_instance_from_json: M size mismatch");
  inst.M = MatrixXd(m, m);
  for (int i = 0; i < m; ++i)
    for (int c = 0; c < m; ++c) inst.M(i, c) = M[i * m + c].get<double>();
  inst.monotone = j.value("monotone", false);
  inst.validate();
  return inst;
}

json lcp_instance_to_json(const lcp::LcpInstance& inst) {
  json j;
  json M = json::array();
  for (int i = 0; i < inst.dim(); ++i)
    for (int c = 0; c < inst.dim(); ++c) M.push_back(inst.M(i, c));
  j["M"] = M;
  j["q"] = vector_to_json(inst.q);
  j["monotone"] = inst.monotone;
  return j;
}

json lcp_solution_to_json(const lcp::LcpSolution& sol) {
  json j;
  j["y"] = vector_to_json(sol.y);
  j["w"] = vector_to_json(sol.w);
  j["residual"] = sol.residual;
  j["converged"] = sol.converged;
  j["partition"] = {{"plus_zero", indices_to_json(sol.partition.plus_zero)},
                    {"zero_plus", indices_to_json(sol.partition.zero_plus)},
                    {"zero_zero", indices_to_json(sol.partition.zero_zero)}};
  return j;
}

pcd::PcdConfig pcd_config_from_json(const json& j) {
  pcd::PcdConfig cfg = pcd::PcdConfig::default_config();
  cfg.T = j.value("T", cfg.T);
  cfg.m = j.value("m", cfg.m);
  cfg.tau = j.value("tau", cfg.tau);

  if (j.contains("C")) {
    cfg.C.clear();
    for (const auto& mat : j.at("C")) {
      MatrixXd M(cfg.m, cfg.tau);
      for (int r = 0; r < cfg.m; ++r)
        for (int c = 0; c < cfg.tau; ++c)
          M(r, c) = mat[r * cfg.tau + c].get<double>();
      cfg.C.push_back(M);
    }
  }
  if (j.contains("sigma")) {
    cfg.sigma.clear();
    for (const auto& v : j.at("sigma")) cfg.sigma.push_back(vector_from_json(v));
  }
  if (j.contains("b")) {
    cfg.b.clear();
    for (const auto& v : j.at("b")) cfg.b.push_back(vector_from_json(v));
  }
  cfg.A.assign(cfg.T, MatrixXd::Identity(cfg.m, cfg.m));

  if (j.contains("box")) {
    cfg.x_lo = vector_from_json(j.at("box").at("lo"));
    cfg.x_hi = vector_from_json(j.at("box").at("hi"));
  }
  if (j.contains("domain")) {
    cfg.domain_lo = vector_from_json(j.at("domain").at("lo"));
    cfg.domain_hi = vector_from_json(j.at("domain").at("hi"));
  }
  if (j.contains("mu0")) cfg.mu0 = vector_from_json(j.at("mu0"));
  cfg.eta = j.value("eta", cfg.eta);
  cfg.rho = j.value("rho", cfg.rho);
  cfg.validate();
  return cfg;
}

json pcd_config_to_json(const pcd::PcdConfig& cfg) {
  json j;
  j["T"] = cfg.T;
  j["m"] = cfg.m;
  j["tau"] = cfg.tau;
  json C = json::array();
  for (const auto& M : cfg.C) {
    json mat = json::array();
    for (int r = 0; r < M.rows(); ++r)
      for (int c = 0; c < M.cols(); ++c) mat.push_back(M(r, c));
    C.push_back(mat);
  }
  j["C"] = C;
  json sigma = json::array(), b = json::array();
  for (const auto& v : cfg.sigma) sigma.push_back(vector_to_json(v));
  for (const auto& v : cfg.b) b.push_back(vector_to_json(v));
  j["sigma"] = sigma;
  j["b"] = b;
  j["box"] = {{"lo", vector_to_json(cfg.x_lo)}, {"hi", vector_to_json(cfg.x_hi)}};
  j["domain"] = {{"lo", vector_to_json(cfg.domain_lo)},
                 {"hi", vector_to_json(cfg.domain_hi)}};
  j["mu0"] = vector_to_json(cfg.mu0);
  j["eta"] = cfg.eta;
  j["rho"] = cfg.rho;
  return j;
}

minimax::SolverConfig solver_config_from_json(const json& j) {
  minimax::SolverConfig cfg;
  cfg.tol_x = j.value("tol_x", cfg.tol_x);
  cfg.tol_p = j.value("tol_p", cfg.tol_p);
  cfg.max_outer = j.value("max_outer", cfg.max_outer);
  cfg.max_inner_x = j.value("max_inner_x", cfg.max_inner_x);
  cfg.fd_step = j.value("fd_step", cfg.fd_step);
  cfg.armijo_c = j.value("armijo_c", cfg.armijo_c);
  cfg.armijo_backtrack = j.value("armijo_backtrack", cfg.armijo_backtrack);
  cfg.armijo_max_halvings = j.value("armijo_max_halvings", cfg.armijo_max_halvings);
  cfg.sweep_directions = j.value("sweep_directions", cfg.sweep_directions);
  cfg.fw_starts = j.value("fw_starts", cfg.fw_starts);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.jobs = j.value("jobs", cfg.jobs);
  return cfg;
}

json solver_config_to_json(const minimax::SolverConfig& cfg) {
  return json{{"tol_x", cfg.tol_x},
              {"tol_p", cfg.tol_p},
              {"max_outer", cfg.max_outer},
              {"max_inner_x", cfg.max_inner_x},
              {"fd_step", cfg.fd_step},
              {"armijo_c", cfg.armijo_c},
              {"armijo_backtrack", cfg.armijo_backtrack},
              {"armijo_max_halvings", cfg.armijo_max_halvings},
              {"sweep_directions", cfg.sweep_directions},
              {"fw_starts", cfg.fw_starts},
              {"seed", cfg.seed},
              {"jobs", cfg.jobs}};
}

ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig cfg;
  if (j.contains("model")) cfg.model = pcd_config_from_json(j.at("model"));
  if (j.contains("solver")) cfg.solver = solver_config_from_json(j.at("solver"));
  if (j.contains("eps_list")) {
    cfg.eps_list.clear();
    for (const auto& e : j.at("eps_list")) cfg.eps_list.push_back(e.get<double>());
  }
  if (j.contains("k_list")) {
    cfg.k_list.clear();
    for (const auto& k : j.at("k_list")) cfg.k_list.push_back(k.get<int>());
  }
  if (j.contains("eta_list")) {
    cfg.eta_list.clear();
    for (const auto& e : j.at("eta_list")) cfg.eta_list.push_back(e.get<double>());
  }
  if (j.contains("reference_x"))
    cfg.reference_x = vector_from_json(j.at("reference_x"));
  cfg.output_dir = j.value("output_dir", cfg.output_dir);
  cfg.record_timing = j.value("record_timing", cfg.record_timing);
  if (cfg.reference_x.size() > 0) {
    VectorXd clamped = cfg.reference_x.cwiseMax(cfg.model.x_lo).cwiseMin(cfg.model.x_hi);
    if ((clamped - cfg.reference_x).cwiseAbs().maxCoeff() > 0.0)
      throw std::invalid_argument("experiment config: reference_x outside box");
  }
  return cfg;
}

json state_to_json(const minimax::MinimaxState& state,
                   const ExperimentConfig& cfg) {
  json j;
  j["x"] = vector_to_json(state.x);
  j["p"] = vector_to_json(state.p);
  j["eps"] = state.eps;
  j["k"] = state.k;
  j["eta"] = cfg.model.eta;
  j["value"] = state.value;
  j["res_x"] = state.residual_x;
  j["res_p"] = state.residual_p;
  j["iterations"] = state.iteration;
  j["converged"] = state.converged;
  j["model"] = pcd_config_to_json(cfg.model);
  j["solver"] = solver_config_to_json(cfg.solver);
  return j;
}

json certificate_to_json(const stationarity::Certificate& cert) {
  json j;
  j["class"] = stationarity::to_string(cert.klass);
  j["licq"] = cert.licq;
  j["res_x"] = cert.res_x;
  j["res_p"] = cert.res_p;
  j["inner_feasibility"] = cert.inner_feasibility;
  j["kkt_residual"] = cert.kkt_residual;
  j["pass"] = cert.pass;
  json blocks = json::array();
  for (const auto& b : cert.blocks) {
    blocks.push_back(
        {{"class", stationarity::to_string(b.klass)},
         {"licq", b.licq.holds},
         {"licq_row_variant", b.licq.holds_row_variant},
         {"kkt_residual", b.multipliers.kkt_residual},
         {"partition",
          {{"plus_zero", indices_to_json(b.partition.plus_zero)},
           {"zero_plus", indices_to_json(b.partition.zero_plus)},
           {"zero_zero", indices_to_json(b.partition.zero_zero)}}}});
  }
  j["blocks"] = blocks;
  return j;
}

transport::DiscreteDistribution distribution_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty distribution file " + path);

  int nu = 0;
  {
    std::stringstream hs(line);
    std::string col;
    while (std::getline(hs, col, ',')) {
      if (col.rfind("coordinate_", 0) == 0) ++nu;
    }
  }
  if (nu == 0) throw std::runtime_error("no coordinate columns in " + path);

  std::vector<VectorXd> atoms;
  std::vector<double> weights;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::string cell;
    VectorXd atom(nu);
    for (int d = 0; d < nu; ++d) {
      if (!std::getline(ls, cell, ','))
        throw std::runtime_error("short row in " + path);
      atom[d] = std::stod(cell);
    }
    if (!std::getline(ls, cell, ','))
      throw std::runtime_error("missing weight in " + path);
    atoms.push_back(atom);
    weights.push_back(std::stod(cell));
  }

  transport::DiscreteDistribution dist;
  dist.atoms = MatrixXd(nu, atoms.size());
  dist.weights = VectorXd(atoms.size());
  for (size_t i = 0; i < atoms.size(); ++i) {
    dist.atoms.col(static_cast<int>(i)) = atoms[i];
    dist.weights[static_cast<int>(i)] = weights[i];
  }
  dist.validate();
  return dist;
}

void distribution_to_csv(const transport::DiscreteDistribution& dist,
                         const std::string& path) {
  std::string out;
  for (int d = 0; d < dist.dim(); ++d)
    out += "coordinate_" + std::to_string(d + 1) + ",";
  out += "weight\n";
  for (int i = 0; i < dist.size(); ++i) {
    for (int d = 0; d < dist.dim(); ++d)
      out += format_double(dist.atoms(d, i)) + ",";
    out += format_double(dist.weights[i]) + "\n";
  }
  atomic_write(path, out);
}

std::string sweep_to_csv(const std::vector<minimax::SweepRow>& rows,
                         bool record_timing) {
  std::string out = "eps,k,eta,value,x_err,res_x,res_p,iters,seconds,status\n";
  for (const auto& r : rows) {
    out += format_double(r.eps) + "," + std::to_string(r.k) + "," +
           format_double(r.eta) + "," + format_double(r.value) + "," +
           format_double(r.x_err) + "," + format_double(r.res_x) + "," +
           format_double(r.res_p) + "," + std::to_string(r.iters) + "," +
           format_double(record_timing ? r.seconds : 0.0) + "," + r.status +
           "\n";
  }
  return out;
}

void atomic_write(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace drsolve::io
