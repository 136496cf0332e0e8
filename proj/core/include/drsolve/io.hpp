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

#ifndef DRSOLVE_IO_HPP
#define DRSOLVE_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "drsolve/lcp.hpp"
#include "drsolve/minimax.hpp"
#include "drsolve/pcd.hpp"
#include "drsolve/transport.hpp"

namespace drsolve::io {

using json = nlohmann::json;

// LCP instances and solutions: {"M": row-major, "q", "y", "w", "residual"}.
lcp::LcpInstance lcp_instance_from_json(const json& j);
json lcp_instance_to_json(const lcp::LcpInstance& inst);
json lcp_solution_to_json(const lcp::LcpSolution& sol);

// Model / solver / experiment configuration.
pcd::PcdConfig pcd_config_from_json(const json& j);
json pcd_config_to_json(const pcd::PcdConfig& cfg);
minimax::SolverConfig solver_config_from_json(const json& j);
json solver_config_to_json(const minimax::SolverConfig& cfg);

struct ExperimentConfig {
  pcd::PcdConfig model = pcd::PcdConfig::default_config();
  minimax::SolverConfig solver;
  std::vector<double> eps_list{0.1};
  std::vector<int> k_list{25};
  std::vector<double> eta_list{0.5};
  Eigen::VectorXd reference_x;
  std::string output_dir = ".";
  bool record_timing = true;  // false zeroes the CSV seconds column
};
ExperimentConfig experiment_config_from_json(const json& j);

// Minimax states and certificates.
json state_to_json(const minimax::MinimaxState& state,
                   const ExperimentConfig& cfg);
json certificate_to_json(const stationarity::Certificate& cert);

// Distributions as CSV: coordinate_1..coordinate_nu, weight.
transport::DiscreteDistribution distribution_from_csv(const std::string& path);
void distribution_to_csv(const transport::DiscreteDistribution& dist,
                         const std::string& path);

// Sweep tables: eps,k,eta,value,x_err,res_x,res_p,iters,seconds(,status).
std::string sweep_to_csv(const std::vector<minimax::SweepRow>& rows,
                         bool record_timing = true);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

/// Write-to-temp then rename.
void atomic_write(const std::string& path, const std::string& contents);

std::string read_file(const std::string& path);

}  // namespace drsolve::io

#endif  // DRSOLVE_IO_HPP
