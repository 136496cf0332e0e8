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

#include "drsolve/minimax.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace drsolve::minimax {

using Eigen::MatrixXd;
using Eigen::VectorXd;

bool Model::in_box(const VectorXd& x, double tol) const {
  return x.size() == x_lo.size() &&
         (x.array() >= x_lo.array() - tol).all() &&
         (x.array() <= x_hi.array() + tol).all();
}

VectorXd Model::clamp(const VectorXd& x) const {
  return x.cwiseMax(x_lo).cwiseMin(x_hi);
}

double evaluate_objective(const Model& model, const VectorXd& x,
                          const VectorXd& p) {
  if (!model.in_box(x))
    throw std::invalid_argument("evaluate_objective: x outside the box");
  if (p.size() != model.k())
    throw std::invalid_argument("evaluate_objective: weight count mismatch");
  return model.theta(x) + model.h(model.image(x) * p);
}

namespace {

double objective_unchecked(const Model& model, const VectorXd& x,
                           const VectorXd& p) {
  return model.theta(x) + model.h(model.image(x) * p);
}

// Runs fn(first, last) over [0, n) split into `jobs` contiguous chunks.
void chunked_parallel(int n, int jobs, const std::function<void(int, int)>& fn) {
  jobs = std::max(1, std::min(jobs, n));
  if (jobs == 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (int c = 0; c < jobs; ++c) {
    const int lo = static_cast<int>(static_cast<long>(n) * c / jobs);
    const int hi = static_cast<int>(static_cast<long>(n) * (c + 1) / jobs);
    pool.emplace_back(fn, lo, hi);
  }
  for (auto& t : pool) t.join();
}

// Unit directions in R^l used by the image-space sweep.
std::vector<VectorXd> sweep_directions(int l, int count) {
  std::vector<VectorXd> dirs;
  if (l == 1) {
    dirs.push_back(VectorXd::Constant(1, 1.0));
    dirs.push_back(VectorXd::Constant(1, -1.0));
  } else if (l == 2) {
    dirs.reserve(count);
    for (int s = 0; s < count; ++s) {
      const double ang = 2.0 * std::numbers::pi * s / count;
      VectorXd d(2);
      d << std::cos(ang), std::sin(ang);
      dirs.push_back(d);
    }
  } else {
    // Fibonacci sphere for l == 3.
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int s = 0; s < count; ++s) {
      const double z = 1.0 - 2.0 * (s + 0.5) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double ang = golden * s;
      VectorXd d(3);
      d << r * std::cos(ang), r * std::sin(ang), z;
      dirs.push_back(d);
    }
  }
  return dirs;
}

// max <c, p> over P_k by projected gradient with the exact Dykstra
// projection; warm started by the caller.
// Projection tolerance for intermediate candidates; winners get a final
// full-accuracy projection in step_max_p.
constexpr double kInnerProjTol = 1e-9;
constexpr int kInnerProjSweeps = 600;

VectorXd maximize_linear(const Model& model, const VectorXd& c,
                         VectorXd p) {
  // Projected gradient with geometrically growing steps: Pi(p + a*c) tends to
  // the <c,.>-maximizer nearest p as a grows, so a few step escalations
  // suffice; stop once the value stalls.
  double step = 2.0 / (c.norm() + 1e-30);
  double val = c.dot(p);
  int stalls = 0;
  for (int it = 0; it < 16; ++it) {
    VectorXd next = ambiguity::project_ambiguity(model.samples, model.ball,
                                                 p + step * c, kInnerProjTol,
                                                 kInnerProjSweeps)
                        .p;
    const double next_val = c.dot(next);
    if (next_val > val + 1e-12 * (1.0 + std::abs(val))) {
      p = std::move(next);
      val = next_val;
      stalls = 0;
    } else if (++stalls >= 2) {
      break;
    }
    step *= 4.0;
  }
  return p;
}

// Projected gradient ascent on p -> h(Fp), with backtracking.
VectorXd ascend_quadratic(const Model& model, const MatrixXd& F, VectorXd p) {
  double val = model.h(F * p);
  double t = 1.0;
  for (int it = 0; it < 100; ++it) {
    const VectorXd g = F.transpose() * model.grad_h(F * p);
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls) {
      VectorXd cand = ambiguity::project_ambiguity(model.samples, model.ball,
                                                   p + t * g, kInnerProjTol,
                                                   kInnerProjSweeps)
                          .p;
      const double cand_val = model.h(F * cand);
      if (cand_val > val + 1e-14) {
        p = std::move(cand);
        val = cand_val;
        accepted = true;
        t *= 2.0;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
  }
  return p;
}

}  // namespace

VectorXd grad_x(const Model& model, const VectorXd& x, const VectorXd& p,
                double fd_step) {
  if (model.grad_x) return model.grad_x(x, p);
  const int n = static_cast<int>(x.size());
  VectorXd g(n);
  const double f0 = objective_unchecked(model, x, p);
  for (int i = 0; i < n; ++i) {
    double h = fd_step * std::max(1.0, std::abs(x[i]));
    // Step backward at the upper box face so the perturbed point is usable.
    if (x[i] + h > model.x_hi[i]) h = -h;
    VectorXd xp = x;
    xp[i] += h;
    double fp;
    try {
      fp = objective_unchecked(model, xp, p);
    } catch (const std::exception&) {
      xp[i] = x[i] - h;  // one-sided fallback on the other side
      h = -h;
      fp = objective_unchecked(model, xp, p);
    }
    g[i] = (fp - f0) / h;
  }
  return g;
}

VectorXd grad_x_central(const Model& model, const VectorXd& x,
                        const VectorXd& p, double fd_step) {
  const int n = static_cast<int>(x.size());
  VectorXd g(n);
  for (int i = 0; i < n; ++i) {
    const double h = fd_step * std::max(1.0, std::abs(x[i]));
    VectorXd xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (objective_unchecked(model, xp, p) -
            objective_unchecked(model, xm, p)) /
           (2.0 * h);
  }
  return g;
}

MinimaxState step_min_x(const Model& model, const MinimaxState& state,
                        const SolverConfig& cfg) {
  MinimaxState out = state;
  VectorXd x = state.x;
  double val = objective_unchecked(model, x, state.p);
  out.stalled = false;

  for (int it = 0; it < cfg.max_inner_x; ++it) {
    const VectorXd g = grad_x(model, x, state.p, cfg.fd_step);
    const VectorXd x_proj = model.clamp(x - g);
    out.residual_x = (x - x_proj).norm();
    if (out.residual_x <= cfg.tol_x) break;

    double t = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < cfg.armijo_max_halvings; ++ls) {
      const VectorXd cand = model.clamp(x - t * g);
      const double cand_val = objective_unchecked(model, cand, state.p);
      if (cand_val <= val - cfg.armijo_c * g.dot(x - cand)) {
        x = cand;
        val = cand_val;
        accepted = true;
        break;
      }
      t *= cfg.armijo_backtrack;
    }
    if (!accepted) {
      out.stalled = true;
      break;
    }
  }

  // Final residual at the returned point.
  out.residual_x = (x - model.clamp(x - grad_x(model, x, state.p, cfg.fd_step))).norm();
  out.x = x;
  out.value = val;
  return out;
}

MinimaxState step_max_p(const Model& model, const MinimaxState& state,
                        const SolverConfig& cfg) {
  const MatrixXd F = model.image(state.x);
  const int l = static_cast<int>(F.rows());
  const int k = model.k();

  struct Candidate {
    VectorXd p;
    double h_val;
  };

  const double incoming = model.h(F * state.p);
  Candidate best{state.p, incoming};
  auto consider = [&](const VectorXd& p, double h_val) {
    if (h_val > best.h_val) best = {p, h_val};
  };

  if (l <= 3) {
    const auto dirs = sweep_directions(l, cfg.sweep_directions);
    const int nd = static_cast<int>(dirs.size());
    std::vector<Candidate> results(nd);
    chunked_parallel(nd, cfg.jobs, [&](int lo, int hi) {
      VectorXd warm = state.p;  // warm start within the chunk
      for (int s = lo; s < hi; ++s) {
        const VectorXd c = F.transpose() * dirs[s];
        warm = maximize_linear(model, c, warm);
        results[s] = {warm, model.h(F * warm)};
      }
    });
    for (const auto& r : results) consider(r.p, r.h_val);
  }

  // Ascent restarts from evenly spaced simplex vertices.
  const int starts = std::min(k, cfg.fw_starts);
  std::vector<Candidate> restarts(starts);
  chunked_parallel(starts, cfg.jobs, [&](int lo, int hi) {
    for (int s = lo; s < hi; ++s) {
      const int vertex = static_cast<int>(static_cast<long>(s) * k / starts);
      VectorXd p0 = ambiguity::project_ambiguity(model.samples, model.ball,
                                                 VectorXd::Unit(k, vertex))
                        .p;
      const VectorXd p = ascend_quadratic(model, F, p0);
      restarts[s] = {p, model.h(F * p)};
    }
  });
  for (const auto& r : restarts) consider(r.p, r.h_val);

  // Polish the winner; keep it only if it does not lose value. Intermediate
  // candidates carry a looser projection tolerance, so re-project the winner
  // at full accuracy if needed.
  if (best.h_val > incoming) {
    const VectorXd polished = ascend_quadratic(model, F, best.p);
    consider(polished, model.h(F * polished));
    if (!ambiguity::member(model.samples, model.ball, best.p)) {
      const VectorXd refined =
          ambiguity::project_ambiguity(model.samples, model.ball, best.p).p;
      const double hv = model.h(F * refined);
      if (hv >= incoming)
        best = {refined, hv};
      else
        best = {state.p, incoming};
    }
  }

  MinimaxState out = state;
  out.p = best.p;
  out.value = model.theta(state.x) + best.h_val;
  out.residual_p = best.h_val - incoming;  // inner-max improvement
  return out;
}

namespace {

// Deterministic multistart for the default x0. The objective is nonconvex in
// x and can hold wide plateau basins, so a single default start is
// unreliable; descent probes alone are not enough either, since a long
// Armijo step can jump across a narrow valley onto a plateau. Stage one
// scans a coarse lo/mid/hi grid of raw objective values at p0; stage two
// runs short alternation probes from the few best scan points and returns
// the best probe endpoint.
VectorXd multistart_x0(const Model& model, const SolverConfig& cfg,
                       const VectorXd& p0) {
  const int n = static_cast<int>(model.x_lo.size());
  const VectorXd mid = 0.5 * (model.x_lo + model.x_hi);

  std::vector<VectorXd> scan;
  if (n <= 6) {
    // Full {lo, mid, hi}^n grid, lexicographic order.
    int total = 1;
    for (int i = 0; i < n; ++i) total *= 3;
    for (int code = 0; code < total; ++code) {
      VectorXd c(n);
      int rem = code;
      for (int i = 0; i < n; ++i) {
        const int digit = rem % 3;
        rem /= 3;
        c[i] = digit == 0 ? model.x_lo[i] : (digit == 1 ? mid[i] : model.x_hi[i]);
      }
      scan.push_back(std::move(c));
    }
  } else {
    scan.push_back(mid);
    for (int i = 0; i < n; ++i) {
      VectorXd lo_face = mid, hi_face = mid;
      lo_face[i] = model.x_lo[i];
      hi_face[i] = model.x_hi[i];
      scan.push_back(std::move(lo_face));
      scan.push_back(std::move(hi_face));
    }
  }

  std::vector<std::pair<double, int>> ranked;
  ranked.reserve(scan.size());
  for (int i = 0; i < static_cast<int>(scan.size()); ++i)
    ranked.emplace_back(objective_unchecked(model, scan[i], p0), i);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  SolverConfig probe = cfg;
  probe.max_outer = 2;
  probe.max_inner_x = std::min(cfg.max_inner_x, 40);
  probe.sweep_directions = std::min(cfg.sweep_directions, 32);
  probe.fw_starts = std::min(cfg.fw_starts, 8);

  const int starts = std::min<int>(4, static_cast<int>(ranked.size()));
  VectorXd best_x = scan[ranked.front().second];
  double best_val = std::numeric_limits<double>::infinity();
  for (int s = 0; s < starts; ++s) {
    MinimaxState st;
    st.p = p0;
    st.x = scan[ranked[s].second];
    for (int j = 0; j < probe.max_outer; ++j) {
      st = step_min_x(model, st, probe);
      st = step_max_p(model, st, probe);
    }
    if (st.value < best_val) {
      best_val = st.value;
      best_x = st.x;
    }
  }
  return best_x;
}

}  // namespace

MinimaxState alternate(const Model& model, const SolverConfig& cfg,
                       const VectorXd& p0, const VectorXd& x0) {
  if (!ambiguity::member(model.samples, model.ball, p0))
    throw std::invalid_argument("alternate: p0 is not in the ambiguity set");

  MinimaxState state;
  state.p = p0;
  state.x = x0.size() > 0 ? model.clamp(x0) : multistart_x0(model, cfg, p0);
  state.k = model.k();
  state.converged = false;

  // Full best-response descent overfits the current weights when the inner
  // max reacts strongly (the iterates can spiral into a degenerate plateau).
  // After the first overfit round the descent is damped to a few projected
  // gradient steps per round; the stopping rule below is unaffected since it
  // re-evaluates the residual at the updated weights.
  SolverConfig damped = cfg;
  bool overfit = false;

  for (int j = 0; j < cfg.max_outer; ++j) {
    state = step_min_x(model, state, overfit ? damped : cfg);
    const double before_max = objective_unchecked(model, state.x, state.p);
    state = step_max_p(model, state, cfg);
    state.iteration = j + 1;

    if (!overfit &&
        state.value - before_max > 0.05 * (1.0 + std::abs(before_max))) {
      overfit = true;
      damped.max_inner_x = std::min(cfg.max_inner_x, 3);
    }

    if (state.residual_x <= cfg.tol_x &&
        state.value - before_max <= cfg.tol_p) {
      // Re-check the x-residual against the updated weights.
      state.residual_x =
          (state.x -
           model.clamp(state.x - grad_x(model, state.x, state.p, cfg.fd_step)))
              .norm();
      if (state.residual_x <= cfg.tol_x) {
        state.converged = true;
        break;
      }
    }
  }
  state.value = objective_unchecked(model, state.x, state.p);
  return state;
}

std::vector<SweepRow> schedule_solve(const ModelFactory& factory,
                                     const std::vector<double>& eps_list,
                                     const std::vector<int>& k_list,
                                     const std::vector<double>& eta_list,
                                     const SolverConfig& cfg,
                                     const VectorXd& reference_x) {
  if (eps_list.empty() || k_list.empty() || eta_list.empty())
    throw std::invalid_argument("schedule_solve: empty sweep axis");

  std::vector<SweepRow> rows;
  for (double eps : eps_list) {
    for (int k : k_list) {
      for (double eta : eta_list) {
        SweepRow row;
        row.eps = eps;
        row.k = k;
        row.eta = eta;
        const auto t0 = std::chrono::steady_clock::now();
        try {
          const Model model = factory(eps, k, eta);
          const VectorXd p0 = VectorXd::Constant(k, 1.0 / k);
          const MinimaxState st = alternate(model, cfg, p0);
          row.state = st;
          row.value = st.value;
          row.res_x = st.residual_x;
          row.res_p = st.residual_p;
          row.iters = st.iteration;
          if (reference_x.size() == st.x.size())
            row.x_err = (st.x - reference_x).norm();
          if (!st.converged) row.status = "budget";
        } catch (const std::exception& e) {
          row.status = std::string("error: ") + e.what();
        }
        row.seconds = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

stationarity::Certificate certify_block_stationarity(const Model& model,
                                                     const VectorXd& x,
                                                     const VectorXd& p,
                                                     double tol,
                                                     double fd_step) {
  if (!model.in_box(x))
    throw std::invalid_argument("certify_block_stationarity: x outside box");
  if (!ambiguity::member(model.samples, model.ball, p))
    throw std::invalid_argument("certify_block_stationarity: p not in P_k");

  stationarity::Certificate cert;
  cert.res_x =
      (x - model.clamp(x - grad_x(model, x, p, fd_step))).norm();

  const MatrixXd F = model.image(x);
  const VectorXd grad_p = F.transpose() * model.grad_h(F * p);
  cert.res_p =
      (p - ambiguity::project_ambiguity(model.samples, model.ball, p + grad_p).p)
          .norm();

  if (model.blocks) {
    const auto blocks = model.blocks(x);
    const auto grads =
        model.grad_y_blocks ? model.grad_y_blocks(x, p)
                            : std::vector<VectorXd>(blocks.size());
    auto rank = [](stationarity::StationarityClass c) {
      return static_cast<int>(c);
    };
    cert.klass = stationarity::StationarityClass::kS;
    for (size_t b = 0; b < blocks.size(); ++b) {
      const auto& blk = blocks[b];
      const VectorXd w = blk.inst.M * blk.y + blk.inst.q;
      cert.inner_feasibility =
          std::max(cert.inner_feasibility,
                   blk.y.cwiseMin(w).cwiseAbs().maxCoeff());

      stationarity::BlockCertificate bc;
      try {
        bc.partition = stationarity::classify_indices(blk.y, w, lcp::kActiveTol);
      } catch (const std::exception&) {
        bc.klass = stationarity::StationarityClass::kNone;
        cert.klass = stationarity::StationarityClass::kNone;
        cert.blocks.push_back(std::move(bc));
        continue;
      }
      const VectorXd gy = grads[b].size() == blk.y.size()
                              ? grads[b]
                              : VectorXd::Zero(blk.y.size());
      bc.multipliers =
          stationarity::recover_multipliers(gy, blk.inst.M, bc.partition);
      bc.klass = stationarity::classify_stationarity(bc.multipliers, bc.partition);
      bc.licq = stationarity::check_mpec_licq(blk.inst.M, bc.partition);
      cert.kkt_residual =
          std::max(cert.kkt_residual, bc.multipliers.kkt_residual);
      if (rank(bc.klass) < rank(cert.klass)) cert.klass = bc.klass;
      cert.licq = cert.licq && bc.licq.holds;
      cert.blocks.push_back(std::move(bc));
    }
  }

  cert.pass = cert.res_x <= tol && cert.res_p <= tol &&
              cert.inner_feasibility <= tol;
  return cert;
}

}  // namespace drsolve::minimax
