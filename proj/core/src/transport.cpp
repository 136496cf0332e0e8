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

#include "drsolve/transport.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace drsolve::transport {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void DiscreteDistribution::validate(double tol) const {
  if (weights.size() != atoms.cols())
    throw std::invalid_argument("DiscreteDistribution: weight count mismatch");
  if (weights.size() == 0)
    throw std::invalid_argument("DiscreteDistribution: empty support");
  if (weights.minCoeff() < 0.0)
    throw std::invalid_argument("DiscreteDistribution: negative weight");
  if (std::abs(weights.sum() - 1.0) > tol)
    throw std::invalid_argument("DiscreteDistribution: weights must sum to 1");
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j)
      if ((atoms.col(i) - atoms.col(j)).norm() == 0.0)
        throw std::invalid_argument("DiscreteDistribution: duplicate atoms");
}

int voronoi_assign(const ambiguity::SampleSet& samples,
                   const Eigen::VectorXd& x) {
  if (!samples.in_domain(x))
    throw std::invalid_argument("voronoi_assign: point outside the domain");
  int best = 0;
  double best_d = (x - samples.points.col(0)).squaredNorm();
  for (int i = 1; i < samples.count(); ++i) {
    const double d = (x - samples.points.col(i)).squaredNorm();
    if (d < best_d - 0.0) {  // strict: ties stay at the lowest index
      best_d = d;
      best = i;
    }
  }
  return best;
}

FillDistanceReport fill_distance(const ambiguity::SampleSet& samples,
                                 int probe_resolution) {
  if (probe_resolution < 2)
    throw std::invalid_argument("fill_distance: probe_resolution must be >= 2");
  const int nu = samples.nu;
  const int R = probe_resolution;

  FillDistanceReport rep;
  auto nearest = [&](const VectorXd& x) {
    double d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples.count(); ++i)
      d = std::min(d, (x - samples.points.col(i)).norm());
    return d;
  };

  // Probe grid: R points per axis, endpoints included.
  std::vector<int> idx(nu, 0);
  VectorXd x(nu);
  long total = 1;
  for (int d = 0; d < nu; ++d) total *= R;
  for (long it = 0; it < total; ++it) {
    long rem = it;
    for (int d = 0; d < nu; ++d) {
      const int j = static_cast<int>(rem % R);
      rem /= R;
      x[d] = samples.domain_lo[d] +
             (samples.domain_hi[d] - samples.domain_lo[d]) * j / (R - 1);
    }
    rep.probe_value = std::max(rep.probe_value, nearest(x));
  }

  for (long c = 0; c < (1L << nu); ++c) {
    for (int d = 0; d < nu; ++d)
      x[d] = (c >> d) & 1 ? samples.domain_hi[d] : samples.domain_lo[d];
    rep.corner_value = std::max(rep.corner_value, nearest(x));
  }
  return rep;
}

DiscreteDistribution voronoi_projection(const DiscreteDistribution& p,
                                        const ambiguity::SampleSet& samples) {
  p.validate();
  DiscreteDistribution out;
  out.atoms = samples.points;
  out.weights = VectorXd::Zero(samples.count());
  for (int i = 0; i < p.size(); ++i)
    out.weights[voronoi_assign(samples, p.atoms.col(i))] += p.weights[i];
  return out;
}

namespace {

// Transportation simplex on the dense bipartite problem
//   min sum_ij f_ij c_ij  s.t. row sums = a, column sums = b.
double transportation_simplex(const VectorXd& a, const VectorXd& b,
                              const MatrixXd& C) {
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());
  const int nodes = n + m;  // rows 0..n-1, columns n..n+m-1

  struct Cell {
    int i, j;
    double flow;
  };
  std::vector<Cell> basis;
  basis.reserve(nodes - 1);

  // Northwest-corner initial basis: exactly n+m-1 cells, zero flows allowed.
  {
    VectorXd ra = a, rb = b;
    int i = 0, j = 0;
    while (true) {
      const double f = std::max(0.0, std::min(ra[i], rb[j]));
      basis.push_back({i, j, f});
      ra[i] -= f;
      rb[j] -= f;
      if (i == n - 1 && j == m - 1) break;
      if (i == n - 1)
        ++j;
      else if (j == m - 1)
        ++i;
      else if (ra[i] <= rb[j])
        ++i;
      else
        ++j;
    }
  }

  std::vector<std::vector<int>> adj(nodes);  // node -> basic cell indices
  auto rebuild_adj = [&]() {
    for (auto& l : adj) l.clear();
    for (int t = 0; t < static_cast<int>(basis.size()); ++t) {
      adj[basis[t].i].push_back(t);
      adj[n + basis[t].j].push_back(t);
    }
  };
  rebuild_adj();

  VectorXd u(n), v(m);
  std::vector<int> parent_cell(nodes), parent_node(nodes);
  std::vector<char> seen(nodes);

  const long max_iter = 200L * nodes + 10000;
  for (long iter = 0;; ++iter) {
    if (iter >= max_iter)
      throw std::runtime_error("wasserstein: pivot budget exhausted");

    // Potentials from the basis tree, rooted at row 0.
    std::fill(seen.begin(), seen.end(), 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    u[0] = 0.0;
    while (!queue.empty()) {
      const int node = queue.front();
      queue.pop_front();
      for (int t : adj[node]) {
        const Cell& c = basis[t];
        const int other = (node == c.i) ? n + c.j : c.i;
        if (seen[other]) continue;
        seen[other] = 1;
        if (other >= n)
          v[other - n] = C(c.i, c.j) - u[c.i];
        else
          u[other] = C(c.i, c.j) - v[node - n];
        queue.push_back(other);
      }
    }

    // Entering cell: most negative reduced cost (Bland after a warmup).
    const bool bland = iter > 50L * nodes;
    int ei = -1, ej = -1;
    double best = -1e-11;
    for (int i = 0; i < n && (ei < 0 || !bland); ++i) {
      for (int j = 0; j < m; ++j) {
        const double r = C(i, j) - u[i] - v[j];
        if (r < best) {
          best = r;
          ei = i;
          ej = j;
          if (bland) break;
        }
      }
    }
    if (ei < 0) break;  // optimal

    // Unique tree path from row ei to column ej.
    std::fill(seen.begin(), seen.end(), 0);
    queue = {ei};
    seen[ei] = 1;
    parent_cell[ei] = -1;
    while (!queue.empty()) {
      const int node = queue.front();
      queue.pop_front();
      if (node == n + ej) break;
      for (int t : adj[node]) {
        const Cell& c = basis[t];
        const int other = (node == c.i) ? n + c.j : c.i;
        if (seen[other]) continue;
        seen[other] = 1;
        parent_cell[other] = t;
        parent_node[other] = node;
        queue.push_back(other);
      }
    }

    // Walk back, collecting the alternating cycle. The entering cell gets
    // +theta; path cells alternate starting with -theta at the column end.
    std::vector<int> path;
    for (int node = n + ej; node != ei; node = parent_node[node])
      path.push_back(parent_cell[node]);

    double theta = std::numeric_limits<double>::infinity();
    int leave_pos = -1;
    for (size_t s = 0; s < path.size(); s += 2) {  // minus positions
      const double f = basis[path[s]].flow;
      if (f < theta - 1e-15 ||
          (f < theta + 1e-15 && (leave_pos < 0 || path[s] < path[leave_pos]))) {
        theta = f;
        leave_pos = static_cast<int>(s);
      }
    }

    for (size_t s = 0; s < path.size(); ++s)
      basis[path[s]].flow += (s % 2 == 0) ? -theta : theta;
    basis[path[leave_pos]] = {ei, ej, theta};
    rebuild_adj();
  }

  double cost = 0.0;
  for (const Cell& c : basis) cost += c.flow * C(c.i, c.j);
  return cost;
}

}  // namespace

double wasserstein(const DiscreteDistribution& p,
                   const DiscreteDistribution& q) {
  p.validate();
  q.validate();
  if (p.dim() != q.dim())
    throw std::invalid_argument("wasserstein: dimension mismatch");

  // Drop zero-weight atoms; they carry no mass.
  std::vector<int> pi, qi;
  for (int i = 0; i < p.size(); ++i)
    if (p.weights[i] > 0.0) pi.push_back(i);
  for (int j = 0; j < q.size(); ++j)
    if (q.weights[j] > 0.0) qi.push_back(j);

  const int n = static_cast<int>(pi.size());
  const int m = static_cast<int>(qi.size());
  VectorXd a(n), b(m);
  MatrixXd C(n, m);
  for (int i = 0; i < n; ++i) a[i] = p.weights[pi[i]];
  for (int j = 0; j < m; ++j) b[j] = q.weights[qi[j]];
  // Absorb the (<= 1e-10) normalization slack so the marginals balance.
  b *= a.sum() / b.sum();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      C(i, j) = (p.atoms.col(pi[i]) - q.atoms.col(qi[j])).norm();

  return transportation_simplex(a, b, C);
}

double deviation(const std::vector<DiscreteDistribution>& ps,
                 const std::vector<DiscreteDistribution>& qs) {
  if (ps.empty() || qs.empty())
    throw std::invalid_argument("deviation: empty list");
  double dev = 0.0;
  for (const auto& p : ps) {
    double inf = std::numeric_limits<double>::infinity();
    for (const auto& q : qs) inf = std::min(inf, wasserstein(p, q));
    dev = std::max(dev, inf);
  }
  return dev;
}

}  // namespace drsolve::transport
