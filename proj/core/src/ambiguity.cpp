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

#include "drsolve/ambiguity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

namespace drsolve::ambiguity {

using Eigen::MatrixXd;
using Eigen::VectorXd;

bool SampleSet::in_domain(const VectorXd& x, double tol) const {
  if (x.size() != nu) return false;
  return (x.array() >= domain_lo.array() - tol).all() &&
         (x.array() <= domain_hi.array() + tol).all();
}

void SampleSet::validate() const {
  if (points.rows() != nu)
    throw std::invalid_argument("SampleSet: point dimension mismatch");
  for (int i = 0; i < count(); ++i) {
    if (!in_domain(points.col(i)))
      throw std::invalid_argument("SampleSet: sample outside the domain box");
    for (int j = i + 1; j < count(); ++j)
      if ((points.col(i) - points.col(j)).norm() == 0.0)
        throw std::invalid_argument("SampleSet: duplicate samples");
  }
}

bool WeightVector::valid(double tol) const {
  if (p.size() == 0) return false;
  return p.minCoeff() >= -tol && std::abs(p.sum() - 1.0) <= tol;
}

bool member(const SampleSet& samples, const MeanBallSet& ball,
            const VectorXd& p, double slack) {
  if (p.size() != samples.count())
    throw std::invalid_argument("member: weight dimension mismatch");
  if (p.minCoeff() < -1e-10 || std::abs(p.sum() - 1.0) > 1e-10) return false;
  const VectorXd mean = samples.points * p;
  return (mean - ball.mu0).squaredNorm() <= ball.eta + slack;
}

VectorXd project_simplex(const VectorXd& z) {
  const int k = static_cast<int>(z.size());
  if (k < 1) throw std::invalid_argument("project_simplex: empty input");
  std::vector<double> u(z.data(), z.data() + k);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cssv = 0.0, theta = 0.0;
  for (int i = 0; i < k; ++i) {
    cssv += u[i];
    const double t = (cssv - 1.0) / (i + 1);
    if (u[i] - t > 0.0) theta = t;
  }
  return (z.array() - theta).max(0.0);
}

namespace {

// Spectral data of the Gram matrix QQ^T, reused across Dykstra sweeps.
struct GramEigen {
  MatrixXd U;       // nu x nu eigenvectors
  VectorXd g;       // eigenvalues
  VectorXd b;       // U^T mu0
};

GramEigen gram_eigen(const MatrixXd& Q, const VectorXd& mu0) {
  const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(Q * Q.transpose());
  return {eig.eigenvectors(), eig.eigenvalues(),
          VectorXd(eig.eigenvectors().transpose() * mu0)};
}

ProjectionResult project_mean_ball_impl(const MatrixXd& Q,
                                        const MeanBallSet& ball,
                                        const GramEigen& ge,
                                        const VectorXd& z) {
  ProjectionResult out;
  const VectorXd Qz = Q * z;
  if ((Qz - ball.mu0).squaredNorm() <= ball.eta) {
    out.p = z;
    return out;
  }

  // KKT for the single active constraint: p(lam) = z - lam * Q^T w(lam) with
  // w(lam) = (I + lam*G)^{-1} (Qz + lam*G*mu0) - mu0 and G = QQ^T. In the
  // eigenbasis of G this collapses to w~_i = (a_i - b_i) / (1 + lam*g_i), so
  // each bisection step costs O(nu).
  const VectorXd d = ge.U.transpose() * Qz - ge.b;  // a - b
  auto phi = [&](double lam) {
    double s = 0.0;
    for (int i = 0; i < d.size(); ++i) {
      const double wi = d[i] / (1.0 + lam * ge.g[i]);
      s += wi * wi;
    }
    return s - ball.eta;
  };

  double lo = 0.0, hi = 1.0;
  int expand = 0;
  while (phi(hi) > 0.0 && expand++ < 200) {
    lo = hi;
    hi *= 2.0;
  }
  out.converged = expand < 200;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) > 0.0 ? lo : hi) = mid;
  }
  const double lam = hi;  // feasible side of the bracket
  const VectorXd w =
      ge.U * VectorXd(d.array() / (1.0 + lam * ge.g.array()));
  out.p = z - lam * (Q.transpose() * w);
  out.infeasibility =
      std::max(0.0, (Q * out.p - ball.mu0).squaredNorm() - ball.eta);
  return out;
}

}  // namespace

ProjectionResult project_mean_ball(const SampleSet& samples,
                                   const MeanBallSet& ball,
                                   const VectorXd& z) {
  if (!(ball.eta > 0.0))
    throw std::invalid_argument("project_mean_ball: eta must be > 0");
  return project_mean_ball_impl(samples.points, ball,
                                gram_eigen(samples.points, ball.mu0), z);
}

ProjectionResult project_ambiguity(const SampleSet& samples,
                                   const MeanBallSet& ball, const VectorXd& z,
                                   double tol, int max_sweeps) {
  if (!(ball.eta > 0.0))
    throw std::invalid_argument("project_ambiguity: eta must be > 0");

  // Fast path: if the simplex projection already satisfies the ball
  // constraint it is the projection onto the intersection.
  {
    VectorXd y = project_simplex(z);
    if ((samples.points * y - ball.mu0).squaredNorm() <= ball.eta) {
      ProjectionResult out;
      out.p = std::move(y);
      return out;
    }
  }

  // Dykstra's scheme over the simplex and the mean ball.
  const GramEigen ge = gram_eigen(samples.points, ball.mu0);
  VectorXd x = z;
  VectorXd inc_simplex = VectorXd::Zero(z.size());
  VectorXd inc_ball = VectorXd::Zero(z.size());

  ProjectionResult out;
  out.converged = false;
  int stall = 0;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const VectorXd x_prev = x;

    VectorXd y = project_simplex(x + inc_simplex);
    inc_simplex = (x + inc_simplex) - y;
    x = project_mean_ball_impl(samples.points, ball, ge, y + inc_ball).p;
    inc_ball = (y + inc_ball) - x;

    // The iterate can stall for a sweep while the increments still move, so
    // an unchanged x alone is not enough; it must also be (near) feasible.
    // x already satisfies the ball, so only the simplex part can be off. A
    // persistent infeasible stall means the sets barely intersect; give the
    // increments a while to push through, then give up.
    if ((x - x_prev).cwiseAbs().maxCoeff() < tol && sweep > 0) {
      const double viol = std::max(std::abs(x.sum() - 1.0),
                                   std::max(0.0, -x.minCoeff()));
      if (viol <= 1e-9) {
        out.converged = true;
        break;
      }
      if (++stall >= 64) break;
    } else {
      stall = 0;
    }
  }
  out.p = x;
  const double simplex_viol = std::max(
      std::abs(x.sum() - 1.0), std::max(0.0, -x.minCoeff()));
  const double ball_viol =
      std::max(0.0, (samples.points * x - ball.mu0).squaredNorm() - ball.eta);
  out.infeasibility = std::max(simplex_viol, ball_viol);
  if (out.infeasibility > 1e-8) out.converged = false;
  return out;
}

SlaterReport slater_witness(const SampleSet& samples, const MeanBallSet& ball,
                            const VectorXd& cell_weights) {
  SlaterReport rep;
  if (member(samples, ball, cell_weights)) {
    rep.witness = WeightVector{cell_weights};
  } else {
    const VectorXd mean = samples.points * cell_weights;
    rep.violation = std::max(0.0, (mean - ball.mu0).squaredNorm() - ball.eta);
  }
  return rep;
}

double hoffman_bound(const MeanBallSet& ball, const VectorXd& q_mean,
                     double delta, double alpha) {
  if (!(alpha > 0.0))
    throw std::invalid_argument("hoffman_bound: alpha must be > 0");
  const double dist =
      std::max(0.0, (q_mean - ball.mu0).norm() - std::sqrt(ball.eta));
  return (delta / alpha) * dist;
}

double hoffman_bound(const MeanBallSet& ball, const MatrixXd& q_atoms,
                     const VectorXd& q_weights, double delta, double alpha) {
  return hoffman_bound(ball, VectorXd(q_atoms * q_weights), delta, alpha);
}

}  // namespace drsolve::ambiguity
