// Copyright 2026 The rsgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "error.hpp"

namespace rsgame::linalg {

Eigen::VectorXd Solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  if (a.rows() == 0) return Eigen::VectorXd(0);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(min_pivot >= kPivotThreshold)) {
    std::ostringstream os;
    os << "singular linear system (min pivot " << min_pivot << ")";
    Fail(ErrorCode::kNumerical, os.str());
  }
  Eigen::VectorXd x = lu.solve(b);
  for (int round = 0; round < 2; ++round) {
    const Eigen::VectorXd residual = b - a * x;
    x += lu.solve(residual);
  }
  return x;
}

double SpectralRadius(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  if (m.rows() == 1) return std::abs(m(0, 0));
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    Fail(ErrorCode::kNumerical, "eigenvalue computation failed");
  }
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Graph SupportGraph(const Eigen::MatrixXd& m) {
  Graph g(m.rows());
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (m(i, j) > 0.0) g[i].push_back(j);
    }
  }
  return g;
}

namespace {

std::vector<int> BfsLevels(const Graph& g, int start) {
  std::vector<int> level(g.size(), -1);
  std::queue<int> frontier;
  level[start] = 0;
  frontier.push(start);
  while (!frontier.empty()) {
    const int i = frontier.front();
    frontier.pop();
    for (int j : g[i]) {
      if (level[j] < 0) {
        level[j] = level[i] + 1;
        frontier.push(j);
      }
    }
  }
  return level;
}

}  // namespace

bool IsStronglyConnected(const Graph& g) {
  if (g.empty()) return true;
  const auto fwd = BfsLevels(g, 0);
  if (std::any_of(fwd.begin(), fwd.end(), [](int l) { return l < 0; })) {
    return false;
  }
  Graph rev(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (int j : g[i]) rev[j].push_back(static_cast<int>(i));
  }
  const auto bwd = BfsLevels(rev, 0);
  return std::none_of(bwd.begin(), bwd.end(), [](int l) { return l < 0; });
}

int Period(const Graph& g) {
  if (g.empty()) return 1;
  const auto level = BfsLevels(g, 0);
  int d = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (level[i] < 0) continue;
    for (int j : g[i]) {
      if (level[j] < 0) continue;
      d = std::gcd(d, std::abs(level[i] + 1 - level[j]));
    }
  }
  return d == 0 ? 1 : d;
}

PerronResult PerronPowerIteration(const Eigen::MatrixXd& m, double rel_tol,
                                  int max_iterations) {
  const int n = static_cast<int>(m.rows());
  PerronResult out;
  if (n == 0) return out;
  // The shift makes the Perron root strictly dominant even for periodic
  // patterns.
  const double shift = m.rowwise().sum().maxCoeff();
  if (shift <= 0.0) {
    out.vector = Eigen::VectorXd::Ones(n);
    return out;
  }
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  double lo = 0.0, hi = 0.0;
  for (int it = 1; it <= max_iterations; ++it) {
    Eigen::VectorXd y = m * x + shift * x;
    lo = std::numeric_limits<double>::infinity();
    hi = 0.0;
    for (int i = 0; i < n; ++i) {
      const double ratio = y(i) / x(i);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    x = y / y.maxCoeff();
    if (hi - lo <= rel_tol * hi) {
      out.rho = 0.5 * (lo + hi) - shift;
      out.vector = x;
      out.iterations = it;
      return out;
    }
  }
  std::ostringstream os;
  os << "power iteration did not converge in " << max_iterations
     << " iterations (bracket [" << lo - shift << ", " << hi - shift << "])";
  Fail(ErrorCode::kNumerical, os.str());
}

}  // namespace rsgame::linalg
