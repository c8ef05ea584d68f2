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

#ifndef RSGAME_LINALG_HPP_
#define RSGAME_LINALG_HPP_

#include <vector>

#include <Eigen/Dense>

namespace rsgame::linalg {

// Pivots below this magnitude mark a system as singular.
inline constexpr double kPivotThreshold = 1e-12;

// Dense LU solve with two rounds of residual refinement. Throws
// Error(kNumerical) when a pivot falls below kPivotThreshold.
Eigen::VectorXd Solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

// Largest eigenvalue modulus. Zero for an empty matrix.
double SpectralRadius(const Eigen::MatrixXd& m);

// Adjacency derived from the positive entries of a square matrix.
using Graph = std::vector<std::vector<int>>;
Graph SupportGraph(const Eigen::MatrixXd& m);

bool IsStronglyConnected(const Graph& g);

// Period of a strongly connected graph (gcd of its cycle lengths).
int Period(const Graph& g);

struct PerronResult {
  double rho = 0.0;
  Eigen::VectorXd vector;  // positive right eigenvector
  int iterations = 0;
};

// Perron root and right eigenvector of a nonnegative irreducible matrix by
// shifted power iteration, stopping when the Collatz-Wielandt bracket is
// narrower than rel_tol relative. Throws Error(kNumerical) on
// non-convergence.
PerronResult PerronPowerIteration(const Eigen::MatrixXd& m,
                                  double rel_tol = 1e-12,
                                  int max_iterations = 100000);

}  // namespace rsgame::linalg

#endif  // RSGAME_LINALG_HPP_
