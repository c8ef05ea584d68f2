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

#ifndef RSGAME_BIMATRIX_HPP_
#define RSGAME_BIMATRIX_HPP_

#include <vector>

#include <Eigen/Dense>

#include "game_model.hpp"

namespace rsgame {

// Equilibria of a bimatrix game in which both players minimize: the row
// player pays x^T A y, the column player pays x^T B y.
struct BimatrixEquilibrium {
  MixedAction row;
  MixedAction col;
  std::vector<int> row_support;
  std::vector<int> col_support;
  double row_value = 0.0;  // x^T A y
  double col_value = 0.0;  // x^T B y
};

struct BimatrixResult {
  // Sorted by the selection rule: lexicographically smallest (row support,
  // column support), then lexicographically smallest (x, y).
  std::vector<BimatrixEquilibrium> equilibria;
  int skipped_supports = 0;  // numerically degenerate support systems

  const BimatrixEquilibrium& selected() const { return equilibria.front(); }
};

struct BimatrixOptions {
  double tol = 1e-9;      // relative tolerance on the minimality conditions
  int support_cap = 8;    // largest support size examined
};

// Support enumeration. Equal-size support pairs are tried first; unequal
// sizes are tried only when those yield nothing (degenerate games). Throws
// Error(kNumerical) if no equilibrium survives the tolerance.
BimatrixResult SolveBimatrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                             const BimatrixOptions& options = {});

// Largest violation of the two one-sided minimality conditions, relative to
// the magnitude of the entries.
double BimatrixRegret(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                      const MixedAction& x, const MixedAction& y);

}  // namespace rsgame

#endif  // RSGAME_BIMATRIX_HPP_
