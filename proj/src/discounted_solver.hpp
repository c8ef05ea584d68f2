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

#ifndef RSGAME_DISCOUNTED_SOLVER_HPP_
#define RSGAME_DISCOUNTED_SOLVER_HPP_

#include <vector>

#include <Eigen/Dense>

#include "bimatrix.hpp"
#include "game_model.hpp"

namespace rsgame::discounted {

// Stage-indexed exponential values phi_i(t, k) at risk level
// theta_t = theta * alpha^t, and the matching psi_i = ln(phi_i) / theta_t.
// Index t runs over 0..T; stage T is the terminal stage with phi = 1.
struct ExpValueTable {
  std::vector<Vector> phi1, phi2;
  std::vector<Vector> psi1, psi2;
  std::vector<double> theta_t;
  int horizon = 0;
  double tail_bound = 0.0;

  const std::vector<Vector>& phi(Player p) const {
    return p == Player::kOne ? phi1 : phi2;
  }
  const std::vector<Vector>& psi(Player p) const {
    return p == Player::kOne ? psi1 : psi2;
  }
};

// Per-(t, k) cost matrices for both minimizing players.
struct StageGame {
  Eigen::MatrixXd a;  // player I
  Eigen::MatrixXd b;  // player II
};

struct BellmanValue {
  double value = 0.0;
  std::vector<int> argmin;            // own pure actions within 1e-9 relative
  std::vector<double> action_values;  // objective per own pure action
};

// min over own pure actions of
//   sum_opp opponent(w) exp(scale * r_i(k,.,.)) sum_j continuation(j) q(j|k,.,.)
BellmanValue ExpBellmanApply(const GameSpec& spec, double scale,
                             const Vector& continuation,
                             const MixedAction& opponent, int k, Player player);

StageGame BuildStageGame(const GameSpec& spec, int k, double theta_t,
                         const Vector& phi1_next, const Vector& phi2_next);

// exp(theta alpha^T ||r|| / (1 - alpha)) - 1.
double TailBound(double theta, double alpha, double norm, int horizon);

// Smallest T >= 1 with TailBound(T) <= eps.
int HorizonForTolerance(double theta, double alpha, double norm, double eps);

struct DiscountedOptions {
  double eps = 1e-8;
  int horizon = 0;  // > 0 overrides the horizon derived from eps
  BimatrixOptions bimatrix;
};

struct DiscountedSolution {
  MarkovProfile profile;
  ExpValueTable values;
  int skipped_supports = 0;
  int stages_with_multiple_equilibria = 0;
};

DiscountedSolution SolveDiscounted(const GameSpec& spec,
                                   const DiscountedOptions& options = {});

// zeta_i(t, .) for t = 0..T under a Markov profile, zeta(T, .) = 1.
std::vector<Vector> EvaluateExpCostStages(const GameSpec& spec,
                                          const MarkovProfile& profile,
                                          Player player);
Vector EvaluateExpCost(const GameSpec& spec, const MarkovProfile& profile,
                       Player player);

// E[sum_{s<T} alpha^s r_i] under the profile (risk-neutral evaluation).
Vector EvaluateRiskNeutral(const GameSpec& spec, const MarkovProfile& profile,
                           Player player);

struct BestResponse {
  std::vector<Vector> value;                 // t = 0..T
  std::vector<std::vector<int>> action;      // [t][k], lowest argmin
  std::vector<std::vector<std::vector<int>>> argmin;  // [t][k]
};

// Single-controller backward induction for `player` against the opponent's
// component of `profile`.
BestResponse BestResponseValueDiscounted(const GameSpec& spec,
                                         const MarkovProfile& profile,
                                         Player player);

struct PlayerGap {
  Vector gap_exp;  // zeta^{profile} - zeta*
  Vector gap_psi;  // (ln zeta^{profile} - ln zeta*) / theta
  double max_gap = 0.0;
};

struct DiscountedVerification {
  PlayerGap player1;
  PlayerGap player2;
  double tol = 0.0;
  double tail_slack = 0.0;  // tail_bound * max_k zeta^{profile}(0, k)
  bool pass = false;
};

DiscountedVerification VerifyNashDiscounted(const GameSpec& spec,
                                            const MarkovProfile& profile,
                                            double tol, double tail_bound);

}  // namespace rsgame::discounted

#endif  // RSGAME_DISCOUNTED_SOLVER_HPP_
