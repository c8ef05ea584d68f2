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

#ifndef RSGAME_GAME_MODEL_HPP_
#define RSGAME_GAME_MODEL_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rsgame {

enum class Player { kOne = 0, kTwo = 1 };

inline int PlayerIndex(Player p) { return p == Player::kOne ? 0 : 1; }
inline Player Opponent(Player p) {
  return p == Player::kOne ? Player::kTwo : Player::kOne;
}

using StochasticMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// A two-player stochastic game on a finite state space with finite action
// sets. Tensors are stored densely in row-major index order:
//   r1, r2 : [state][u][v]
//   q      : [state][u][v][next_state]
struct GameSpec {
  int n_states = 0;
  int n_actions_u = 0;
  int n_actions_v = 0;
  std::vector<double> r1;
  std::vector<double> r2;
  std::vector<double> q;
  double theta = 1.0;
  double theta_max = 1.0;
  double alpha = 0.0;
  int ref_state = 0;

  // Allocates zero tensors of the right shape.
  static GameSpec Zeros(int n_states, int n_u, int n_v);

  int n_joint() const { return n_actions_u * n_actions_v; }

  std::size_t cost_index(int k, int u, int v) const {
    return (static_cast<std::size_t>(k) * n_actions_u + u) * n_actions_v + v;
  }
  double r(Player p, int k, int u, int v) const {
    return p == Player::kOne ? r1[cost_index(k, u, v)]
                             : r2[cost_index(k, u, v)];
  }
  double& r_mut(Player p, int k, int u, int v) {
    return p == Player::kOne ? r1[cost_index(k, u, v)]
                             : r2[cost_index(k, u, v)];
  }

  std::span<const double> q_row(int k, int u, int v) const {
    return {q.data() + cost_index(k, u, v) * n_states,
            static_cast<std::size_t>(n_states)};
  }
  std::span<double> q_row_mut(int k, int u, int v) {
    return {q.data() + cost_index(k, u, v) * n_states,
            static_cast<std::size_t>(n_states)};
  }

  // Row for a joint action index a = u * n_actions_v + v.
  std::span<const double> q_row(int k, int a) const {
    return q_row(k, a / n_actions_v, a % n_actions_v);
  }

  // ||r_i||_inf.
  double cost_norm(Player p) const;
  double max_cost_norm() const;
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> issues;
};

// Reports every violated invariant of the game data.
ValidationReport Validate(const GameSpec& spec);

// Throws Error(kInvalidSpec) listing the issues when validation fails.
void ValidateOrThrow(const GameSpec& spec);

struct MixedAction {
  std::vector<double> weights;

  static MixedAction Pure(int n, int action);
  static MixedAction Uniform(int n);
  std::size_t size() const { return weights.size(); }
  double operator[](std::size_t i) const { return weights[i]; }
  // Indices with positive weight.
  std::vector<int> Support() const;
};

struct StationaryProfile {
  std::vector<MixedAction> mu;  // player I, one per state
  std::vector<MixedAction> nu;  // player II, one per state

  static StationaryProfile Uniform(const GameSpec& spec);
  // Pure profile from per-state action indices.
  static StationaryProfile Pure(const GameSpec& spec, std::span<const int> u,
                                std::span<const int> v);
  const std::vector<MixedAction>& of(Player p) const {
    return p == Player::kOne ? mu : nu;
  }
  std::vector<MixedAction>& of(Player p) {
    return p == Player::kOne ? mu : nu;
  }
};

// Time-indexed profile for stages t = 0..T-1. Beyond the horizon the
// continuation value is 1 in exponential scale.
struct MarkovProfile {
  std::vector<StationaryProfile> stages;
  int horizon() const { return static_cast<int>(stages.size()); }
};

// Throws Error(kInvalidArgument) when the profile shape does not match or a
// mixed action is not a probability vector.
void CheckProfile(const GameSpec& spec, const StationaryProfile& profile);
void CheckProfile(const GameSpec& spec, const MarkovProfile& profile);

// P[k][j] = sum_{u,v} mu(k)(u) nu(k)(v) q(j|k,u,v).
StochasticMatrix InducedKernel(const GameSpec& spec,
                               const StationaryProfile& profile);

// Per-state sum_{u,v} mu nu exp(scale * r_i(k,u,v)).
Vector ExpectedExpCost(const GameSpec& spec, const StationaryProfile& profile,
                       Player player, double scale);

// Per-state weighted kernel W[k][j] = sum_{u,v} mu nu exp(scale*(r_i - shift))
// q(j|k,u,v). The building block for the multiplicative equations.
Eigen::MatrixXd WeightedKernel(const GameSpec& spec,
                               const StationaryProfile& profile, Player player,
                               double scale, double shift = 0.0);

// A copy of the game with player's costs shifted by c.
GameSpec ShiftCosts(const GameSpec& spec, Player player, double c);

}  // namespace rsgame

#endif  // RSGAME_GAME_MODEL_HPP_
