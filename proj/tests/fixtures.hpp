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

#ifndef RSGAME_TESTS_FIXTURES_HPP_
#define RSGAME_TESTS_FIXTURES_HPP_

#include <cstdint>
#include <random>
#include <vector>

#include "game_model.hpp"

namespace rsgame::testing {

// Random game: costs uniform in [-cost_scale, cost_scale], transition rows
// drawn uniformly then mixed with `floor` mass spread evenly, so every
// entry is at least floor / n.
GameSpec RandomGame(std::uint64_t seed, int n, int nu, int nv,
                    double cost_scale = 1.0, double theta = 0.5,
                    double alpha = 0.8, double floor = 0.1);

// Random game with costs rescaled to 0.9 of the small-cost threshold, so
// all three assumptions hold.
GameSpec SmallCostGame(std::uint64_t seed, int n, int nu, int nv,
                       double theta = 0.5);

GameSpec ConstantCostGame(int n, int nu, int nv, double c1, double c2,
                          double theta = 0.5, double alpha = 0.8,
                          std::uint64_t seed = 7);

// One action each; P(0 -> 1) = p, P(1 -> 0) = q.
GameSpec TwoStateChain(double p, double q, double theta = 0.5);

MixedAction RandomMixed(int n, std::mt19937_64& rng);
StationaryProfile RandomProfile(const GameSpec& spec, std::mt19937_64& rng);
MarkovProfile RandomMarkovProfile(const GameSpec& spec, int horizon,
                                  std::mt19937_64& rng);

// All pure per-state action assignments for `n_states` states.
std::vector<std::vector<int>> AllAssignments(int n_states, int n_actions);

}  // namespace rsgame::testing

#endif  // RSGAME_TESTS_FIXTURES_HPP_
