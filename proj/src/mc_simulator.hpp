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

#ifndef RSGAME_MC_SIMULATOR_HPP_
#define RSGAME_MC_SIMULATOR_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "game_model.hpp"

namespace rsgame::mc {

// Path p of a run with seed s draws from std::mt19937_64 seeded with
// SplitMix64(s ^ SplitMix64(p)), so results do not depend on how paths are
// spread across threads.
std::uint64_t SplitMix64(std::uint64_t x);
std::mt19937_64 PathEngine(std::uint64_t seed, std::uint64_t path);

// Uniform double in [0, 1) from the top 53 bits.
double Uniform01(std::mt19937_64& eng);

struct Trajectory {
  std::vector<int> states;  // T + 1 entries
  std::vector<int> u, v;    // T entries
  std::vector<double> cost1, cost2;
};

Trajectory Simulate(const GameSpec& spec, const StationaryProfile& profile,
                    int horizon, std::uint64_t seed, int start_state = -1);
// Stage t uses profile.stages[t]; horizon must not exceed the profile's.
Trajectory Simulate(const GameSpec& spec, const MarkovProfile& profile,
                    int horizon, std::uint64_t seed, int start_state = -1);

struct EstimatorReport {
  std::string estimator_kind;  // discounted | ergodic-batch | return-time-moment
  double point = 0.0;
  double stderr_ = 0.0;
  long long n_paths = 0;
  std::uint64_t seed = 0;
  int horizon = 0;
  double effective_sample_size = 0.0;
  // Return-time sampling: mean of sigma and its standard error.
  double mean_sigma = 0.0;
  double mean_sigma_stderr = 0.0;
  long long n_censored = 0;
  bool flagged = false;
  std::vector<double> samples;  // per path or batch accumulated cost / sigma
  std::vector<std::string> notes;
};

struct McOptions {
  int threads = 0;         // 0: RSGAME_THREADS or hardware concurrency
  int start_state = -1;    // -1: ref_state
  long long censor_cap = 1000000;
};

// Worker count used for a request of `threads` (0 means default).
int ResolveThreads(int threads);

EstimatorReport EstimateDiscountedCost(const GameSpec& spec,
                                       const MarkovProfile& profile,
                                       Player player, int horizon,
                                       long long n_paths, std::uint64_t seed,
                                       const McOptions& options = {});
// A stationary profile repeated for every stage.
EstimatorReport EstimateDiscountedCost(const GameSpec& spec,
                                       const StationaryProfile& profile,
                                       Player player, int horizon,
                                       long long n_paths, std::uint64_t seed,
                                       const McOptions& options = {});

EstimatorReport EstimateErgodicCost(const GameSpec& spec,
                                    const StationaryProfile& profile,
                                    Player player, int horizon,
                                    long long n_batches, std::uint64_t seed,
                                    const McOptions& options = {});

// point estimates E[R^sigma] from target_state; mean_sigma estimates E[sigma].
// Censored paths are excluded from both means and counted.
EstimatorReport SampleReturnTime(const GameSpec& spec,
                                 const StationaryProfile& profile,
                                 int target_state, long long n_paths, double r,
                                 std::uint64_t seed,
                                 const McOptions& options = {});

}  // namespace rsgame::mc

#endif  // RSGAME_MC_SIMULATOR_HPP_
