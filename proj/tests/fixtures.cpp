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

#include "fixtures.hpp"

#include <cmath>

#include "markov_analysis.hpp"

namespace rsgame::testing {

GameSpec RandomGame(std::uint64_t seed, int n, int nu, int nv,
                    double cost_scale, double theta, double alpha,
                    double floor) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  GameSpec s = GameSpec::Zeros(n, nu, nv);
  for (double& x : s.r1) x = cost_scale * (2.0 * unit(rng) - 1.0);
  for (double& x : s.r2) x = cost_scale * (2.0 * unit(rng) - 1.0);
  for (int k = 0; k < n; ++k) {
    for (int u = 0; u < nu; ++u) {
      for (int v = 0; v < nv; ++v) {
        auto row = s.q_row_mut(k, u, v);
        double sum = 0.0;
        for (double& x : row) sum += (x = unit(rng));
        for (double& x : row) x = (1.0 - floor) * x / sum + floor / n;
        // Exact row sums keep validation tolerances meaningful.
        double total = 0.0;
        for (int j = 0; j + 1 < n; ++j) total += row[j];
        row[n - 1] = 1.0 - total;
      }
    }
  }
  s.theta = theta;
  s.theta_max = theta;
  s.alpha = alpha;
  return s;
}

GameSpec SmallCostGame(std::uint64_t seed, int n, int nu, int nv,
                       double theta) {
  GameSpec s = RandomGame(seed, n, nu, nv, 1.0, theta, 0.8, 0.2);
  const markov::FeasibleR f = markov::MaxFeasibleR(s, s.ref_state);
  const double threshold = std::log(f.r0) / (3.0 * s.theta_max);
  const double norm = s.max_cost_norm();
  for (double& x : s.r1) x *= 0.9 * threshold / norm;
  for (double& x : s.r2) x *= 0.9 * threshold / norm;
  return s;
}

GameSpec ConstantCostGame(int n, int nu, int nv, double c1, double c2,
                          double theta, double alpha, std::uint64_t seed) {
  GameSpec s = RandomGame(seed, n, nu, nv, 1.0, theta, alpha);
  for (double& x : s.r1) x = c1;
  for (double& x : s.r2) x = c2;
  return s;
}

GameSpec TwoStateChain(double p, double q, double theta) {
  GameSpec s = GameSpec::Zeros(2, 1, 1);
  s.q_row_mut(0, 0, 0)[0] = 1.0 - p;
  s.q_row_mut(0, 0, 0)[1] = p;
  s.q_row_mut(1, 0, 0)[0] = q;
  s.q_row_mut(1, 0, 0)[1] = 1.0 - q;
  s.theta = theta;
  s.theta_max = theta;
  s.alpha = 0.5;
  return s;
}

MixedAction RandomMixed(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  MixedAction m;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    m.weights.push_back(unit(rng) + 1e-3);
    sum += m.weights.back();
  }
  for (double& w : m.weights) w /= sum;
  return m;
}

StationaryProfile RandomProfile(const GameSpec& spec, std::mt19937_64& rng) {
  StationaryProfile p;
  for (int k = 0; k < spec.n_states; ++k) {
    p.mu.push_back(RandomMixed(spec.n_actions_u, rng));
    p.nu.push_back(RandomMixed(spec.n_actions_v, rng));
  }
  return p;
}

MarkovProfile RandomMarkovProfile(const GameSpec& spec, int horizon,
                                  std::mt19937_64& rng) {
  MarkovProfile m;
  for (int t = 0; t < horizon; ++t) m.stages.push_back(RandomProfile(spec, rng));
  return m;
}

std::vector<std::vector<int>> AllAssignments(int n_states, int n_actions) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(n_states, 0);
  while (true) {
    out.push_back(cur);
    int k = n_states - 1;
    while (k >= 0 && ++cur[k] == n_actions) cur[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

}  // namespace rsgame::testing
