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

#ifndef RSGAME_ERGODIC_SOLVER_HPP_
#define RSGAME_ERGODIC_SOLVER_HPP_

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "game_model.hpp"

namespace rsgame::ergodic {

// E_k[exp(theta sum_{t=0}^{sigma_0 - 1} (r_i - lambda))] for every k, where
// sigma_0 is the first return time to ref_state. Throws Error(kNumerical)
// naming the spectral radius when the taboo system diverges.
Vector FirstPassageExp(const GameSpec& spec, const StationaryProfile& profile,
                       Player player, double lambda);

struct GpeResult {
  double lambda = 0.0;
  Vector g;
  int iterations = 0;
};

// Root of g(ref) = 1 on [-||r_i||, ||r_i||] by bisection.
GpeResult GpeBisection(const GameSpec& spec, const StationaryProfile& profile,
                       Player player, double tol = 1e-10);

struct SpectralLambda {
  double lambda = 0.0;
  double rho = 0.0;
  Vector eigenvector;  // normalized to 1 at ref_state
  int iterations = 0;
};

SpectralLambda SpectralLambdaOf(const GameSpec& spec,
                                const StationaryProfile& profile,
                                Player player);

// h(k) = E_k[exp(theta sum_{t=0}^{tau_0} (r_i - lambda))], tau_0 the hitting
// time of ref_state (zero when starting there).
Vector RelativeValueH(const GameSpec& spec, const StationaryProfile& profile,
                      Player player, double lambda);

struct ValueIterationOptions {
  double tol = 1e-12;  // log-span of successive ratios
  int max_sweeps = 200000;
  double argmin_rel_tol = 1e-9;
};

struct ValueIterationResult {
  double lambda = 0.0;
  Vector h;
  std::vector<std::vector<int>> argmin;  // per state, own actions
  int sweeps = 0;
  double span = 0.0;
};

// Multiplicative value iteration for one player against a fixed stationary
// opponent. h is scaled so that h(ref) equals the averaged one-step factor
// exp(theta (r_i(ref, .) - lambda)) under the lowest minimizing action.
ValueIterationResult RsValueIteration(const GameSpec& spec,
                                      const std::vector<MixedAction>& opponent,
                                      Player player,
                                      const ValueIterationOptions& options = {});

// q(j|k) = sum mu nu exp(theta (r_i - lambda)) f(j) q(j|k,u,v) / f(k).
// Throws Error(kNumerical) when a row sum deviates from 1 by more than 1e-8.
Eigen::MatrixXd TwistedKernel(const GameSpec& spec,
                              const StationaryProfile& profile, Player player,
                              const Vector& f, double lambda);

double MpeResidual(const GameSpec& spec, const StationaryProfile& profile,
                   Player player, const Vector& h, double lambda);

struct BestResponseSet {
  double lambda = 0.0;
  Vector h;
  std::vector<std::vector<int>> argmin;  // any mixture on these is optimal
  std::vector<int> pure;                 // lowest index per state
};

BestResponseSet BestResponseErgodic(const GameSpec& spec,
                                    const std::vector<MixedAction>& opponent,
                                    Player player,
                                    const ValueIterationOptions& options = {});

struct ErgodicVerification {
  double lambda_profile1 = 0.0, lambda_profile2 = 0.0;
  double lambda_star1 = 0.0, lambda_star2 = 0.0;
  double gap1 = 0.0, gap2 = 0.0;
  // Per state: (1/theta) ln of the profile's one-step value over the best
  // pure action's, both against the optimal relative value.
  std::vector<double> state_regret1, state_regret2;
  double tol = 0.0;
  bool pass = false;
};

std::vector<double> StateRegret(const GameSpec& spec,
                                const StationaryProfile& profile, Player player,
                                const Vector& h);

ErgodicVerification VerifyNashErgodic(
    const GameSpec& spec, const StationaryProfile& profile, double tol,
    const ValueIterationOptions& options = {});

struct ErgodicSolution {
  double lambda1 = 0.0, lambda2 = 0.0;
  Vector h1, h2;
  StationaryProfile profile;
  double normalization1 = 0.0, normalization2 = 0.0;  // h_i(ref)
  double mpe_residual1 = 0.0, mpe_residual2 = 0.0;
};

// Values of a profile: lambda_i by GPE bisection, h_i by the hitting system.
ErgodicSolution EvaluateErgodic(const GameSpec& spec,
                                const StationaryProfile& profile);

struct NashSearchConfig {
  double damping = 0.5;
  double hash_resolution = 1e-9;
  // Sweeps of stage-game relative value iteration tried after best response;
  // 0 disables it.
  int stage_sweeps = 20000;
  long long fallback_cap = 10000;  // 0 disables the enumeration fallback
  int max_rounds = 500;
  double verify_tol = 1e-7;
  ValueIterationOptions vi;
};

struct NashSearchOutcome {
  bool found = false;
  std::optional<ErgodicSolution> solution;
  std::optional<ErgodicVerification> verification;
  // "best-response", "stage-game-iteration" or "support-enumeration".
  std::string method;
  int rounds = 0;
  bool cycle_detected = false;
  int stage_sweeps = 0;
  long long candidate_space = 0;
  long long candidates_examined = 0;
  std::string failure_reason;
};

NashSearchOutcome NashSearchErgodic(const GameSpec& spec,
                                    const NashSearchConfig& config = {});

}  // namespace rsgame::ergodic

#endif  // RSGAME_ERGODIC_SOLVER_HPP_
