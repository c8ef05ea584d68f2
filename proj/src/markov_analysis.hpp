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

#ifndef RSGAME_MARKOV_ANALYSIS_HPP_
#define RSGAME_MARKOV_ANALYSIS_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "game_model.hpp"

namespace rsgame::markov {

// Half the maximal L1 distance between any two transition rows of the game,
// over all (state, u, v) pairs.
double DobrushinDelta(const GameSpec& spec);

struct IrreducibilityVerdict {
  bool irreducible = true;
  bool aperiodic = true;
  bool holds = true;
  // Set when holds == false and a concrete pure profile violates the check.
  std::optional<StationaryProfile> witness;
  // "safety-game", "dobrushin", "enumeration" or "undetermined".
  std::string aperiodicity_method;
  std::string detail;
};

// Irreducibility and aperiodicity of the chain under every pure stationary
// profile. Irreducibility is decided exactly by a reachability game per
// target state. Aperiodicity follows from delta < 1; otherwise pure profiles
// are enumerated when there are at most `enumeration_cap` of them.
IrreducibilityVerdict CheckIrreducibleAperiodic(
    const GameSpec& spec, long long enumeration_cap = 1LL << 18);

struct InvariantMeasure {
  Vector eta;
};

// Unique invariant distribution of an irreducible stochastic matrix.
InvariantMeasure InvariantMeasureOf(const StochasticMatrix& p);

struct ErgodicityMargin {
  int t = 0;
  double tv = 0.0;     // max_k sum_j |P^t[k][j] - eta[j]|
  double bound = 0.0;  // 2 delta^t
  double slack = 0.0;  // bound - tv
};

struct UniformErgodicityReport {
  std::vector<ErgodicityMargin> margins;
  bool pass = true;
};

UniformErgodicityReport UniformErgodicityCheck(const StochasticMatrix& p,
                                               const Vector& eta, double delta,
                                               int t_max);

// E_k[sigma_A] for every state k (first return time, from t >= 1).
Vector ExpectedReturnTime(const StochasticMatrix& p, std::span<const int> a);

// E_k[R^{sigma_A}] for every state k. Throws Error(kNumerical) naming the
// spectral radius of R times the taboo kernel when it is >= 1.
Vector GeometricMoment(const StochasticMatrix& p, double r,
                       std::span<const int> a);

// States from which some pure profile avoids the set `a` forever. Empty iff
// `a` is reached almost surely under every stationary profile.
std::vector<int> AvoidingStates(const GameSpec& spec, std::span<const int> a);

// Worst case over pure stationary profiles of E_k[R^{sigma_A}], solved as a
// maximizing Markov decision problem over joint actions (pure profiles choose
// one joint action per state independently).
struct WorstCaseMoment {
  bool feasible = false;
  // Spectral radius of R * taboo kernel under the last policy examined.
  double spectral_radius = 0.0;
  Vector value;             // per state; valid when feasible
  std::vector<int> policy;  // joint action per state (u * n_v + v)
  std::string detail;
};
WorstCaseMoment WorstCaseGeometricMoment(const GameSpec& spec, double r,
                                         std::span<const int> a);

// max over pure profiles and states of E_k[sigma_A].
double WorstCaseReturnTime(const GameSpec& spec, std::span<const int> a);

struct FeasibleR {
  double r_star = 0.0;  // supremum estimate from bisection
  double r0 = 0.0;      // (1 - safety_margin) * r_star
  double b0 = 0.0;      // max over pure profiles and states of E_k[R0^sigma]
  bool capped = false;  // r_star hit r_max
  int bisection_steps = 0;
};

struct RecurrenceOptions {
  double safety_margin = 0.01;
  double r_max = 1e6;
};

FeasibleR MaxFeasibleR(const GameSpec& spec, int ref_state,
                       const RecurrenceOptions& options = {});

struct LyapunovCertificate {
  Vector v;            // V(k) >= 1
  double eta = 0.0;    // drift factor 1 / R0
  double b = 0.0;      // minimal additive constant on C
  std::vector<int> c;  // small set
  bool holds = false;
  double max_violation = 0.0;
};

// Builds V(k) = max_profiles E_k[R0^{tau_C}] and checks
//   sum_j V(j) q(j|i,a) <= eta V(i) + b 1_C(i)
// for every state and joint action. C defaults to {ref_state}. Throws
// Error(kAssumption) naming the violating state and action on failure.
LyapunovCertificate BuildLyapunovCertificate(const GameSpec& spec, double r0,
                                             std::vector<int> c = {});

struct RecurrenceReport {
  double delta = 1.0;
  IrreducibilityVerdict a1;
  bool a1_holds = false;
  bool a2_holds = false;
  bool a3_holds = false;
  std::optional<FeasibleR> recurrence;
  std::optional<double> l0;
  std::optional<LyapunovCertificate> lyapunov;
  double norm_r1 = 0.0;
  double norm_r2 = 0.0;
  std::optional<double> a3_threshold;  // ln(R0) / (3 theta_max)
  std::vector<std::string> errors;

  bool all_hold() const { return a1_holds && a2_holds && a3_holds; }
};

RecurrenceReport CheckAssumptions(const GameSpec& spec,
                                  const RecurrenceOptions& options = {});

}  // namespace rsgame::markov

#endif  // RSGAME_MARKOV_ANALYSIS_HPP_
