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

#include "game_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "error.hpp"

namespace rsgame {
namespace {

constexpr double kRowSumTol = 1e-12;

void CheckMixedAction(const MixedAction& m, int n, const char* who, int k) {
  if (static_cast<int>(m.size()) != n) {
    std::ostringstream os;
    os << who << " mixed action at state " << k << " has " << m.size()
       << " weights, expected " << n;
    Fail(ErrorCode::kInvalidArgument, os.str());
  }
  double sum = 0.0;
  for (double w : m.weights) {
    if (!std::isfinite(w) || w < 0.0) {
      std::ostringstream os;
      os << who << " mixed action at state " << k << " has invalid weight "
         << w;
      Fail(ErrorCode::kInvalidArgument, os.str());
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kRowSumTol) {
    std::ostringstream os;
    os << who << " mixed action at state " << k << " sums to " << sum;
    Fail(ErrorCode::kInvalidArgument, os.str());
  }
}

}  // namespace

GameSpec GameSpec::Zeros(int n_states, int n_u, int n_v) {
  GameSpec g;
  g.n_states = n_states;
  g.n_actions_u = n_u;
  g.n_actions_v = n_v;
  const std::size_t m = static_cast<std::size_t>(n_states) * n_u * n_v;
  g.r1.assign(m, 0.0);
  g.r2.assign(m, 0.0);
  g.q.assign(m * n_states, 0.0);
  return g;
}

double GameSpec::cost_norm(Player p) const {
  const auto& r = p == Player::kOne ? r1 : r2;
  double m = 0.0;
  for (double x : r) m = std::max(m, std::abs(x));
  return m;
}

double GameSpec::max_cost_norm() const {
  return std::max(cost_norm(Player::kOne), cost_norm(Player::kTwo));
}

ValidationReport Validate(const GameSpec& spec) {
  ValidationReport rep;
  auto issue = [&rep](const std::string& s) {
    rep.ok = false;
    rep.issues.push_back(s);
  };
  if (spec.n_states <= 0) issue("n_states must be positive");
  if (spec.n_actions_u <= 0) issue("n_actions_u must be positive");
  if (spec.n_actions_v <= 0) issue("n_actions_v must be positive");
  if (!rep.ok) return rep;

  const std::size_t m = static_cast<std::size_t>(spec.n_states) *
                        spec.n_actions_u * spec.n_actions_v;
  if (spec.r1.size() != m) issue("r1 has wrong size");
  if (spec.r2.size() != m) issue("r2 has wrong size");
  if (spec.q.size() != m * spec.n_states) issue("q has wrong size");
  if (!rep.ok) return rep;

  for (int k = 0; k < spec.n_states; ++k) {
    for (int u = 0; u < spec.n_actions_u; ++u) {
      for (int v = 0; v < spec.n_actions_v; ++v) {
        std::ostringstream at;
        at << "(" << k << "," << u << "," << v << ")";
        for (Player p : {Player::kOne, Player::kTwo}) {
          if (!std::isfinite(spec.r(p, k, u, v))) {
            issue("r" + std::to_string(PlayerIndex(p) + 1) + at.str() +
                  " is not finite");
          }
        }
        double sum = 0.0;
        bool finite = true;
        auto row = spec.q_row(k, u, v);
        for (int j = 0; j < spec.n_states; ++j) {
          const double p = row[j];
          if (!std::isfinite(p)) {
            finite = false;
            issue("q" + at.str() + "[" + std::to_string(j) +
                  "] is not finite");
          } else if (p < 0.0) {
            std::ostringstream os;
            os << "q" << at.str() << "[" << j << "] = " << p
               << " is negative";
            issue(os.str());
          }
          sum += p;
        }
        if (finite && std::abs(sum - 1.0) > kRowSumTol) {
          std::ostringstream os;
          os.precision(17);
          os << "q" << at.str() << " sums to " << sum;
          issue(os.str());
        }
      }
    }
  }
  if (!std::isfinite(spec.theta) || spec.theta <= 0.0) {
    issue("theta must be positive");
  }
  if (!std::isfinite(spec.theta_max) || spec.theta_max < spec.theta) {
    issue("theta_max must be >= theta");
  }
  if (!std::isfinite(spec.alpha) || spec.alpha < 0.0 || spec.alpha >= 1.0) {
    issue("alpha must lie in [0, 1)");
  }
  if (spec.ref_state < 0 || spec.ref_state >= spec.n_states) {
    issue("ref_state out of range");
  }
  return rep;
}

void ValidateOrThrow(const GameSpec& spec) {
  const ValidationReport rep = Validate(spec);
  if (rep.ok) return;
  std::string msg = "invalid game spec:";
  for (const auto& s : rep.issues) msg += "\n  " + s;
  Fail(ErrorCode::kInvalidSpec, msg);
}

MixedAction MixedAction::Pure(int n, int action) {
  MixedAction m;
  m.weights.assign(n, 0.0);
  m.weights.at(action) = 1.0;
  return m;
}

MixedAction MixedAction::Uniform(int n) {
  MixedAction m;
  m.weights.assign(n, 1.0 / n);
  return m;
}

std::vector<int> MixedAction::Support() const {
  std::vector<int> s;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) s.push_back(static_cast<int>(i));
  }
  return s;
}

StationaryProfile StationaryProfile::Uniform(const GameSpec& spec) {
  StationaryProfile p;
  p.mu.assign(spec.n_states, MixedAction::Uniform(spec.n_actions_u));
  p.nu.assign(spec.n_states, MixedAction::Uniform(spec.n_actions_v));
  return p;
}

StationaryProfile StationaryProfile::Pure(const GameSpec& spec,
                                          std::span<const int> u,
                                          std::span<const int> v) {
  StationaryProfile p;
  for (int k = 0; k < spec.n_states; ++k) {
    p.mu.push_back(MixedAction::Pure(spec.n_actions_u, u[k]));
    p.nu.push_back(MixedAction::Pure(spec.n_actions_v, v[k]));
  }
  return p;
}

void CheckProfile(const GameSpec& spec, const StationaryProfile& profile) {
  if (static_cast<int>(profile.mu.size()) != spec.n_states ||
      static_cast<int>(profile.nu.size()) != spec.n_states) {
    Fail(ErrorCode::kInvalidArgument,
         "profile must carry one mixed action per state for each player");
  }
  for (int k = 0; k < spec.n_states; ++k) {
    CheckMixedAction(profile.mu[k], spec.n_actions_u, "player I", k);
    CheckMixedAction(profile.nu[k], spec.n_actions_v, "player II", k);
  }
}

void CheckProfile(const GameSpec& spec, const MarkovProfile& profile) {
  if (profile.stages.empty()) {
    Fail(ErrorCode::kInvalidArgument, "Markov profile has no stages");
  }
  for (const auto& s : profile.stages) CheckProfile(spec, s);
}

StochasticMatrix InducedKernel(const GameSpec& spec,
                               const StationaryProfile& profile) {
  CheckProfile(spec, profile);
  const int n = spec.n_states;
  StochasticMatrix p = StochasticMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    for (int u = 0; u < spec.n_actions_u; ++u) {
      const double wu = profile.mu[k][u];
      if (wu == 0.0) continue;
      for (int v = 0; v < spec.n_actions_v; ++v) {
        const double w = wu * profile.nu[k][v];
        if (w == 0.0) continue;
        auto row = spec.q_row(k, u, v);
        for (int j = 0; j < n; ++j) p(k, j) += w * row[j];
      }
    }
  }
  return p;
}

Vector ExpectedExpCost(const GameSpec& spec, const StationaryProfile& profile,
                       Player player, double scale) {
  CheckProfile(spec, profile);
  Vector out = Vector::Zero(spec.n_states);
  for (int k = 0; k < spec.n_states; ++k) {
    double s = 0.0;
    for (int u = 0; u < spec.n_actions_u; ++u) {
      for (int v = 0; v < spec.n_actions_v; ++v) {
        const double w = profile.mu[k][u] * profile.nu[k][v];
        if (w != 0.0) s += w * std::exp(scale * spec.r(player, k, u, v));
      }
    }
    out(k) = s;
  }
  return out;
}

Eigen::MatrixXd WeightedKernel(const GameSpec& spec,
                               const StationaryProfile& profile, Player player,
                               double scale, double shift) {
  CheckProfile(spec, profile);
  const int n = spec.n_states;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    for (int u = 0; u < spec.n_actions_u; ++u) {
      for (int v = 0; v < spec.n_actions_v; ++v) {
        const double w = profile.mu[k][u] * profile.nu[k][v];
        if (w == 0.0) continue;
        const double f =
            w * std::exp(scale * (spec.r(player, k, u, v) - shift));
        auto row = spec.q_row(k, u, v);
        for (int j = 0; j < n; ++j) m(k, j) += f * row[j];
      }
    }
  }
  return m;
}

GameSpec ShiftCosts(const GameSpec& spec, Player player, double c) {
  GameSpec out = spec;
  auto& r = player == Player::kOne ? out.r1 : out.r2;
  for (double& x : r) x += c;
  return out;
}

}  // namespace rsgame
