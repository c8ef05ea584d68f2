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

#include "discounted_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "error.hpp"

namespace rsgame::discounted {
namespace {

constexpr double kArgminRelTol = 1e-9;

// sum_j f(j) q(j|k,u,v)
double Continuation(const GameSpec& spec, const Vector& f, int k, int u,
                    int v) {
  auto row = spec.q_row(k, u, v);
  double s = 0.0;
  for (int j = 0; j < spec.n_states; ++j) s += row[j] * f(j);
  return s;
}

std::vector<Vector> Psi(const std::vector<Vector>& phi,
                        const std::vector<double>& theta_t) {
  std::vector<Vector> psi(phi.size());
  for (std::size_t t = 0; t < phi.size(); ++t) {
    psi[t] = phi[t].array().log() / theta_t[t];
  }
  return psi;
}

double ThetaAt(const GameSpec& spec, int t) {
  return spec.theta * std::pow(spec.alpha, t);
}

}  // namespace

BellmanValue ExpBellmanApply(const GameSpec& spec, double scale,
                             const Vector& continuation,
                             const MixedAction& opponent, int k,
                             Player player) {
  if (!(scale > 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "risk scale must be positive");
  }
  if (continuation.size() != spec.n_states) {
    Fail(ErrorCode::kInvalidArgument, "continuation has wrong length");
  }
  for (int j = 0; j < spec.n_states; ++j) {
    if (!(continuation(j) > 0.0)) {
      std::ostringstream os;
      os << "continuation entry " << j << " is not positive";
      Fail(ErrorCode::kInvalidArgument, os.str());
    }
  }
  const int n_own =
      player == Player::kOne ? spec.n_actions_u : spec.n_actions_v;
  const int n_opp =
      player == Player::kOne ? spec.n_actions_v : spec.n_actions_u;
  if (static_cast<int>(opponent.size()) != n_opp) {
    Fail(ErrorCode::kInvalidArgument, "opponent mixed action has wrong size");
  }
  BellmanValue out;
  out.action_values.assign(n_own, 0.0);
  for (int own = 0; own < n_own; ++own) {
    double s = 0.0;
    for (int opp = 0; opp < n_opp; ++opp) {
      const double w = opponent[opp];
      if (w == 0.0) continue;
      const int u = player == Player::kOne ? own : opp;
      const int v = player == Player::kOne ? opp : own;
      s += w * std::exp(scale * spec.r(player, k, u, v)) *
           Continuation(spec, continuation, k, u, v);
    }
    out.action_values[own] = s;
  }
  out.value = *std::min_element(out.action_values.begin(),
                                out.action_values.end());
  for (int own = 0; own < n_own; ++own) {
    if (out.action_values[own] <= out.value * (1.0 + kArgminRelTol)) {
      out.argmin.push_back(own);
    }
  }
  return out;
}

StageGame BuildStageGame(const GameSpec& spec, int k, double theta_t,
                         const Vector& phi1_next, const Vector& phi2_next) {
  if (phi1_next.size() != spec.n_states || phi2_next.size() != spec.n_states) {
    Fail(ErrorCode::kInvalidArgument, "continuation has wrong length");
  }
  StageGame g;
  g.a.resize(spec.n_actions_u, spec.n_actions_v);
  g.b.resize(spec.n_actions_u, spec.n_actions_v);
  for (int u = 0; u < spec.n_actions_u; ++u) {
    for (int v = 0; v < spec.n_actions_v; ++v) {
      g.a(u, v) = std::exp(theta_t * spec.r(Player::kOne, k, u, v)) *
                  Continuation(spec, phi1_next, k, u, v);
      g.b(u, v) = std::exp(theta_t * spec.r(Player::kTwo, k, u, v)) *
                  Continuation(spec, phi2_next, k, u, v);
    }
  }
  return g;
}

double TailBound(double theta, double alpha, double norm, int horizon) {
  return std::expm1(theta * std::pow(alpha, horizon) * norm / (1.0 - alpha));
}

int HorizonForTolerance(double theta, double alpha, double norm, double eps) {
  if (!(eps > 0.0)) Fail(ErrorCode::kInvalidArgument, "eps must be positive");
  if (norm == 0.0 || alpha == 0.0) return 1;
  const double x = std::log1p(eps) * (1.0 - alpha) / (theta * norm);
  int t = 1;
  if (x < 1.0) {
    t = std::max(1, static_cast<int>(std::ceil(std::log(x) / std::log(alpha))));
  }
  while (TailBound(theta, alpha, norm, t) > eps) ++t;
  while (t > 1 && TailBound(theta, alpha, norm, t - 1) <= eps) --t;
  return t;
}

DiscountedSolution SolveDiscounted(const GameSpec& spec,
                                   const DiscountedOptions& options) {
  ValidateOrThrow(spec);
  const double norm = spec.max_cost_norm();
  const int horizon =
      options.horizon > 0
          ? options.horizon
          : HorizonForTolerance(spec.theta, spec.alpha, norm, options.eps);

  DiscountedSolution sol;
  ExpValueTable& tab = sol.values;
  tab.horizon = horizon;
  tab.tail_bound = TailBound(spec.theta, spec.alpha, norm, horizon);
  tab.theta_t.resize(horizon + 1);
  for (int t = 0; t <= horizon; ++t) tab.theta_t[t] = ThetaAt(spec, t);
  tab.phi1.assign(horizon + 1, Vector::Ones(spec.n_states));
  tab.phi2.assign(horizon + 1, Vector::Ones(spec.n_states));
  sol.profile.stages.resize(horizon);

  for (int t = horizon - 1; t >= 0; --t) {
    StationaryProfile& stage = sol.profile.stages[t];
    stage.mu.resize(spec.n_states);
    stage.nu.resize(spec.n_states);
    for (int k = 0; k < spec.n_states; ++k) {
      const StageGame g = BuildStageGame(spec, k, tab.theta_t[t],
                                         tab.phi1[t + 1], tab.phi2[t + 1]);
      const BimatrixResult res = SolveBimatrix(g.a, g.b, options.bimatrix);
      sol.skipped_supports += res.skipped_supports;
      if (res.equilibria.size() > 1) ++sol.stages_with_multiple_equilibria;
      const BimatrixEquilibrium& eq = res.selected();
      stage.mu[k] = eq.row;
      stage.nu[k] = eq.col;
      tab.phi1[t](k) = eq.row_value;
      tab.phi2[t](k) = eq.col_value;
    }
  }
  tab.psi1 = Psi(tab.phi1, tab.theta_t);
  tab.psi2 = Psi(tab.phi2, tab.theta_t);
  return sol;
}

std::vector<Vector> EvaluateExpCostStages(const GameSpec& spec,
                                          const MarkovProfile& profile,
                                          Player player) {
  CheckProfile(spec, profile);
  const int horizon = profile.horizon();
  std::vector<Vector> zeta(horizon + 1, Vector::Ones(spec.n_states));
  for (int t = horizon - 1; t >= 0; --t) {
    const StationaryProfile& s = profile.stages[t];
    const double theta_t = ThetaAt(spec, t);
    for (int k = 0; k < spec.n_states; ++k) {
      double z = 0.0;
      for (int u = 0; u < spec.n_actions_u; ++u) {
        for (int v = 0; v < spec.n_actions_v; ++v) {
          const double w = s.mu[k][u] * s.nu[k][v];
          if (w == 0.0) continue;
          z += w * std::exp(theta_t * spec.r(player, k, u, v)) *
               Continuation(spec, zeta[t + 1], k, u, v);
        }
      }
      zeta[t](k) = z;
    }
  }
  return zeta;
}

Vector EvaluateExpCost(const GameSpec& spec, const MarkovProfile& profile,
                       Player player) {
  return EvaluateExpCostStages(spec, profile, player).front();
}

Vector EvaluateRiskNeutral(const GameSpec& spec, const MarkovProfile& profile,
                           Player player) {
  CheckProfile(spec, profile);
  Vector next = Vector::Zero(spec.n_states);
  for (int t = profile.horizon() - 1; t >= 0; --t) {
    const StationaryProfile& s = profile.stages[t];
    const double disc = std::pow(spec.alpha, t);
    Vector cur(spec.n_states);
    for (int k = 0; k < spec.n_states; ++k) {
      double z = 0.0;
      for (int u = 0; u < spec.n_actions_u; ++u) {
        for (int v = 0; v < spec.n_actions_v; ++v) {
          const double w = s.mu[k][u] * s.nu[k][v];
          if (w == 0.0) continue;
          z += w * (disc * spec.r(player, k, u, v) +
                    Continuation(spec, next, k, u, v));
        }
      }
      cur(k) = z;
    }
    next = cur;
  }
  return next;
}

BestResponse BestResponseValueDiscounted(const GameSpec& spec,
                                         const MarkovProfile& profile,
                                         Player player) {
  CheckProfile(spec, profile);
  const int horizon = profile.horizon();
  BestResponse br;
  br.value.assign(horizon + 1, Vector::Ones(spec.n_states));
  br.action.assign(horizon, std::vector<int>(spec.n_states, 0));
  br.argmin.assign(horizon, std::vector<std::vector<int>>(spec.n_states));
  for (int t = horizon - 1; t >= 0; --t) {
    const auto& opp = profile.stages[t].of(Opponent(player));
    for (int k = 0; k < spec.n_states; ++k) {
      const BellmanValue bv = ExpBellmanApply(spec, ThetaAt(spec, t),
                                              br.value[t + 1], opp[k], k,
                                              player);
      br.value[t](k) = bv.value;
      br.action[t][k] = bv.argmin.front();
      br.argmin[t][k] = bv.argmin;
    }
  }
  return br;
}

DiscountedVerification VerifyNashDiscounted(const GameSpec& spec,
                                            const MarkovProfile& profile,
                                            double tol, double tail_bound) {
  DiscountedVerification out;
  out.tol = tol;
  double zmax = 0.0;
  for (Player p : {Player::kOne, Player::kTwo}) {
    const Vector z = EvaluateExpCost(spec, profile, p);
    const Vector zs = BestResponseValueDiscounted(spec, profile, p).value[0];
    PlayerGap& g = p == Player::kOne ? out.player1 : out.player2;
    g.gap_exp = z - zs;
    g.gap_psi = (z.array().log() - zs.array().log()) / spec.theta;
    g.max_gap = g.gap_exp.maxCoeff();
    zmax = std::max(zmax, z.maxCoeff());
  }
  out.tail_slack = tail_bound * zmax;
  const double limit = tol + 2.0 * out.tail_slack;
  out.pass = out.player1.max_gap <= limit && out.player2.max_gap <= limit;
  return out;
}

}  // namespace rsgame::discounted
