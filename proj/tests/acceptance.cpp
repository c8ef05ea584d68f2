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

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "bimatrix.hpp"
#include "discounted_solver.hpp"
#include "ergodic_solver.hpp"
#include "error.hpp"
#include "fixtures.hpp"
#include "markov_analysis.hpp"
#include "mc_simulator.hpp"
#include "oracles.hpp"

namespace {

using namespace rsgame;
using testing::RandomGame;
using testing::SmallCostGame;

// Tolerances fixed by the acceptance contract.
constexpr double kLambdaBoundTol = 1e-10;
constexpr double kOracleTol = 1e-8;
constexpr double kTwistRowTol = 1e-10;
constexpr double kMpeGate = 1e-8;
constexpr double kEnumTol = 1e-9;
constexpr double kDiscountedGapTol = 1e-8;
constexpr double kErgodicVerifyTol = 1e-7;
constexpr double kReductionTol = 1e-9;
constexpr double kSigmas = 3.0;
constexpr double kShiftTol = 1e-8;
constexpr double kRatioLo = 5.0, kRatioHi = 20.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

std::string Fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// Seeded suite shared by criteria 1 and 2.
std::vector<GameSpec> LambdaSuite() {
  std::vector<GameSpec> out;
  for (int i = 0; i < 50; ++i) {
    const int n = 2 + i % 9;
    const int nu = 2 + i % 2, nv = 2 + (i / 2) % 2;
    out.push_back(RandomGame(10000 + i, n, nu, nv, 0.5 + (i % 5) * 0.5,
                             0.25 + (i % 4) * 0.25));
  }
  return out;
}

Outcome LambdaBound() {
  Outcome o;
  double worst = -std::numeric_limits<double>::infinity();
  int checks = 0;
  std::mt19937_64 rng(1);
  for (const GameSpec& s : LambdaSuite()) {
    for (int p = 0; p < 20; ++p) {
      const StationaryProfile prof = testing::RandomProfile(s, rng);
      for (Player pl : {Player::kOne, Player::kTwo}) {
        const double lam = ergodic::GpeBisection(s, prof, pl).lambda;
        worst = std::max(worst, std::abs(lam) - s.cost_norm(pl));
        ++checks;
      }
    }
  }
  o.pass = worst <= kLambdaBoundTol;
  o.detail = Fmt("%.0f evaluations, max |lambda| - ||r|| = %.3g", checks, worst);
  return o;
}

Outcome DualOracle() {
  Outcome o;
  double worst = 0.0;
  int checks = 0;
  std::mt19937_64 rng(1);
  for (const GameSpec& s : LambdaSuite()) {
    for (int p = 0; p < 20; ++p) {
      const StationaryProfile prof = testing::RandomProfile(s, rng);
      for (Player pl : {Player::kOne, Player::kTwo}) {
        const double a = ergodic::GpeBisection(s, prof, pl).lambda;
        const double b = ergodic::SpectralLambdaOf(s, prof, pl).lambda;
        worst = std::max(worst, std::abs(a - b));
        ++checks;
      }
    }
  }
  o.pass = worst <= kOracleTol;
  o.detail = Fmt("%.0f evaluations, max |gpe - spectral| = %.3g", checks, worst);
  return o;
}

// Fixtures scaled to satisfy the recurrence assumptions.
std::vector<GameSpec> RecurrentFixtures(int count, std::uint64_t base) {
  std::vector<GameSpec> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(SmallCostGame(base + i, 2 + i % 5, 2 + i % 2,
                                2 + (i / 2) % 2, 0.5 + 0.5 * (i % 3)));
  }
  return out;
}

Outcome HBounds() {
  Outcome o;
  int fixtures = 0, checks = 0;
  double worst_ratio = 0.0;  // max over checks of log(h) / log(R0 B0) in abs
  std::mt19937_64 rng(3);
  for (const GameSpec& s : RecurrentFixtures(30, 20000)) {
    const markov::RecurrenceReport rep = markov::CheckAssumptions(s);
    if (!rep.all_hold()) continue;
    ++fixtures;
    const double bound = rep.recurrence->r0 * rep.recurrence->b0;
    std::vector<StationaryProfile> profiles;
    for (int p = 0; p < 10; ++p) profiles.push_back(testing::RandomProfile(s, rng));
    const ergodic::NashSearchOutcome eq = ergodic::NashSearchErgodic(s);
    if (eq.found) profiles.push_back(eq.solution->profile);
    for (const StationaryProfile& prof : profiles) {
      for (Player pl : {Player::kOne, Player::kTwo}) {
        const double lam = ergodic::GpeBisection(s, prof, pl).lambda;
        const Vector h = ergodic::RelativeValueH(s, prof, pl, lam);
        ++checks;
        const double r = std::max(std::abs(std::log(h.maxCoeff())),
                                  std::abs(std::log(h.minCoeff()))) /
                         std::log(bound);
        worst_ratio = std::max(worst_ratio, r);
        if (h.maxCoeff() > bound || h.minCoeff() < 1.0 / bound) o.pass = false;
      }
    }
  }
  if (fixtures == 0) o.pass = false;
  o.detail = Fmt("%.0f fixtures, %.0f checks, max |ln h| / ln(R0 B0) = %.3g",
                 fixtures, checks, worst_ratio);
  return o;
}

Outcome TwistedKernel() {
  Outcome o;
  int gated = 0, total = 0;
  double worst = 0.0;
  auto probe = [&](const GameSpec& s, const StationaryProfile& prof, Player pl,
                   const Vector& f, double lam) {
    ++total;
    if (ergodic::MpeResidual(s, prof, pl, f, lam) > kMpeGate) return;
    ++gated;
    const Eigen::MatrixXd t = ergodic::TwistedKernel(s, prof, pl, f, lam);
    for (int k = 0; k < s.n_states; ++k) {
      worst = std::max(worst, std::abs(t.row(k).sum() - 1.0));
    }
  };
  std::mt19937_64 rng(4);
  for (const GameSpec& s : RecurrentFixtures(20, 30000)) {
    for (int p = 0; p < 5; ++p) {
      const StationaryProfile prof = testing::RandomProfile(s, rng);
      for (Player pl : {Player::kOne, Player::kTwo}) {
        // (h*, lambda*) from value iteration under the selected best response.
        const ergodic::ValueIterationResult vi =
            ergodic::RsValueIteration(s, prof.of(Opponent(pl)), pl);
        StationaryProfile br = prof;
        const int n_own = pl == Player::kOne ? s.n_actions_u : s.n_actions_v;
        for (int k = 0; k < s.n_states; ++k) {
          br.of(pl)[k] = MixedAction::Pure(n_own, vi.argmin[k].front());
        }
        probe(s, br, pl, vi.h, vi.lambda);
        // (h, lambda) from the first-passage pipeline at the profile itself.
        const double lam = ergodic::GpeBisection(s, prof, pl).lambda;
        probe(s, prof, pl, ergodic::RelativeValueH(s, prof, pl, lam), lam);
      }
    }
  }
  o.pass = gated > 0 && worst <= kTwistRowTol;
  o.detail = Fmt("%.0f of %.0f solver pairs under the residual gate, max row "
                 "deviation = %.3g",
                 gated, total, worst);
  return o;
}

Outcome DiscountedBruteForce() {
  Outcome o;
  double worst_value = 0.0, worst_gap = -1.0, worst_br = 0.0;
  int games = 0;
  for (int i = 0; i < 12; ++i) {
    const int n = 2 + i % 2;
    const int horizon = n == 2 ? 8 : 6;
    const GameSpec s = RandomGame(40000 + i, n, 2, 1 + (i / 2) % 2 + (i % 3 == 0),
                                  1.0, 0.5 + 0.25 * (i % 3));
    discounted::DiscountedOptions opt;
    opt.horizon = horizon;
    const discounted::DiscountedSolution sol = discounted::SolveDiscounted(s, opt);
    ++games;
    for (Player pl : {Player::kOne, Player::kTwo}) {
      for (int k = 0; k < n; ++k) {
        const double exact =
            oracle::PathEnumerationExpCost(s, sol.profile, pl, k);
        worst_value = std::max(worst_value,
                               std::abs(exact - sol.values.phi(pl)[0](k)));
      }
    }
    // The truncated game's own equilibrium: pure Markov deviations only.
    if (horizon <= 8 && n == 2) {
      MarkovProfile shortp;
      shortp.stages.assign(sol.profile.stages.end() - 3, sol.profile.stages.end());
      GameSpec late = s;
      late.theta = s.theta * std::pow(s.alpha, horizon - 3);
      for (Player pl : {Player::kOne, Player::kTwo}) {
        const Vector br =
            discounted::BestResponseValueDiscounted(late, shortp, pl).value[0];
        for (int k = 0; k < n; ++k) {
          const double ex =
              oracle::ExhaustivePureMarkovBestResponse(late, shortp, pl, k);
          worst_br = std::max(worst_br, std::abs(ex - br(k)));
        }
      }
    }
    const discounted::DiscountedVerification ver =
        discounted::VerifyNashDiscounted(s, sol.profile, kDiscountedGapTol,
                                         sol.values.tail_bound);
    const double limit = kDiscountedGapTol + ver.tail_slack;
    worst_gap = std::max(worst_gap, std::max(ver.player1.max_gap,
                                             ver.player2.max_gap) - limit);
  }
  o.pass = worst_value <= kEnumTol && worst_br <= kEnumTol && worst_gap <= 0.0;
  o.detail = Fmt("max |phi - enumeration| = %.3g, max |BR - exhaustive| = %.3g, "
                 "max gap - (tol + slack) = %.3g",
                 worst_value, worst_br, worst_gap);
  o.detail += " over " + std::to_string(games) + " games";
  return o;
}

Outcome ErgodicNash() {
  Outcome o;
  int found = 0, passed = 0;
  double worst_gap = 0.0;
  std::string failures;
  const std::vector<GameSpec> fixtures = RecurrentFixtures(20, 50000);
  for (std::size_t i = 0; i < fixtures.size(); ++i) {
    const ergodic::NashSearchOutcome out = ergodic::NashSearchErgodic(fixtures[i]);
    if (!out.found) {
      failures += " #" + std::to_string(i) + ":" + out.failure_reason;
      continue;
    }
    ++found;
    const ergodic::ErgodicVerification v = ergodic::VerifyNashErgodic(
        fixtures[i], out.solution->profile, kErgodicVerifyTol);
    worst_gap = std::max({worst_gap, v.gap1, v.gap2});
    if (v.pass) ++passed;
  }
  double worst_red = 0.0;
  int single = 0;
  for (int i = 0; i < 8; ++i) {
    const GameSpec s = RandomGame(51000 + i, 1, 2 + i % 2, 2 + (i / 2) % 2);
    const ergodic::NashSearchOutcome out = ergodic::NashSearchErgodic(s);
    if (!out.found) {
      worst_red = std::numeric_limits<double>::infinity();
      continue;
    }
    Eigen::MatrixXd a(s.n_actions_u, s.n_actions_v), b(s.n_actions_u, s.n_actions_v);
    for (int u = 0; u < s.n_actions_u; ++u) {
      for (int v = 0; v < s.n_actions_v; ++v) {
        a(u, v) = std::exp(s.theta * s.r(Player::kOne, 0, u, v));
        b(u, v) = std::exp(s.theta * s.r(Player::kTwo, 0, u, v));
      }
    }
    double best = std::numeric_limits<double>::infinity();
    for (const BimatrixEquilibrium& e : SolveBimatrix(a, b).equilibria) {
      double d = 0.0;
      for (int u = 0; u < s.n_actions_u; ++u) {
        d = std::max(d, std::abs(e.row[u] - out.solution->profile.mu[0][u]));
      }
      for (int v = 0; v < s.n_actions_v; ++v) {
        d = std::max(d, std::abs(e.col[v] - out.solution->profile.nu[0][v]));
      }
      best = std::min(best, d);
    }
    worst_red = std::max(worst_red, best);
    ++single;
  }
  o.pass = passed == static_cast<int>(fixtures.size()) && worst_red <= kReductionTol;
  o.detail = Fmt("%.0f/20 found, %.0f/20 verified, max gap = %.3g", found,
                 passed, worst_gap);
  o.detail += Fmt("; %.0f single-state fixtures, max distance to a bimatrix "
                  "equilibrium = %.3g",
                  single, worst_red);
  if (!failures.empty()) o.detail += "; failures:" + failures;
  return o;
}

Outcome UniformErgodicity() {
  Outcome o;
  int fixtures = 0;
  double worst = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(7);
  for (int i = 0; i < 40; ++i) {
    const GameSpec s = RandomGame(60000 + i, 2 + i % 9, 2 + i % 2, 2);
    const double delta = markov::DobrushinDelta(s);
    if (!(delta < 1.0)) continue;
    ++fixtures;
    for (int p = 0; p < 5; ++p) {
      const StochasticMatrix k = InducedKernel(s, testing::RandomProfile(s, rng));
      const auto rep = markov::UniformErgodicityCheck(
          k, markov::InvariantMeasureOf(k).eta, delta, 20);
      for (const auto& m : rep.margins) worst = std::min(worst, m.slack);
      o.pass = o.pass && rep.pass;
    }
  }
  o.pass = o.pass && fixtures > 0;
  o.detail = Fmt("%.0f fixtures x 5 profiles x t = 1..20, min slack 2 delta^t - "
                 "TV = %.3g",
                 fixtures, worst);
  return o;
}

Outcome MonteCarlo() {
  Outcome o;
  std::string parts;
  // Discounted: solver psi at the reference state versus 1e5 paths.
  {
    const GameSpec s = RandomGame(70000, 3, 2, 2, 1.0, 0.5);
    const discounted::DiscountedSolution sol = discounted::SolveDiscounted(s);
    for (Player pl : {Player::kOne, Player::kTwo}) {
      const mc::EstimatorReport rep = mc::EstimateDiscountedCost(
          s, sol.profile, pl, sol.values.horizon, 100000, 71);
      const double exact = sol.values.psi(pl)[0](s.ref_state);
      const double z = std::abs(rep.point - exact) / rep.stderr_;
      o.pass = o.pass && z <= kSigmas;
      parts += Fmt("discounted z=%.2f ", z);
    }
  }
  // Ergodic: equilibrium lambda for small theta, T = 2000, 200 batches.
  {
    const GameSpec s = SmallCostGame(70001, 3, 2, 2, 0.05);
    const ergodic::NashSearchOutcome eq = ergodic::NashSearchErgodic(s);
    if (!eq.found) {
      o.pass = false;
      parts += "ergodic search failed ";
    } else {
      for (Player pl : {Player::kOne, Player::kTwo}) {
        const mc::EstimatorReport rep = mc::EstimateErgodicCost(
            s, eq.solution->profile, pl, 2000, 200, 72);
        const double lam = pl == Player::kOne ? eq.solution->lambda1
                                              : eq.solution->lambda2;
        const double z = std::abs(rep.point - lam) / rep.stderr_;
        o.pass = o.pass && z <= kSigmas;
        parts += Fmt("ergodic z=%.2f ", z);
      }
    }
  }
  // Return-time moment: 1e5 paths at an R with finite second moment.
  {
    const GameSpec s = RandomGame(70002, 4, 2, 2);
    const markov::FeasibleR f = markov::MaxFeasibleR(s, s.ref_state);
    const double r = 1.0 + 0.5 * (std::sqrt(f.r_star) - 1.0);
    std::mt19937_64 rng(73);
    const StationaryProfile prof = testing::RandomProfile(s, rng);
    const int a0[] = {s.ref_state};
    const double exact =
        markov::GeometricMoment(InducedKernel(s, prof), r, a0)(s.ref_state);
    const mc::EstimatorReport rep =
        mc::SampleReturnTime(s, prof, s.ref_state, 100000, r, 74);
    const double z = std::abs(rep.point - exact) / rep.stderr_;
    o.pass = o.pass && z <= kSigmas && !rep.flagged;
    parts += Fmt("return-time z=%.2f (R=%.4f)", z, r);
  }
  o.detail = parts;
  return o;
}

bool SameSupports(const StationaryProfile& a, const StationaryProfile& b) {
  for (std::size_t k = 0; k < a.mu.size(); ++k) {
    if (a.mu[k].Support() != b.mu[k].Support()) return false;
    if (a.nu[k].Support() != b.nu[k].Support()) return false;
  }
  return true;
}

Outcome ShiftCovariance() {
  Outcome o;
  int disc_fixtures = 0, erg_fixtures = 0;
  double worst_psi = 0.0, worst_lambda = 0.0;
  bool sets_same = true;
  // Only games whose stage games all have a unique equilibrium qualify; late
  // stages are nearly degenerate, so most seeds are skipped.
  for (int i = 0; i < 2000 && disc_fixtures < 10; ++i) {
    const GameSpec s = RandomGame(80000 + i, 2 + i % 3, 2, 2, 0.5);
    const discounted::DiscountedSolution base = discounted::SolveDiscounted(s);
    if (base.stages_with_multiple_equilibria > 0) continue;
    for (double c : {0.1, -0.1}) {
      const GameSpec t = ShiftCosts(s, Player::kOne, c);
      discounted::DiscountedOptions opt;
      opt.horizon = base.values.horizon;
      const discounted::DiscountedSolution sh = discounted::SolveDiscounted(t, opt);
      // Over the finite horizon the forced shift is c (1 - alpha^T) / (1 - alpha),
      // which equals c / (1 - alpha) up to the tail.
      const double forced = c / (1 - s.alpha);
      const double tail = std::abs(c) * std::pow(s.alpha, opt.horizon) / (1 - s.alpha);
      for (int k = 0; k < s.n_states; ++k) {
        const double d = sh.values.psi1[0](k) - base.values.psi1[0](k) - forced;
        worst_psi = std::max(worst_psi, std::abs(d) - tail);
        worst_psi = std::max(worst_psi, std::abs(sh.values.psi2[0](k) -
                                                 base.values.psi2[0](k)));
      }
      for (int t_ = 0; t_ < opt.horizon; ++t_) {
        sets_same = sets_same &&
                    SameSupports(base.profile.stages[t_], sh.profile.stages[t_]);
      }
    }
    ++disc_fixtures;
  }
  for (const GameSpec& s : RecurrentFixtures(8, 81000)) {
    const ergodic::NashSearchOutcome base = ergodic::NashSearchErgodic(s);
    if (!base.found) continue;
    ++erg_fixtures;
    const StationaryProfile& p = base.solution->profile;
    for (double c : {0.1, -0.1}) {
      const GameSpec t = ShiftCosts(s, Player::kOne, c);
      const double l0 = ergodic::GpeBisection(s, p, Player::kOne).lambda;
      const double l1 = ergodic::GpeBisection(t, p, Player::kOne).lambda;
      worst_lambda = std::max(worst_lambda, std::abs(l1 - l0 - c));
      const auto b0 = ergodic::RsValueIteration(s, p.nu, Player::kOne);
      const auto b1 = ergodic::RsValueIteration(t, p.nu, Player::kOne);
      worst_lambda = std::max(worst_lambda, std::abs(b1.lambda - b0.lambda - c));
      sets_same = sets_same && b0.argmin == b1.argmin;
      const ergodic::NashSearchOutcome sh = ergodic::NashSearchErgodic(t);
      sets_same = sets_same && sh.found && SameSupports(p, sh.solution->profile);
    }
  }
  o.pass = disc_fixtures > 0 && erg_fixtures > 0 && worst_psi <= kShiftTol &&
           worst_lambda <= kShiftTol && sets_same;
  o.detail = Fmt("%.0f discounted and %.0f ergodic fixtures, max psi error = "
                 "%.3g",
                 disc_fixtures, erg_fixtures, worst_psi);
  o.detail += Fmt(", max lambda error = %.3g, argmin sets ", worst_lambda);
  o.detail += sets_same ? "unchanged" : "changed";
  return o;
}

Outcome ThetaLimit() {
  Outcome o;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int i = 0; i < 6; ++i) {
    double diff[2];
    int j = 0;
    for (double theta : {1e-3, 1e-4}) {
      GameSpec s = RandomGame(90000 + i, 2 + i % 3, 2, 2, 1.0, theta);
      const discounted::DiscountedSolution sol = discounted::SolveDiscounted(s);
      const Vector rn =
          discounted::EvaluateRiskNeutral(s, sol.profile, Player::kOne);
      diff[j++] = sol.values.psi1[0](s.ref_state) - rn(s.ref_state);
    }
    const double ratio = diff[0] / diff[1];
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  o.pass = lo >= kRatioLo && hi <= kRatioHi;
  o.detail = Fmt("ratio of (psi - risk neutral) at theta 1e-3 vs 1e-4 in "
                 "[%.3f, %.3f]",
                 lo, hi);
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "lambda bound", 30, LambdaBound},
      {2, "dual oracle lambda agreement", 60, DualOracle},
      {3, "relative value bounds", 30, HBounds},
      {4, "twisted kernel stochasticity", 10, TwistedKernel},
      {5, "discounted brute-force equivalence", 120, DiscountedBruteForce},
      {6, "ergodic Nash verification", 120, ErgodicNash},
      {7, "uniform ergodicity decay", 10, UniformErgodicity},
      {8, "Monte Carlo cross-checks", 180, MonteCarlo},
      {9, "shift covariance", 30, ShiftCovariance},
      {10, "small theta limit", 30, ThetaLimit},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    const bool in_budget = secs <= c.budget_s;
    const bool pass = o.pass && in_budget;
    if (!pass) ++failed;
    std::printf("criterion %2d %s: %s (%.2fs of %.0fs%s) %s\n", c.id,
                pass ? "PASS" : "FAIL", c.name, secs, c.budget_s,
                in_budget ? "" : ", over budget", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
