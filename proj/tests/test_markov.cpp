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

#include <cmath>
#include <random>

#include "doctest.h"
#include "error.hpp"
#include "fixtures.hpp"
#include "linalg.hpp"
#include "markov_analysis.hpp"
#include "mc_simulator.hpp"
#include "oracles.hpp"

using namespace rsgame;
using namespace rsgame::markov;
using rsgame::testing::RandomGame;
using rsgame::testing::TwoStateChain;

namespace {

StochasticMatrix Chain(double p, double q) {
  StochasticMatrix m(2, 2);
  m << 1 - p, p, q, 1 - q;
  return m;
}

GameSpec Swap() {
  GameSpec s = GameSpec::Zeros(2, 2, 2);
  for (int u = 0; u < 2; ++u) {
    for (int v = 0; v < 2; ++v) {
      s.q_row_mut(0, u, v)[1] = 1.0;
      s.q_row_mut(1, u, v)[0] = 1.0;
    }
  }
  return s;
}

}  // namespace

TEST_CASE("dobrushin delta examples") {
  GameSpec same = RandomGame(1, 3, 2, 2);
  for (int k = 0; k < 3; ++k) {
    for (int u = 0; u < 2; ++u) {
      for (int v = 0; v < 2; ++v) {
        auto row = same.q_row_mut(k, u, v);
        row[0] = 0.2, row[1] = 0.3, row[2] = 0.5;
      }
    }
  }
  CHECK(DobrushinDelta(same) == 0.0);
  CHECK(DobrushinDelta(Swap()) == 1.0);
  GameSpec two = TwoStateChain(0.1, 0.2);  // rows (0.9, 0.1) and (0.2, 0.8)
  CHECK(DobrushinDelta(two) == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("irreducibility and aperiodicity verdicts") {
  GameSpec single = GameSpec::Zeros(1, 2, 2);
  for (int u = 0; u < 2; ++u) {
    for (int v = 0; v < 2; ++v) single.q_row_mut(0, u, v)[0] = 1.0;
  }
  CHECK(CheckIrreducibleAperiodic(single).holds);

  const IrreducibilityVerdict swap = CheckIrreducibleAperiodic(Swap());
  CHECK(swap.irreducible);
  CHECK_FALSE(swap.aperiodic);
  CHECK_FALSE(swap.holds);
  CHECK(swap.witness.has_value());

  const IrreducibilityVerdict pos =
      CheckIrreducibleAperiodic(RandomGame(2, 2, 2, 2));
  CHECK(pos.holds);
  CHECK(pos.aperiodicity_method == "dobrushin");
}

TEST_CASE("irreducibility fails when one action pair makes a state absorbing") {
  GameSpec s = RandomGame(3, 3, 2, 2);
  auto row = s.q_row_mut(2, 1, 0);
  row[0] = 0.0, row[1] = 0.0, row[2] = 1.0;
  const IrreducibilityVerdict v = CheckIrreducibleAperiodic(s);
  CHECK_FALSE(v.irreducible);
  REQUIRE(v.witness.has_value());
  CHECK(v.witness->mu[2][1] == 1.0);
  CHECK(v.witness->nu[2][0] == 1.0);
}

TEST_CASE("irreducibility verdict matches explicit pure-profile enumeration") {
  // Sparse kernels make reducibility likely for some profiles.
  for (int trial = 0; trial < 30; ++trial) {
    GameSpec s = RandomGame(300 + trial, 3, 2, 2, 1.0, 0.5, 0.8, 0.0);
    std::mt19937_64 rng(trial);
    for (int k = 0; k < 3; ++k) {
      for (int a = 0; a < 4; ++a) {
        auto row = s.q_row_mut(k, a / 2, a % 2);
        const int keep = static_cast<int>(rng() % 3);
        for (int j = 0; j < 3; ++j) row[j] = j == keep ? 1.0 : 0.0;
      }
    }
    bool all_irreducible = true;
    for (const auto& joint : testing::AllAssignments(3, 4)) {
      std::vector<int> u(3), v(3);
      for (int k = 0; k < 3; ++k) u[k] = joint[k] / 2, v[k] = joint[k] % 2;
      const auto p = InducedKernel(s, StationaryProfile::Pure(s, u, v));
      all_irreducible =
          all_irreducible &&
          linalg::IsStronglyConnected(linalg::SupportGraph(p));
    }
    CHECK(CheckIrreducibleAperiodic(s).irreducible == all_irreducible);
  }
}

TEST_CASE("invariant measure examples") {
  const auto c = oracle::TwoState(0.3, 0.6);
  const InvariantMeasure m = InvariantMeasureOf(Chain(0.3, 0.6));
  CHECK(m.eta(0) == doctest::Approx(c.eta0).epsilon(1e-13));
  CHECK(m.eta(1) == doctest::Approx(c.eta1).epsilon(1e-13));

  StochasticMatrix ds(3, 3);
  ds << 0.2, 0.3, 0.5, 0.5, 0.2, 0.3, 0.3, 0.5, 0.2;
  const InvariantMeasure u = InvariantMeasureOf(ds);
  for (int k = 0; k < 3; ++k) {
    CHECK(u.eta(k) == doctest::Approx(1.0 / 3).epsilon(1e-13));
  }

  StochasticMatrix same(3, 3);
  for (int k = 0; k < 3; ++k) same.row(k) << 0.1, 0.6, 0.3;
  const InvariantMeasure s = InvariantMeasureOf(same);
  CHECK(s.eta(1) == doctest::Approx(0.6).epsilon(1e-13));

  StochasticMatrix reducible(2, 2);
  reducible << 1, 0, 0, 1;
  CHECK_THROWS_AS(InvariantMeasureOf(reducible), Error);
}

TEST_CASE("uniform ergodicity margins") {
  StochasticMatrix same(2, 2);
  same << 0.4, 0.6, 0.4, 0.6;
  const auto r0 = UniformErgodicityCheck(same, InvariantMeasureOf(same).eta,
                                         0.0, 5);
  CHECK(r0.pass);
  for (const auto& m : r0.margins) CHECK(m.tv < 1e-15);

  // t = 1 for the (p, q) chain: row distances are 2 |P(k,0) - eta0|.
  const double p = 0.3, q = 0.6;
  const auto c = oracle::TwoState(p, q);
  const auto r = UniformErgodicityCheck(Chain(p, q),
                                        InvariantMeasureOf(Chain(p, q)).eta,
                                        std::abs(1 - p - q), 1);
  const double tv = std::max(2 * std::abs(1 - p - c.eta0),
                             2 * std::abs(q - c.eta0));
  CHECK(r.margins[0].tv == doctest::Approx(tv).epsilon(1e-12));
  CHECK(r.margins[0].bound == doctest::Approx(2 * 0.1).epsilon(1e-12));
  CHECK(r.pass);
}

TEST_CASE("expected return time examples") {
  const int a0[] = {0};
  const Vector swap = ExpectedReturnTime(Chain(1, 1), a0);
  CHECK(swap(0) == doctest::Approx(2.0));
  CHECK(swap(1) == doctest::Approx(1.0));
  const Vector pq = ExpectedReturnTime(Chain(0.3, 0.25), a0);
  CHECK(pq(1) == doctest::Approx(oracle::TwoState(0.3, 0.25).mean_return_from1)
                     .epsilon(1e-13));
  const int all[] = {0, 1};
  const Vector one = ExpectedReturnTime(Chain(0.3, 0.25), all);
  CHECK(one(0) == 1.0);
  CHECK(one(1) == 1.0);
}

TEST_CASE("geometric moment examples") {
  const int a0[] = {0};
  const Vector swap = GeometricMoment(Chain(1, 1), 1.7, a0);
  CHECK(swap(0) == doctest::Approx(1.7 * 1.7));
  CHECK(swap(1) == doctest::Approx(1.7));
  const double p = 0.4, q = 0.3, r = 1.2;  // r (1 - q) = 0.84 < 1
  const auto c = oracle::TwoState(p, q);
  const Vector g = GeometricMoment(Chain(p, q), r, a0);
  CHECK(g(1) == doctest::Approx(c.moment_from1(r)).epsilon(1e-13));
  CHECK(g(0) == doctest::Approx(c.moment_from0(r, p)).epsilon(1e-13));
  CHECK_THROWS_AS(GeometricMoment(Chain(p, q), 1.0 / (1 - q) + 1e-3, a0),
                  Error);
  try {
    GeometricMoment(Chain(p, q), 1.5, a0);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("spectral radius") != std::string::npos);
  }
}

TEST_CASE("property: geometric moment nondecreasing in R, slope above mean") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  const int a0[] = {0};
  for (int trial = 0; trial < 40; ++trial) {
    const double p = unit(rng), q = unit(rng);
    const StochasticMatrix m = Chain(p, q);
    const double r_hi = 1.0 / (1.0 - q);
    double prev = 0.0;
    for (int i = 1; i <= 5; ++i) {
      const double r = 1.0 + (r_hi - 1.0) * i / 6.0;
      const double g = GeometricMoment(m, r, a0)(1);
      CHECK(g >= prev);
      prev = g;
    }
    const double h = 1e-7;
    const Vector mean = ExpectedReturnTime(m, a0);
    const Vector up = GeometricMoment(m, 1.0 + h, a0);
    for (int k = 0; k < 2; ++k) {
      const double slope = (up(k) - 1.0) / h;
      CHECK(mean(k) <= slope + 1e-4);
      CHECK(slope - mean(k) <= 1e-4 * std::max(1.0, mean(k) * mean(k)));
    }
  }
}

TEST_CASE("max feasible R examples") {
  GameSpec single = GameSpec::Zeros(1, 1, 1);
  single.q_row_mut(0, 0, 0)[0] = 1.0;
  const FeasibleR f = MaxFeasibleR(single, 0);
  CHECK(f.capped);
  CHECK(f.r0 == doctest::Approx(0.99e6));
  CHECK(f.b0 == doctest::Approx(f.r0));

  const double q = 0.35;
  const FeasibleR t = MaxFeasibleR(TwoStateChain(0.6, q), 0);
  CHECK(std::abs(t.r_star - 1.0 / (1.0 - q)) <= 1e-6);
  CHECK(t.r0 == doctest::Approx(0.99 * t.r_star));
  CHECK(t.b0 > 1.0);

  GameSpec trap = RandomGame(5, 2, 2, 2);
  auto row = trap.q_row_mut(1, 0, 1);
  row[0] = 0.0, row[1] = 1.0;
  CHECK_THROWS_AS(MaxFeasibleR(trap, 0), Error);
}

TEST_CASE("worst case moment equals the maximum over explicit pure profiles") {
  for (int trial = 0; trial < 15; ++trial) {
    const GameSpec s = RandomGame(400 + trial, 3, 2, 2, 1.0, 0.5, 0.8, 0.3);
    const int a0[] = {0};
    const double r = 1.1;
    const WorstCaseMoment w = WorstCaseGeometricMoment(s, r, a0);
    REQUIRE(w.feasible);
    double best = 0.0, best_mean = 0.0;
    for (const auto& joint : testing::AllAssignments(3, 4)) {
      std::vector<int> u(3), v(3);
      for (int k = 0; k < 3; ++k) u[k] = joint[k] / 2, v[k] = joint[k] % 2;
      const auto p = InducedKernel(s, StationaryProfile::Pure(s, u, v));
      best = std::max(best, GeometricMoment(p, r, a0).maxCoeff());
      best_mean = std::max(best_mean, ExpectedReturnTime(p, a0).maxCoeff());
    }
    CHECK(w.value.maxCoeff() == doctest::Approx(best).epsilon(1e-12));
    CHECK(WorstCaseReturnTime(s, a0) == doctest::Approx(best_mean).epsilon(1e-12));
  }
}

TEST_CASE("lyapunov certificate examples") {
  // From every state the chain jumps to 0 with probability one.
  GameSpec s = GameSpec::Zeros(3, 1, 1);
  for (int k = 0; k < 3; ++k) s.q_row_mut(k, 0, 0)[0] = 1.0;
  const FeasibleR f = MaxFeasibleR(s, 0);
  const LyapunovCertificate c = BuildLyapunovCertificate(s, f.r0);
  CHECK(c.holds);
  CHECK(c.eta == doctest::Approx(1.0 / f.r0));
  CHECK(c.v(1) == doctest::Approx(f.r0));
  CHECK(c.v(2) == doctest::Approx(f.r0));

  const GameSpec g = RandomGame(6, 3, 2, 2);
  const FeasibleR fg = MaxFeasibleR(g, 0);
  const LyapunovCertificate whole = BuildLyapunovCertificate(g, fg.r0, {0, 1, 2});
  CHECK(whole.holds);
  double max_row = 0.0;
  for (int k = 0; k < 3; ++k) {
    for (int a = 0; a < 4; ++a) {
      double sum = 0.0;
      for (int j = 0; j < 3; ++j) sum += g.q_row(k, a)[j] * whole.v(j);
      max_row = std::max(max_row, sum - whole.eta * whole.v(k));
    }
  }
  CHECK(whole.b == doctest::Approx(std::max(0.0, max_row)).epsilon(1e-12));

  // Direct check of the drift inequality over every state and action pair.
  const LyapunovCertificate lc = BuildLyapunovCertificate(g, fg.r0);
  for (int k = 0; k < 3; ++k) {
    CHECK(lc.v(k) >= 1.0);
    for (int a = 0; a < 4; ++a) {
      double sum = 0.0;
      for (int j = 0; j < 3; ++j) sum += g.q_row(k, a)[j] * lc.v(j);
      CHECK(sum <= lc.eta * lc.v(k) + (k == 0 ? lc.b : 0.0) + 1e-9 * sum);
    }
  }
}

TEST_CASE("check assumptions examples") {
  GameSpec zero = RandomGame(7, 3, 2, 2);
  for (double& x : zero.r1) x = 0.0;
  for (double& x : zero.r2) x = 0.0;
  const RecurrenceReport z = CheckAssumptions(zero);
  CHECK(z.a1_holds);
  CHECK(z.a2_holds);
  CHECK(z.a3_holds);
  CHECK(z.all_hold());

  GameSpec edge = zero;
  const double thr = *z.a3_threshold;
  edge.r1[0] = thr;
  edge.r2[3] = -thr;
  const RecurrenceReport e = CheckAssumptions(edge);
  CHECK(e.a3_holds);

  GameSpec above = zero;
  above.r1[0] = thr * (1 + 1e-9);
  const RecurrenceReport a = CheckAssumptions(above);
  CHECK_FALSE(a.a3_holds);
  CHECK(a.norm_r1 > *a.a3_threshold);

  const RecurrenceReport swap = CheckAssumptions(Swap());
  CHECK_FALSE(swap.a2_holds);
  CHECK_FALSE(swap.a1_holds);
  CHECK(swap.delta == 1.0);
}

TEST_CASE("property: uniform ergodicity slack for specs passing the delta check") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 25; ++trial) {
    const GameSpec s = RandomGame(500 + trial, 2 + trial % 6, 2, 2);
    const double delta = DobrushinDelta(s);
    REQUIRE(delta < 1.0);
    const auto p = InducedKernel(s, testing::RandomProfile(s, rng));
    const auto r = UniformErgodicityCheck(p, InvariantMeasureOf(p).eta, delta, 20);
    CHECK(r.pass);
  }
}

TEST_CASE("geometric moment agrees with Monte Carlo return times") {
  const GameSpec s = TwoStateChain(0.4, 0.3);
  const StationaryProfile prof = StationaryProfile::Uniform(s);
  const int a0[] = {0};
  const double r = 1.2;
  const double exact = GeometricMoment(InducedKernel(s, prof), r, a0)(0);
  const auto rep = mc::SampleReturnTime(s, prof, 0, 100000, r, 2024);
  CHECK(std::abs(rep.point - exact) <= 3 * rep.stderr_);
}
