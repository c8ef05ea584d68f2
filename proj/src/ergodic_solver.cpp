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

#include "ergodic_solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include "bimatrix.hpp"
#include "error.hpp"
#include "linalg.hpp"

namespace rsgame::ergodic {
namespace {

std::vector<int> OtherStates(int n, int ref) {
  std::vector<int> c;
  for (int k = 0; k < n; ++k) {
    if (k != ref) c.push_back(k);
  }
  return c;
}

// Solves x = w(c, c) x + rhs on the states other than ref.
Vector TabooSolve(const Eigen::MatrixXd& w, const std::vector<int>& c,
                  const Vector& rhs, const char* what) {
  const int m = static_cast<int>(c.size());
  Eigen::MatrixXd wc(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) wc(i, j) = w(c[i], c[j]);
  }
  const double rho = linalg::SpectralRadius(wc);
  if (!(rho < 1.0)) {
    std::ostringstream os;
    os << what << ": taboo system diverges, spectral radius " << rho;
    Fail(ErrorCode::kNumerical, os.str());
  }
  return linalg::Solve(Eigen::MatrixXd::Identity(m, m) - wc, rhs);
}

int OwnActions(const GameSpec& spec, Player p) {
  return p == Player::kOne ? spec.n_actions_u : spec.n_actions_v;
}

void CheckOpponent(const GameSpec& spec, const std::vector<MixedAction>& opp,
                   Player player) {
  StationaryProfile probe = StationaryProfile::Uniform(spec);
  probe.of(Opponent(player)) = opp;
  CheckProfile(spec, probe);
}

// Rows (k * n_own + a): sum_opp w exp(theta (r_i - shift)) q(.|k, a, opp).
Eigen::MatrixXd ActionKernels(const GameSpec& spec,
                              const std::vector<MixedAction>& opponent,
                              Player player, double shift) {
  const int n = spec.n_states;
  const int n_own = OwnActions(spec, player);
  const int n_opp = OwnActions(spec, Opponent(player));
  Eigen::MatrixXd k_all = Eigen::MatrixXd::Zero(n * n_own, n);
  for (int k = 0; k < n; ++k) {
    for (int a = 0; a < n_own; ++a) {
      for (int b = 0; b < n_opp; ++b) {
        const double w = opponent[k][b];
        if (w == 0.0) continue;
        const int u = player == Player::kOne ? a : b;
        const int v = player == Player::kOne ? b : a;
        const double f =
            w * std::exp(spec.theta * (spec.r(player, k, u, v) - shift));
        auto row = spec.q_row(k, u, v);
        for (int j = 0; j < n; ++j) k_all(k * n_own + a, j) += f * row[j];
      }
    }
  }
  return k_all;
}

bool Contains(const std::vector<int>& s, int x) {
  return std::find(s.begin(), s.end(), x) != s.end();
}

std::vector<long long> Quantize(const StationaryProfile& p, double res) {
  std::vector<long long> key;
  for (const auto* side : {&p.mu, &p.nu}) {
    for (const MixedAction& m : *side) {
      for (double w : m.weights) key.push_back(std::llround(w / res));
    }
  }
  return key;
}

void Mix(std::vector<MixedAction>& cur, const std::vector<int>& pure,
         double gamma) {
  for (std::size_t k = 0; k < cur.size(); ++k) {
    for (std::size_t a = 0; a < cur[k].size(); ++a) {
      const double target = static_cast<int>(a) == pure[k] ? 1.0 : 0.0;
      cur[k].weights[a] = (1.0 - gamma) * cur[k].weights[a] + gamma * target;
    }
  }
}

struct SupportPair {
  std::vector<int> s1, s2;
};

std::vector<std::vector<int>> SubsetsOfSize(int n, int s) {
  std::vector<std::vector<int>> out;
  for (int mask = 0; mask < (1 << n); ++mask) {
    if (std::popcount(static_cast<unsigned>(mask)) != s) continue;
    std::vector<int> v;
    for (int i = 0; i < n; ++i) {
      if (mask & (1 << i)) v.push_back(i);
    }
    out.push_back(std::move(v));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Equal-size support pairs for one state, ordered by size, then by
// (row support, column support).
std::vector<SupportPair> StateSupports(int nu, int nv) {
  std::vector<SupportPair> out;
  for (int s = 1; s <= std::min(nu, nv); ++s) {
    for (const auto& a : SubsetsOfSize(nu, s)) {
      for (const auto& b : SubsetsOfSize(nv, s)) out.push_back({a, b});
    }
  }
  return out;
}

// Weights y on `cols` with sum_{c in cols} m(r, c) y_c equal over r in rows.
std::optional<std::vector<double>> Indifferent(const Eigen::MatrixXd& m,
                                               const std::vector<int>& rows,
                                               const std::vector<int>& cols) {
  const int s = static_cast<int>(cols.size());
  Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(s + 1, s + 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(s + 1);
  for (int i = 0; i < s; ++i) {
    for (int c = 0; c < s; ++c) sys(i, c) = m(rows[i], cols[c]);
    sys(i, s) = -1.0;
  }
  sys.row(s).head(s).setOnes();
  rhs(s) = 1.0;
  Eigen::VectorXd sol;
  try {
    sol = linalg::Solve(sys, rhs);
  } catch (const Error&) {
    return std::nullopt;
  }
  std::vector<double> y(s);
  for (int c = 0; c < s; ++c) {
    if (!std::isfinite(sol(c)) || sol(c) < -1e-12) return std::nullopt;
    y[c] = std::max(0.0, sol(c));
  }
  return y;
}

// Per-state stage game on continuation values h1, h2:
// a(u, v) = exp(theta r1) sum_j q(j) h1(j), b likewise for player II.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> StageMatrices(const GameSpec& spec,
                                                          int k,
                                                          const Vector& h1,
                                                          const Vector& h2) {
  Eigen::MatrixXd a(spec.n_actions_u, spec.n_actions_v);
  Eigen::MatrixXd b(spec.n_actions_u, spec.n_actions_v);
  for (int u = 0; u < spec.n_actions_u; ++u) {
    for (int v = 0; v < spec.n_actions_v; ++v) {
      auto row = spec.q_row(k, u, v);
      double c1 = 0.0, c2 = 0.0;
      for (int j = 0; j < spec.n_states; ++j) {
        c1 += row[j] * h1(j);
        c2 += row[j] * h2(j);
      }
      a(u, v) = std::exp(spec.theta * spec.r(Player::kOne, k, u, v)) * c1;
      b(u, v) = std::exp(spec.theta * spec.r(Player::kTwo, k, u, v)) * c2;
    }
  }
  return {a, b};
}

double Distance(const MixedAction& a, const MixedAction& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

// Relative value iteration on the pair (h1, h2): each sweep installs a stage
// equilibrium at every state and replaces h_i by its stage value, normalized
// at ref_state. A fixed point solves both players' optimality equations with
// the installed profile. Among several stage equilibria the one closest to
// the previous sweep is kept.
StationaryProfile StageGameIteration(const GameSpec& spec, int max_sweeps,
                                     int* sweeps) {
  const int n = spec.n_states;
  const int ref = spec.ref_state;
  Vector h1 = Vector::Ones(n), h2 = Vector::Ones(n);
  StationaryProfile p;
  p.mu.resize(n);
  p.nu.resize(n);
  for (int it = 1; it <= max_sweeps; ++it) {
    *sweeps = it;
    Vector n1(n), n2(n);
    double change = 0.0;
    for (int k = 0; k < n; ++k) {
      const auto [a, b] = StageMatrices(spec, k, h1, h2);
      const BimatrixResult res = SolveBimatrix(a, b);
      const BimatrixEquilibrium* pick = &res.selected();
      if (it > 1) {
        double best = std::numeric_limits<double>::infinity();
        for (const BimatrixEquilibrium& e : res.equilibria) {
          const double d = Distance(e.row, p.mu[k]) + Distance(e.col, p.nu[k]);
          if (d < best) best = d, pick = &e;
        }
        change = std::max(change, best);
      }
      p.mu[k] = pick->row;
      p.nu[k] = pick->col;
      n1(k) = pick->row_value;
      n2(k) = pick->col_value;
    }
    n1 /= n1(ref);
    n2 /= n2(ref);
    const double span = std::max(
        ((n1.array() / h1.array()).log().maxCoeff() -
         (n1.array() / h1.array()).log().minCoeff()),
        ((n2.array() / h2.array()).log().maxCoeff() -
         (n2.array() / h2.array()).log().minCoeff()));
    h1 = n1;
    h2 = n2;
    if (it > 1 && span <= 1e-14 && change <= 1e-12) break;
  }
  return p;
}

// Stationary profile with the given supports whose mixing at each state makes
// the opponent indifferent over its support, found by alternating between
// the relative values of the current profile and the stage indifference
// conditions.
std::optional<StationaryProfile> SupportFixedPoint(
    const GameSpec& spec, const std::vector<SupportPair>& supports) {
  const int n = spec.n_states;
  StationaryProfile p;
  for (int k = 0; k < n; ++k) {
    MixedAction x, y;
    x.weights.assign(spec.n_actions_u, 0.0);
    y.weights.assign(spec.n_actions_v, 0.0);
    for (int u : supports[k].s1) x.weights[u] = 1.0 / supports[k].s1.size();
    for (int v : supports[k].s2) y.weights[v] = 1.0 / supports[k].s2.size();
    p.mu.push_back(x);
    p.nu.push_back(y);
  }
  for (int it = 0; it < 500; ++it) {
    ErgodicSolution ev;
    try {
      ev = EvaluateErgodic(spec, p);
    } catch (const Error&) {
      return std::nullopt;
    }
    StationaryProfile next = p;
    for (int k = 0; k < n; ++k) {
      if (supports[k].s1.size() == 1) continue;
      const auto [a, bt] = StageMatrices(spec, k, ev.h1, ev.h2);
      const Eigen::MatrixXd b = bt.transpose();
      auto y = Indifferent(a, supports[k].s1, supports[k].s2);
      auto x = Indifferent(b, supports[k].s2, supports[k].s1);
      if (!x || !y) return std::nullopt;
      std::fill(next.mu[k].weights.begin(), next.mu[k].weights.end(), 0.0);
      std::fill(next.nu[k].weights.begin(), next.nu[k].weights.end(), 0.0);
      for (std::size_t i = 0; i < x->size(); ++i) {
        next.mu[k].weights[supports[k].s1[i]] = (*x)[i];
        next.nu[k].weights[supports[k].s2[i]] = (*y)[i];
      }
    }
    double diff = 0.0;
    for (int k = 0; k < n; ++k) {
      for (int u = 0; u < spec.n_actions_u; ++u) {
        diff = std::max(diff, std::abs(next.mu[k][u] - p.mu[k][u]));
      }
      for (int v = 0; v < spec.n_actions_v; ++v) {
        diff = std::max(diff, std::abs(next.nu[k][v] - p.nu[k][v]));
      }
    }
    p = std::move(next);
    if (diff < 1e-13) return p;
  }
  return p;
}

}  // namespace

Vector FirstPassageExp(const GameSpec& spec, const StationaryProfile& profile,
                       Player player, double lambda) {
  CheckProfile(spec, profile);
  const int ref = spec.ref_state;
  const Eigen::MatrixXd w =
      WeightedKernel(spec, profile, player, spec.theta, lambda);
  const std::vector<int> c = OtherStates(spec.n_states, ref);
  Vector g(spec.n_states);
  Vector gc(0);
  if (!c.empty()) {
    Vector rhs(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) rhs(i) = w(c[i], ref);
    gc = TabooSolve(w, c, rhs, "first passage");
  }
  double g0 = w(ref, ref);
  for (std::size_t i = 0; i < c.size(); ++i) {
    g(c[i]) = gc(i);
    g0 += w(ref, c[i]) * gc(i);
  }
  g(ref) = g0;
  return g;
}

GpeResult GpeBisection(const GameSpec& spec, const StationaryProfile& profile,
                       Player player, double tol) {
  CheckProfile(spec, profile);
  const double norm = spec.cost_norm(player);
  const int ref = spec.ref_state;
  GpeResult out;
  if (norm == 0.0) {
    out.g = FirstPassageExp(spec, profile, player, 0.0);
    return out;
  }
  auto g_ref = [&](double lambda) {
    try {
      return FirstPassageExp(spec, profile, player, lambda)(ref);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNumerical) throw;
      return std::numeric_limits<double>::infinity();
    }
  };
  double lo = -norm, hi = norm;
  const double at_hi = g_ref(hi);
  const double at_lo = g_ref(lo);
  if (at_hi > 1.0 + 1e-9 || at_lo < 1.0 - 1e-9) {
    std::ostringstream os;
    os << "no sign change of g(ref) - 1 on [" << lo << ", " << hi
       << "]: g(lo) = " << at_lo << ", g(hi) = " << at_hi;
    Fail(ErrorCode::kAssumption, os.str());
  }
  double g_lo = at_lo, g_hi = at_hi;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    ++out.iterations;
    const double g_mid = g_ref(mid);
    if (g_mid > 1.0) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
      g_hi = g_mid;
    }
  }
  out.lambda = 0.5 * (lo + hi);
  // One interpolation step inside the final bracket; g is smooth there.
  if (std::isfinite(g_lo) && g_lo > g_hi) {
    const double x = lo + (g_lo - 1.0) * (hi - lo) / (g_lo - g_hi);
    if (x >= lo && x <= hi) out.lambda = x;
  }
  out.g = FirstPassageExp(spec, profile, player, out.lambda);
  return out;
}

SpectralLambda SpectralLambdaOf(const GameSpec& spec,
                                const StationaryProfile& profile,
                                Player player) {
  CheckProfile(spec, profile);
  const Eigen::MatrixXd m = WeightedKernel(spec, profile, player, spec.theta);
  const linalg::PerronResult pr = linalg::PerronPowerIteration(m);
  SpectralLambda out;
  out.rho = pr.rho;
  out.lambda = std::log(pr.rho) / spec.theta;
  out.eigenvector = pr.vector / pr.vector(spec.ref_state);
  out.iterations = pr.iterations;
  return out;
}

Vector RelativeValueH(const GameSpec& spec, const StationaryProfile& profile,
                      Player player, double lambda) {
  CheckProfile(spec, profile);
  const int ref = spec.ref_state;
  const Eigen::MatrixXd w =
      WeightedKernel(spec, profile, player, spec.theta, lambda);
  const double h_ref = w.row(ref).sum();
  const std::vector<int> c = OtherStates(spec.n_states, ref);
  Vector h(spec.n_states);
  h(ref) = h_ref;
  if (c.empty()) return h;
  Vector rhs(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) rhs(i) = w(c[i], ref) * h_ref;
  const Vector hc = TabooSolve(w, c, rhs, "relative value");
  for (std::size_t i = 0; i < c.size(); ++i) h(c[i]) = hc(i);
  return h;
}

ValueIterationResult RsValueIteration(const GameSpec& spec,
                                      const std::vector<MixedAction>& opponent,
                                      Player player,
                                      const ValueIterationOptions& options) {
  ValidateOrThrow(spec);
  CheckOpponent(spec, opponent, player);
  const int n = spec.n_states;
  const int n_own = OwnActions(spec, player);
  const int ref = spec.ref_state;
  const double shift = spec.cost_norm(player);
  const Eigen::MatrixXd k_all = ActionKernels(spec, opponent, player, shift);

  auto apply = [&](const Vector& f, std::vector<int>* best) {
    const Vector all = k_all * f;
    Vector tf(n);
    for (int k = 0; k < n; ++k) {
      int arg = 0;
      double m = all(k * n_own);
      for (int a = 1; a < n_own; ++a) {
        if (all(k * n_own + a) < m) {
          m = all(k * n_own + a);
          arg = a;
        }
      }
      tf(k) = m;
      if (best) (*best)[k] = arg;
    }
    return tf;
  };

  ValueIterationResult out;
  Vector f = Vector::Ones(n);
  // Past this many sweeps the iteration is averaged with the identity, which
  // removes periodic oscillation without moving the fixed point.
  const int damp_after = std::min(options.max_sweeps / 2, 20000);
  bool converged = false;
  double log_rho = 0.0;
  for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    const Vector tf = apply(f, nullptr);
    if (!(tf.array() > 0.0).all() || !tf.allFinite()) {
      Fail(ErrorCode::kNumerical, "value iteration lost positivity");
    }
    const Eigen::ArrayXd ratio = (tf.array() / f.array()).log();
    out.span = ratio.maxCoeff() - ratio.minCoeff();
    out.sweeps = sweep;
    log_rho = 0.5 * (ratio.maxCoeff() + ratio.minCoeff());
    Vector next = tf / tf(ref);
    if (sweep > damp_after) next = 0.5 * (f + next);
    f = next / next(ref);
    if (out.span <= options.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    std::ostringstream os;
    os << "value iteration did not converge in " << options.max_sweeps
       << " sweeps; final log-span " << out.span;
    Fail(ErrorCode::kNumerical, os.str());
  }
  out.lambda = shift + log_rho / spec.theta;

  const Vector all = k_all * f;
  out.argmin.assign(n, {});
  int best_ref = 0;
  for (int k = 0; k < n; ++k) {
    double m = std::numeric_limits<double>::infinity();
    for (int a = 0; a < n_own; ++a) m = std::min(m, all(k * n_own + a));
    for (int a = 0; a < n_own; ++a) {
      if (all(k * n_own + a) <= m * (1.0 + options.argmin_rel_tol)) {
        out.argmin[k].push_back(a);
      }
    }
    if (k == ref) best_ref = out.argmin[k].front();
  }
  const int n_opp = OwnActions(spec, Opponent(player));
  double h_ref = 0.0;
  for (int b = 0; b < n_opp; ++b) {
    const int u = player == Player::kOne ? best_ref : b;
    const int v = player == Player::kOne ? b : best_ref;
    h_ref += opponent[ref][b] *
             std::exp(spec.theta * (spec.r(player, ref, u, v) - out.lambda));
  }
  out.h = f * h_ref;
  return out;
}

Eigen::MatrixXd TwistedKernel(const GameSpec& spec,
                              const StationaryProfile& profile, Player player,
                              const Vector& f, double lambda) {
  CheckProfile(spec, profile);
  if (f.size() != spec.n_states || !(f.array() > 0.0).all()) {
    Fail(ErrorCode::kInvalidArgument, "f must be a positive per-state vector");
  }
  const Eigen::MatrixXd w =
      WeightedKernel(spec, profile, player, spec.theta, lambda);
  Eigen::MatrixXd out(spec.n_states, spec.n_states);
  for (int k = 0; k < spec.n_states; ++k) {
    for (int j = 0; j < spec.n_states; ++j) {
      out(k, j) = w(k, j) * f(j) / f(k);
    }
    const double dev = std::abs(out.row(k).sum() - 1.0);
    if (dev > 1e-8) {
      std::ostringstream os;
      os << "twisted kernel row " << k << " sums to " << out.row(k).sum()
         << "; (f, lambda) does not solve the multiplicative Poisson equation";
      Fail(ErrorCode::kNumerical, os.str());
    }
  }
  return out;
}

double MpeResidual(const GameSpec& spec, const StationaryProfile& profile,
                   Player player, const Vector& h, double lambda) {
  CheckProfile(spec, profile);
  if (h.size() != spec.n_states || !(h.array() > 0.0).all()) {
    Fail(ErrorCode::kInvalidArgument, "h must be a positive per-state vector");
  }
  const Eigen::MatrixXd w =
      WeightedKernel(spec, profile, player, spec.theta, lambda);
  const Vector wh = w * h;
  return ((wh - h).array().abs() / h.array()).maxCoeff();
}

BestResponseSet BestResponseErgodic(const GameSpec& spec,
                                    const std::vector<MixedAction>& opponent,
                                    Player player,
                                    const ValueIterationOptions& options) {
  ValueIterationResult vi = RsValueIteration(spec, opponent, player, options);
  BestResponseSet out;
  out.lambda = vi.lambda;
  out.h = std::move(vi.h);
  out.argmin = std::move(vi.argmin);
  for (const auto& s : out.argmin) out.pure.push_back(s.front());
  return out;
}

std::vector<double> StateRegret(const GameSpec& spec,
                                const StationaryProfile& profile, Player player,
                                const Vector& h) {
  CheckProfile(spec, profile);
  const int n_own = OwnActions(spec, player);
  const double shift = spec.cost_norm(player);
  const Vector all =
      ActionKernels(spec, profile.of(Opponent(player)), player, shift) * h;
  std::vector<double> out(spec.n_states);
  for (int k = 0; k < spec.n_states; ++k) {
    double best = std::numeric_limits<double>::infinity(), mixed = 0.0;
    for (int a = 0; a < n_own; ++a) {
      best = std::min(best, all(k * n_own + a));
      mixed += profile.of(player)[k][a] * all(k * n_own + a);
    }
    out[k] = std::log(mixed / best) / spec.theta;
  }
  return out;
}

ErgodicVerification VerifyNashErgodic(const GameSpec& spec,
                                      const StationaryProfile& profile,
                                      double tol,
                                      const ValueIterationOptions& options) {
  ValidateOrThrow(spec);
  CheckProfile(spec, profile);
  ErgodicVerification out;
  out.tol = tol;
  out.lambda_profile1 = GpeBisection(spec, profile, Player::kOne).lambda;
  out.lambda_profile2 = GpeBisection(spec, profile, Player::kTwo).lambda;
  const ValueIterationResult vi1 =
      RsValueIteration(spec, profile.nu, Player::kOne, options);
  const ValueIterationResult vi2 =
      RsValueIteration(spec, profile.mu, Player::kTwo, options);
  out.lambda_star1 = vi1.lambda;
  out.lambda_star2 = vi2.lambda;
  out.state_regret1 = StateRegret(spec, profile, Player::kOne, vi1.h);
  out.state_regret2 = StateRegret(spec, profile, Player::kTwo, vi2.h);
  out.gap1 = out.lambda_profile1 - out.lambda_star1;
  out.gap2 = out.lambda_profile2 - out.lambda_star2;
  out.pass = out.gap1 <= tol && out.gap2 <= tol;
  return out;
}

ErgodicSolution EvaluateErgodic(const GameSpec& spec,
                                const StationaryProfile& profile) {
  ErgodicSolution s;
  s.profile = profile;
  s.lambda1 = GpeBisection(spec, profile, Player::kOne).lambda;
  s.lambda2 = GpeBisection(spec, profile, Player::kTwo).lambda;
  s.h1 = RelativeValueH(spec, profile, Player::kOne, s.lambda1);
  s.h2 = RelativeValueH(spec, profile, Player::kTwo, s.lambda2);
  s.normalization1 = s.h1(spec.ref_state);
  s.normalization2 = s.h2(spec.ref_state);
  s.mpe_residual1 = MpeResidual(spec, profile, Player::kOne, s.h1, s.lambda1);
  s.mpe_residual2 = MpeResidual(spec, profile, Player::kTwo, s.h2, s.lambda2);
  return s;
}

NashSearchOutcome NashSearchErgodic(const GameSpec& spec,
                                    const NashSearchConfig& config) {
  ValidateOrThrow(spec);
  if (!(config.damping > 0.0 && config.damping <= 1.0)) {
    Fail(ErrorCode::kInvalidArgument, "damping must lie in (0, 1]");
  }
  NashSearchOutcome out;
  auto accept = [&](const StationaryProfile& p, const char* method) {
    ErgodicVerification ver;
    try {
      ver = VerifyNashErgodic(spec, p, config.verify_tol, config.vi);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kInvalidArgument) throw;
      return false;
    }
    if (!ver.pass) return false;
    out.found = true;
    out.method = method;
    out.solution = EvaluateErgodic(spec, p);
    out.verification = ver;
    return true;
  };

  StationaryProfile prof = StationaryProfile::Uniform(spec);
  std::set<std::vector<long long>> seen;
  seen.insert(Quantize(prof, config.hash_resolution));
  for (int round = 1; round <= config.max_rounds; ++round) {
    out.rounds = round;
    const BestResponseSet br1 =
        BestResponseErgodic(spec, prof.nu, Player::kOne, config.vi);
    Mix(prof.mu, br1.pure, config.damping);
    const BestResponseSet br2 =
        BestResponseErgodic(spec, prof.mu, Player::kTwo, config.vi);
    Mix(prof.nu, br2.pure, config.damping);

    const StationaryProfile pure =
        StationaryProfile::Pure(spec, br1.pure, br2.pure);
    const BestResponseSet back1 =
        BestResponseErgodic(spec, pure.nu, Player::kOne, config.vi);
    const BestResponseSet back2 =
        BestResponseErgodic(spec, pure.mu, Player::kTwo, config.vi);
    bool mutual = true;
    for (int k = 0; k < spec.n_states && mutual; ++k) {
      mutual = Contains(back1.argmin[k], br1.pure[k]) &&
               Contains(back2.argmin[k], br2.pure[k]);
    }
    if (mutual && accept(pure, "best-response")) return out;

    if (!seen.insert(Quantize(prof, config.hash_resolution)).second) {
      out.cycle_detected = true;
      break;
    }
  }

  if (config.stage_sweeps > 0) {
    const StationaryProfile stage =
        StageGameIteration(spec, config.stage_sweeps, &out.stage_sweeps);
    if (accept(stage, "stage-game-iteration")) return out;
    std::vector<SupportPair> supports(spec.n_states);
    bool square = true;
    for (int k = 0; k < spec.n_states; ++k) {
      supports[k] = {stage.mu[k].Support(), stage.nu[k].Support()};
      square = square && supports[k].s1.size() == supports[k].s2.size();
    }
    if (square) {
      const auto polished = SupportFixedPoint(spec, supports);
      if (polished && accept(*polished, "stage-game-iteration")) return out;
    }
  }

  const std::vector<SupportPair> per_state =
      StateSupports(spec.n_actions_u, spec.n_actions_v);
  const long long per = static_cast<long long>(per_state.size());
  long long space = 1;
  for (int k = 0; k < spec.n_states; ++k) {
    if (space > std::numeric_limits<long long>::max() / per) {
      space = std::numeric_limits<long long>::max();
      break;
    }
    space *= per;
  }
  out.candidate_space = space;
  if (config.fallback_cap <= 0 || space > config.fallback_cap) {
    std::ostringstream os;
    os << "best-response iteration "
       << (out.cycle_detected ? "cycled" : "did not converge") << " after "
       << out.rounds << " rounds"
       << (config.stage_sweeps > 0 ? "; stage-game iteration did not verify"
                                   : "")
       << "; support enumeration "
       << (config.fallback_cap <= 0 ? "disabled"
                                    : "skipped (candidate space exceeds cap)");
    out.failure_reason = os.str();
    return out;
  }

  std::vector<int> size_of(per);
  int max_size = 0;
  for (long long i = 0; i < per; ++i) {
    size_of[i] = static_cast<int>(per_state[i].s1.size());
    max_size = std::max(max_size, size_of[i]);
  }
  const int n = spec.n_states;
  for (int total = n; total <= n * max_size; ++total) {
    std::vector<int> idx(n, 0);
    for (long long c = 0; c < space; ++c) {
      long long rem = c;
      int sum = 0;
      for (int k = n - 1; k >= 0; --k) {
        idx[k] = static_cast<int>(rem % per);
        rem /= per;
        sum += size_of[idx[k]];
      }
      if (sum != total) continue;
      ++out.candidates_examined;
      std::vector<SupportPair> assignment(n);
      for (int k = 0; k < n; ++k) assignment[k] = per_state[idx[k]];
      std::optional<StationaryProfile> cand;
      if (total == n) {
        std::vector<int> u(n), v(n);
        for (int k = 0; k < n; ++k) {
          u[k] = assignment[k].s1[0];
          v[k] = assignment[k].s2[0];
        }
        cand = StationaryProfile::Pure(spec, u, v);
      } else {
        cand = SupportFixedPoint(spec, assignment);
      }
      if (cand && accept(*cand, "support-enumeration")) return out;
    }
  }
  out.failure_reason =
      "best-response iteration failed and no support assignment verified";
  return out;
}

}  // namespace rsgame::ergodic
