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

#include "markov_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "error.hpp"
#include "linalg.hpp"

namespace rsgame::markov {
namespace {

std::vector<bool> Membership(int n, std::span<const int> a) {
  std::vector<bool> in(n, false);
  for (int k : a) {
    if (k < 0 || k >= n) {
      Fail(ErrorCode::kInvalidArgument, "state set index out of range");
    }
    in[k] = true;
  }
  return in;
}

std::vector<int> Complement(const std::vector<bool>& in) {
  std::vector<int> c;
  for (std::size_t k = 0; k < in.size(); ++k) {
    if (!in[k]) c.push_back(static_cast<int>(k));
  }
  return c;
}

StationaryProfile ProfileFromJoint(const GameSpec& spec,
                                   const std::vector<int>& joint) {
  std::vector<int> u(spec.n_states), v(spec.n_states);
  for (int k = 0; k < spec.n_states; ++k) {
    u[k] = joint[k] / spec.n_actions_v;
    v[k] = joint[k] % spec.n_actions_v;
  }
  return StationaryProfile::Pure(spec, u, v);
}

linalg::Graph SelectionGraph(const GameSpec& spec,
                             const std::vector<int>& joint) {
  linalg::Graph g(spec.n_states);
  for (int k = 0; k < spec.n_states; ++k) {
    auto row = spec.q_row(k, joint[k]);
    for (int j = 0; j < spec.n_states; ++j) {
      if (row[j] > 0.0) g[k].push_back(j);
    }
  }
  return g;
}

// Maximizes v(k) = reward(k,a) + factor * sum_{j not in A} q(j|k,a) v(j) over
// joint-action policies by policy iteration. Returns infeasible as soon as a
// policy with spectral radius >= 1 is met.
template <typename Reward>
WorstCaseMoment MaximizeTaboo(const GameSpec& spec, double factor,
                              const std::vector<bool>& in_a, Reward reward) {
  const int n = spec.n_states;
  const int na = spec.n_joint();
  const std::vector<int> comp = Complement(in_a);
  const int nc = static_cast<int>(comp.size());
  std::vector<int> pos(n, -1);
  for (int i = 0; i < nc; ++i) pos[comp[i]] = i;

  WorstCaseMoment out;
  out.policy.assign(n, 0);
  Eigen::VectorXd vc = Eigen::VectorXd::Zero(nc);

  auto action_value = [&](int k, int a) {
    double s = 0.0;
    auto row = spec.q_row(k, a);
    for (int i = 0; i < nc; ++i) s += row[comp[i]] * vc(i);
    return reward(k, a) + factor * s;
  };

  const int max_rounds = 50 + 10 * n * na;
  for (int round = 0; round < max_rounds; ++round) {
    Eigen::MatrixXd qc(nc, nc);
    Eigen::VectorXd bc(nc);
    for (int i = 0; i < nc; ++i) {
      const int k = comp[i];
      auto row = spec.q_row(k, out.policy[k]);
      for (int j = 0; j < nc; ++j) qc(i, j) = factor * row[comp[j]];
      bc(i) = reward(k, out.policy[k]);
    }
    out.spectral_radius = linalg::SpectralRadius(qc);
    if (!(out.spectral_radius < 1.0)) {
      std::ostringstream os;
      os << "spectral radius " << out.spectral_radius
         << " >= 1 under a pure profile";
      out.detail = os.str();
      out.feasible = false;
      return out;
    }
    try {
      vc = linalg::Solve(Eigen::MatrixXd::Identity(nc, nc) - qc, bc);
    } catch (const Error&) {
      // Spectral radius numerically indistinguishable from 1.
      std::ostringstream os;
      os << "taboo system singular (spectral radius " << out.spectral_radius
         << ") under a pure profile";
      out.detail = os.str();
      out.feasible = false;
      return out;
    }
    bool changed = false;
    for (int i = 0; i < nc; ++i) {
      const int k = comp[i];
      const double current = action_value(k, out.policy[k]);
      int best = out.policy[k];
      double best_value = current;
      for (int a = 0; a < na; ++a) {
        const double val = action_value(k, a);
        if (val > best_value) {
          best_value = val;
          best = a;
        }
      }
      if (best != out.policy[k] &&
          best_value > current + 1e-12 * std::abs(current)) {
        out.policy[k] = best;
        changed = true;
      }
    }
    if (!changed) {
      out.feasible = true;
      out.value = Eigen::VectorXd::Zero(n);
      for (int k = 0; k < n; ++k) {
        if (!in_a[k]) {
          out.value(k) = vc(pos[k]);
          continue;
        }
        double best = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < na; ++a) {
          const double val = action_value(k, a);
          if (val > best) {
            best = val;
            out.policy[k] = a;
          }
        }
        out.value(k) = best;
      }
      return out;
    }
  }
  Fail(ErrorCode::kNumerical, "policy iteration did not terminate");
}

}  // namespace

double DobrushinDelta(const GameSpec& spec) {
  const int n = spec.n_states;
  const int rows = n * spec.n_joint();
  double worst = 0.0;
  for (int x = 0; x < rows; ++x) {
    const double* rx = spec.q.data() + static_cast<std::size_t>(x) * n;
    for (int y = x + 1; y < rows; ++y) {
      const double* ry = spec.q.data() + static_cast<std::size_t>(y) * n;
      double d = 0.0;
      for (int j = 0; j < n; ++j) d += std::abs(rx[j] - ry[j]);
      worst = std::max(worst, d);
    }
  }
  return std::min(1.0, 0.5 * worst);
}

std::vector<int> AvoidingStates(const GameSpec& spec, std::span<const int> a) {
  const int n = spec.n_states;
  const std::vector<bool> in_a = Membership(n, a);
  std::vector<bool> w(n);
  for (int k = 0; k < n; ++k) w[k] = !in_a[k];
  bool changed = true;
  while (changed) {
    changed = false;
    for (int k = 0; k < n; ++k) {
      if (!w[k]) continue;
      bool can_stay = false;
      for (int act = 0; act < spec.n_joint() && !can_stay; ++act) {
        auto row = spec.q_row(k, act);
        bool inside = true;
        for (int j = 0; j < n && inside; ++j) {
          if (row[j] > 0.0 && !w[j]) inside = false;
        }
        can_stay = inside;
      }
      if (!can_stay) {
        w[k] = false;
        changed = true;
      }
    }
  }
  std::vector<int> out;
  for (int k = 0; k < n; ++k) {
    if (w[k]) out.push_back(k);
  }
  return out;
}

IrreducibilityVerdict CheckIrreducibleAperiodic(const GameSpec& spec,
                                                long long enumeration_cap) {
  IrreducibilityVerdict out;
  const int n = spec.n_states;
  for (int target = 0; target < n; ++target) {
    const int t[] = {target};
    const std::vector<int> avoid = AvoidingStates(spec, t);
    if (avoid.empty()) continue;
    // A profile that keeps the avoiding set closed.
    std::vector<bool> in_w(n, false);
    for (int k : avoid) in_w[k] = true;
    std::vector<int> joint(n, 0);
    for (int k : avoid) {
      for (int act = 0; act < spec.n_joint(); ++act) {
        auto row = spec.q_row(k, act);
        bool inside = true;
        for (int j = 0; j < n && inside; ++j) {
          if (row[j] > 0.0 && !in_w[j]) inside = false;
        }
        if (inside) {
          joint[k] = act;
          break;
        }
      }
    }
    out.irreducible = false;
    out.holds = false;
    out.aperiodic = false;
    out.aperiodicity_method = "undetermined";
    out.witness = ProfileFromJoint(spec, joint);
    std::ostringstream os;
    os << "state " << target << " is unreachable from state " << avoid.front()
       << " under the witness profile";
    out.detail = os.str();
    return out;
  }

  if (DobrushinDelta(spec) < 1.0) {
    // Overlapping supports rule out a cyclic class decomposition.
    out.aperiodicity_method = "dobrushin";
    out.detail = "irreducible under every pure profile; delta < 1";
    return out;
  }

  double count = std::pow(static_cast<double>(spec.n_joint()), n);
  if (count > static_cast<double>(enumeration_cap)) {
    out.aperiodic = false;
    out.holds = false;
    out.aperiodicity_method = "undetermined";
    out.detail =
        "irreducible under every pure profile; aperiodicity undetermined "
        "(delta = 1 and too many pure profiles to enumerate)";
    return out;
  }
  out.aperiodicity_method = "enumeration";
  std::vector<int> joint(n, 0);
  while (true) {
    const int d = linalg::Period(SelectionGraph(spec, joint));
    if (d != 1) {
      out.aperiodic = false;
      out.holds = false;
      out.witness = ProfileFromJoint(spec, joint);
      out.detail = "period " + std::to_string(d) + " under the witness profile";
      return out;
    }
    int k = 0;
    while (k < n && ++joint[k] == spec.n_joint()) joint[k++] = 0;
    if (k == n) break;
  }
  out.detail = "irreducible and aperiodic under every pure profile";
  return out;
}

InvariantMeasure InvariantMeasureOf(const StochasticMatrix& p) {
  const int n = static_cast<int>(p.rows());
  if (n == 0 || p.cols() != n) {
    Fail(ErrorCode::kInvalidArgument, "invariant measure needs a square matrix");
  }
  if (!linalg::IsStronglyConnected(linalg::SupportGraph(p))) {
    Fail(ErrorCode::kNumerical,
         "reducible chain: invariant measure is not unique");
  }
  // eta (P - I) = 0 with the last equation replaced by sum(eta) = 1.
  Eigen::MatrixXd a = p.transpose() - Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  a.row(n - 1).setOnes();
  b(n - 1) = 1.0;
  InvariantMeasure out;
  out.eta = linalg::Solve(a, b);
  out.eta = out.eta.cwiseMax(0.0);
  out.eta /= out.eta.sum();
  const double residual =
      (out.eta.transpose() * p - out.eta.transpose()).cwiseAbs().maxCoeff();
  if (residual > 1e-10) {
    std::ostringstream os;
    os << "invariant measure residual " << residual << " exceeds 1e-10";
    Fail(ErrorCode::kNumerical, os.str());
  }
  return out;
}

UniformErgodicityReport UniformErgodicityCheck(const StochasticMatrix& p,
                                               const Vector& eta, double delta,
                                               int t_max) {
  UniformErgodicityReport out;
  const int n = static_cast<int>(p.rows());
  Eigen::MatrixXd pt = Eigen::MatrixXd::Identity(n, n);
  for (int t = 1; t <= t_max; ++t) {
    pt = pt * p;
    ErgodicityMargin m;
    m.t = t;
    for (int k = 0; k < n; ++k) {
      m.tv = std::max(m.tv, (pt.row(k) - eta.transpose()).cwiseAbs().sum());
    }
    m.bound = 2.0 * std::pow(delta, t);
    m.slack = m.bound - m.tv;
    if (m.slack < -1e-9) out.pass = false;
    out.margins.push_back(m);
  }
  return out;
}

Vector ExpectedReturnTime(const StochasticMatrix& p, std::span<const int> a) {
  const int n = static_cast<int>(p.rows());
  const std::vector<bool> in_a = Membership(n, a);
  const std::vector<int> comp = Complement(in_a);
  const int nc = static_cast<int>(comp.size());
  Eigen::MatrixXd q(nc, nc);
  for (int i = 0; i < nc; ++i) {
    for (int j = 0; j < nc; ++j) q(i, j) = p(comp[i], comp[j]);
  }
  Eigen::VectorXd mc;
  try {
    mc = linalg::Solve(Eigen::MatrixXd::Identity(nc, nc) - q,
                       Eigen::VectorXd::Ones(nc));
  } catch (const Error& e) {
    Fail(ErrorCode::kNumerical,
         std::string("taboo system singular (target set unreachable): ") +
             e.what());
  }
  if (nc > 0 && !(mc.minCoeff() > 0.0 && mc.allFinite())) {
    Fail(ErrorCode::kNumerical, "target set unreachable from some state");
  }
  Vector m(n);
  for (int k = 0; k < n; ++k) {
    double s = 1.0;
    for (int i = 0; i < nc; ++i) s += p(k, comp[i]) * mc(i);
    m(k) = s;
  }
  return m;
}

Vector GeometricMoment(const StochasticMatrix& p, double r,
                       std::span<const int> a) {
  if (!(r > 0.0)) Fail(ErrorCode::kInvalidArgument, "R must be positive");
  const int n = static_cast<int>(p.rows());
  const std::vector<bool> in_a = Membership(n, a);
  const std::vector<int> comp = Complement(in_a);
  const int nc = static_cast<int>(comp.size());
  Eigen::MatrixXd rq(nc, nc);
  Eigen::VectorXd bc(nc);
  for (int i = 0; i < nc; ++i) {
    double to_a = 0.0;
    for (int j = 0; j < n; ++j) {
      if (in_a[j]) to_a += p(comp[i], j);
    }
    bc(i) = r * to_a;
    for (int j = 0; j < nc; ++j) rq(i, j) = r * p(comp[i], comp[j]);
  }
  const double rho = linalg::SpectralRadius(rq);
  if (!(rho < 1.0)) {
    std::ostringstream os;
    os << "geometric moment diverges: spectral radius of R * taboo kernel is "
       << rho;
    Fail(ErrorCode::kNumerical, os.str());
  }
  const Eigen::VectorXd gc =
      linalg::Solve(Eigen::MatrixXd::Identity(nc, nc) - rq, bc);
  Vector g(n);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      if (in_a[j]) s += p(k, j);
    }
    for (int i = 0; i < nc; ++i) s += p(k, comp[i]) * gc(i);
    g(k) = r * s;
  }
  return g;
}

WorstCaseMoment WorstCaseGeometricMoment(const GameSpec& spec, double r,
                                         std::span<const int> a) {
  const std::vector<bool> in_a = Membership(spec.n_states, a);
  const std::vector<int> avoid = AvoidingStates(spec, a);
  if (!avoid.empty()) {
    WorstCaseMoment out;
    out.spectral_radius = std::numeric_limits<double>::infinity();
    out.detail = "target set avoidable forever from state " +
                 std::to_string(avoid.front()) + " under some pure profile";
    return out;
  }
  return MaximizeTaboo(spec, r, in_a, [&](int k, int act) {
    double to_a = 0.0;
    auto row = spec.q_row(k, act);
    for (int j = 0; j < spec.n_states; ++j) {
      if (in_a[j]) to_a += row[j];
    }
    return r * to_a;
  });
}

double WorstCaseReturnTime(const GameSpec& spec, std::span<const int> a) {
  const std::vector<bool> in_a = Membership(spec.n_states, a);
  if (!AvoidingStates(spec, a).empty()) {
    Fail(ErrorCode::kNumerical,
         "target set avoidable forever under some pure profile");
  }
  const WorstCaseMoment m =
      MaximizeTaboo(spec, 1.0, in_a, [](int, int) { return 1.0; });
  if (!m.feasible) Fail(ErrorCode::kNumerical, m.detail);
  return m.value.maxCoeff();
}

FeasibleR MaxFeasibleR(const GameSpec& spec, int ref_state,
                       const RecurrenceOptions& options) {
  const int a[] = {ref_state};
  if (!AvoidingStates(spec, a).empty()) {
    Fail(ErrorCode::kAssumption,
         "no feasible R > 1: the reference state is avoidable under some "
         "pure profile");
  }
  auto feasible = [&](double r) {
    return WorstCaseGeometricMoment(spec, r, a).feasible;
  };
  FeasibleR out;
  if (feasible(options.r_max)) {
    out.r_star = options.r_max;
    out.capped = true;
  } else {
    double lo = 1.0, hi = options.r_max;
    while (hi - lo > 1e-13 * hi && out.bisection_steps < 200) {
      const double mid = 0.5 * (lo + hi);
      if (feasible(mid)) {
        lo = mid;
      } else {
        hi = mid;
      }
      ++out.bisection_steps;
    }
    out.r_star = lo;
  }
  out.r0 = (1.0 - options.safety_margin) * out.r_star;
  if (!(out.r0 > 1.0)) {
    std::ostringstream os;
    os << "no feasible R > 1 after the safety margin (R* = " << out.r_star
       << ")";
    Fail(ErrorCode::kAssumption, os.str());
  }
  const WorstCaseMoment m = WorstCaseGeometricMoment(spec, out.r0, a);
  if (!m.feasible) Fail(ErrorCode::kNumerical, m.detail);
  out.b0 = m.value.maxCoeff();
  return out;
}

LyapunovCertificate BuildLyapunovCertificate(const GameSpec& spec, double r0,
                                             std::vector<int> c) {
  if (!(r0 > 1.0)) Fail(ErrorCode::kInvalidArgument, "R0 must exceed 1");
  if (c.empty()) c.push_back(spec.ref_state);
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  const int n = spec.n_states;
  const std::vector<bool> in_c = Membership(n, c);

  LyapunovCertificate out;
  out.c = c;
  out.eta = 1.0 / r0;
  const WorstCaseMoment m = WorstCaseGeometricMoment(spec, r0, c);
  if (!m.feasible) {
    Fail(ErrorCode::kAssumption,
         "Lyapunov function construction failed: " + m.detail);
  }
  out.v = Vector::Ones(n);
  for (int k = 0; k < n; ++k) {
    if (!in_c[k]) out.v(k) = std::max(1.0, m.value(k));
  }
  out.holds = true;
  for (int i = 0; i < n; ++i) {
    for (int act = 0; act < spec.n_joint(); ++act) {
      auto row = spec.q_row(i, act);
      double lhs = 0.0;
      for (int j = 0; j < n; ++j) lhs += out.v(j) * row[j];
      const double drift = out.eta * out.v(i);
      if (in_c[i]) {
        out.b = std::max(out.b, lhs - drift);
        continue;
      }
      const double excess = lhs - drift;
      if (excess > 1e-9 * drift) {
        out.max_violation = std::max(out.max_violation, excess);
        out.holds = false;
        std::ostringstream os;
        os << "drift inequality violated at state " << i << ", action pair ("
           << act / spec.n_actions_v << "," << act % spec.n_actions_v
           << ") by " << excess;
        Fail(ErrorCode::kAssumption, os.str());
      }
    }
  }
  return out;
}

RecurrenceReport CheckAssumptions(const GameSpec& spec,
                                  const RecurrenceOptions& options) {
  ValidateOrThrow(spec);
  RecurrenceReport rep;
  rep.delta = DobrushinDelta(spec);
  rep.a2_holds = rep.delta < 1.0;
  rep.a1 = CheckIrreducibleAperiodic(spec);
  rep.a1_holds = rep.a1.holds;
  rep.norm_r1 = spec.cost_norm(Player::kOne);
  rep.norm_r2 = spec.cost_norm(Player::kTwo);
  const int ref[] = {spec.ref_state};
  try {
    rep.recurrence = MaxFeasibleR(spec, spec.ref_state, options);
  } catch (const Error& e) {
    rep.errors.push_back(std::string("recurrence: ") + e.what());
  }
  try {
    rep.l0 = WorstCaseReturnTime(spec, ref);
  } catch (const Error& e) {
    rep.errors.push_back(std::string("mean return time: ") + e.what());
  }
  if (rep.recurrence) {
    try {
      rep.lyapunov = BuildLyapunovCertificate(spec, rep.recurrence->r0);
    } catch (const Error& e) {
      rep.errors.push_back(std::string("lyapunov: ") + e.what());
    }
    rep.a3_threshold = std::log(rep.recurrence->r0) / (3.0 * spec.theta_max);
    rep.a3_holds =
        rep.norm_r1 <= *rep.a3_threshold && rep.norm_r2 <= *rep.a3_threshold;
  }
  return rep;
}

}  // namespace rsgame::markov
