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

#include "mc_simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <thread>

#include "error.hpp"

namespace rsgame::mc {
namespace {

int Draw(std::mt19937_64& eng, std::span<const double> p) {
  const double x = Uniform01(eng);
  double acc = 0.0;
  int last = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    acc += p[i];
    last = static_cast<int>(i);
    if (x < acc) return last;
  }
  return last;
}

int StartState(const GameSpec& spec, int start) {
  const int s = start < 0 ? spec.ref_state : start;
  if (s >= spec.n_states) {
    Fail(ErrorCode::kInvalidArgument, "start state out of range");
  }
  return s;
}

// One transition from k under a stationary stage profile.
struct Step {
  int u, v, next;
};

Step Advance(const GameSpec& spec, const StationaryProfile& stage, int k,
             std::mt19937_64& eng) {
  Step s;
  s.u = Draw(eng, stage.mu[k].weights);
  s.v = Draw(eng, stage.nu[k].weights);
  s.next = Draw(eng, spec.q_row(k, s.u, s.v));
  return s;
}

// Runs body(i) for i in [0, n) on up to `threads` workers in contiguous
// blocks. Results are written by index, so aggregation order is fixed.
void ParallelFor(long long n, int threads,
                 const std::function<void(long long)>& body) {
  const int workers =
      static_cast<int>(std::min<long long>(ResolveThreads(threads), n));
  if (workers <= 1) {
    for (long long i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  const long long chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const long long lo = w * chunk;
    const long long hi = std::min(n, lo + chunk);
    pool.emplace_back([lo, hi, &body] {
      for (long long i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

struct LogMeanExp {
  double log_mean = 0.0;
  double rel_stderr = 0.0;  // stderr of the mean divided by the mean
  double ess = 0.0;
};

// log(mean exp(x_i)) with the delta-method relative error.
LogMeanExp Summarize(const std::vector<double>& x) {
  LogMeanExp out;
  const double n = static_cast<double>(x.size());
  const double m = *std::max_element(x.begin(), x.end());
  double s1 = 0.0, s2 = 0.0;
  for (double xi : x) {
    const double y = std::exp(xi - m);
    s1 += y;
    s2 += y * y;
  }
  const double mean = s1 / n;
  out.log_mean = m + std::log(mean);
  double var = 0.0;
  if (x.size() > 1) {
    for (double xi : x) {
      const double d = std::exp(xi - m) - mean;
      var += d * d;
    }
    var /= n - 1.0;
  }
  out.rel_stderr = std::sqrt(var / n) / mean;
  out.ess = s1 * s1 / s2;
  return out;
}

void CheckCounts(long long n, int horizon) {
  if (n <= 0) Fail(ErrorCode::kInvalidArgument, "path count must be positive");
  if (horizon <= 0) Fail(ErrorCode::kInvalidArgument, "horizon must be positive");
}

}  // namespace

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::mt19937_64 PathEngine(std::uint64_t seed, std::uint64_t path) {
  return std::mt19937_64(SplitMix64(seed ^ SplitMix64(path)));
}

double Uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

int ResolveThreads(int threads) {
  if (threads > 0) return threads;
  if (const char* env = std::getenv("RSGAME_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Trajectory Simulate(const GameSpec& spec, const StationaryProfile& profile,
                    int horizon, std::uint64_t seed, int start_state) {
  MarkovProfile m;
  m.stages.assign(horizon, profile);
  return Simulate(spec, m, horizon, seed, start_state);
}

Trajectory Simulate(const GameSpec& spec, const MarkovProfile& profile,
                    int horizon, std::uint64_t seed, int start_state) {
  ValidateOrThrow(spec);
  CheckProfile(spec, profile);
  if (horizon < 0 || horizon > profile.horizon()) {
    Fail(ErrorCode::kInvalidArgument, "horizon exceeds the profile length");
  }
  std::mt19937_64 eng = PathEngine(seed, 0);
  Trajectory tr;
  int k = StartState(spec, start_state);
  tr.states.push_back(k);
  for (int t = 0; t < horizon; ++t) {
    const Step s = Advance(spec, profile.stages[t], k, eng);
    tr.u.push_back(s.u);
    tr.v.push_back(s.v);
    tr.cost1.push_back(spec.r(Player::kOne, k, s.u, s.v));
    tr.cost2.push_back(spec.r(Player::kTwo, k, s.u, s.v));
    k = s.next;
    tr.states.push_back(k);
  }
  return tr;
}

EstimatorReport EstimateDiscountedCost(const GameSpec& spec,
                                       const StationaryProfile& profile,
                                       Player player, int horizon,
                                       long long n_paths, std::uint64_t seed,
                                       const McOptions& options) {
  CheckCounts(n_paths, horizon);
  MarkovProfile m;
  m.stages.assign(horizon, profile);
  return EstimateDiscountedCost(spec, m, player, horizon, n_paths, seed,
                                options);
}

EstimatorReport EstimateDiscountedCost(const GameSpec& spec,
                                       const MarkovProfile& profile,
                                       Player player, int horizon,
                                       long long n_paths, std::uint64_t seed,
                                       const McOptions& options) {
  ValidateOrThrow(spec);
  CheckProfile(spec, profile);
  CheckCounts(n_paths, horizon);
  if (horizon > profile.horizon()) {
    Fail(ErrorCode::kInvalidArgument, "horizon exceeds the profile length");
  }
  const int start = StartState(spec, options.start_state);
  std::vector<double> sums(n_paths);
  ParallelFor(n_paths, options.threads, [&](long long i) {
    std::mt19937_64 eng = PathEngine(seed, static_cast<std::uint64_t>(i));
    int k = start;
    double disc = 1.0, s = 0.0;
    for (int t = 0; t < horizon; ++t) {
      const Step st = Advance(spec, profile.stages[t], k, eng);
      s += disc * spec.r(player, k, st.u, st.v);
      disc *= spec.alpha;
      k = st.next;
    }
    sums[i] = s;
  });
  std::vector<double> scaled(n_paths);
  for (long long i = 0; i < n_paths; ++i) scaled[i] = spec.theta * sums[i];
  const LogMeanExp lme = Summarize(scaled);
  EstimatorReport rep;
  rep.estimator_kind = "discounted";
  rep.point = lme.log_mean / spec.theta;
  rep.stderr_ = lme.rel_stderr / spec.theta;
  rep.n_paths = n_paths;
  rep.seed = seed;
  rep.horizon = horizon;
  rep.effective_sample_size = lme.ess;
  rep.samples = std::move(sums);
  return rep;
}

EstimatorReport EstimateErgodicCost(const GameSpec& spec,
                                    const StationaryProfile& profile,
                                    Player player, int horizon,
                                    long long n_batches, std::uint64_t seed,
                                    const McOptions& options) {
  ValidateOrThrow(spec);
  CheckProfile(spec, profile);
  CheckCounts(n_batches, horizon);
  const int start = StartState(spec, options.start_state);
  std::vector<double> sums(n_batches);
  ParallelFor(n_batches, options.threads, [&](long long i) {
    std::mt19937_64 eng = PathEngine(seed, static_cast<std::uint64_t>(i));
    int k = start;
    double s = 0.0;
    for (int t = 0; t < horizon; ++t) {
      const Step st = Advance(spec, profile, k, eng);
      s += spec.r(player, k, st.u, st.v);
      k = st.next;
    }
    sums[i] = s;
  });
  std::vector<double> scaled(n_batches);
  for (long long i = 0; i < n_batches; ++i) scaled[i] = spec.theta * sums[i];
  const LogMeanExp lme = Summarize(scaled);
  EstimatorReport rep;
  rep.estimator_kind = "ergodic-batch";
  rep.point = lme.log_mean / (spec.theta * horizon);
  rep.stderr_ = lme.rel_stderr / (spec.theta * horizon);
  rep.n_paths = n_batches;
  rep.seed = seed;
  rep.horizon = horizon;
  rep.effective_sample_size = lme.ess;
  rep.samples = std::move(sums);
  rep.notes.push_back(
      "log-mean-exp over batches is biased by O(1/n_batches); exponential "
      "weights are heavy-tailed, so check effective_sample_size against "
      "n_paths");
  if (lme.ess < 0.1 * static_cast<double>(n_batches)) {
    rep.flagged = true;
    rep.notes.push_back("effective sample size below 10% of batches");
  }
  return rep;
}

EstimatorReport SampleReturnTime(const GameSpec& spec,
                                 const StationaryProfile& profile,
                                 int target_state, long long n_paths, double r,
                                 std::uint64_t seed,
                                 const McOptions& options) {
  ValidateOrThrow(spec);
  CheckProfile(spec, profile);
  CheckCounts(n_paths, 1);
  if (target_state < 0 || target_state >= spec.n_states) {
    Fail(ErrorCode::kInvalidArgument, "target state out of range");
  }
  if (!(r >= 1.0)) Fail(ErrorCode::kInvalidArgument, "R must be at least 1");
  const long long cap = options.censor_cap;
  std::vector<long long> sigma(n_paths);
  ParallelFor(n_paths, options.threads, [&](long long i) {
    std::mt19937_64 eng = PathEngine(seed, static_cast<std::uint64_t>(i));
    int k = target_state;
    long long t = 0;
    do {
      k = Advance(spec, profile, k, eng).next;
      ++t;
    } while (k != target_state && t < cap);
    sigma[i] = k == target_state ? t : -1;
  });
  EstimatorReport rep;
  rep.estimator_kind = "return-time-moment";
  rep.n_paths = n_paths;
  rep.seed = seed;
  double s1 = 0.0, s2 = 0.0, m1 = 0.0, m2 = 0.0;
  long long ok = 0;
  for (long long i = 0; i < n_paths; ++i) {
    if (sigma[i] < 0) {
      ++rep.n_censored;
      rep.samples.push_back(-1.0);
      continue;
    }
    const double s = static_cast<double>(sigma[i]);
    const double w = std::pow(r, s);
    rep.samples.push_back(s);
    s1 += w;
    s2 += w * w;
    m1 += s;
    m2 += s * s;
    ++ok;
  }
  if (ok > 0) {
    const double n = static_cast<double>(ok);
    rep.point = s1 / n;
    rep.mean_sigma = m1 / n;
    if (ok > 1) {
      rep.stderr_ = std::sqrt(std::max(0.0, (s2 - n * rep.point * rep.point) /
                                                (n - 1.0) / n));
      rep.mean_sigma_stderr = std::sqrt(std::max(
          0.0, (m2 - n * rep.mean_sigma * rep.mean_sigma) / (n - 1.0) / n));
    }
  } else {
    rep.point = std::numeric_limits<double>::infinity();
    rep.mean_sigma = std::numeric_limits<double>::infinity();
  }
  if (rep.n_censored * 100 > n_paths) {
    rep.flagged = true;
    rep.notes.push_back("more than 1% of paths hit the censoring cap");
  }
  if (!std::isfinite(rep.point)) rep.flagged = true;
  return rep;
}

}  // namespace rsgame::mc
