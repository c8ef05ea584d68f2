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

#include "rsgame/rsgame.h"

#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "discounted_solver.hpp"
#include "ergodic_solver.hpp"
#include "error.hpp"
#include "markov_analysis.hpp"
#include "mc_simulator.hpp"
#include "serialization.hpp"

struct rsg_game {
  rsgame::GameSpec spec;
  std::string hash;
};

struct rsg_result {
  std::string json;
  std::string csv;
  bool passed = false;
};

namespace {

using rsgame::ErrorCode;
using rsgame::Fail;
using rsgame::GameSpec;
using rsgame::Player;
using rsgame::io::json;

thread_local std::string g_last_error;

rsg_status ToStatus(ErrorCode c) {
  switch (c) {
    case ErrorCode::kInvalidArgument: return RSG_ERR_INVALID_ARGUMENT;
    case ErrorCode::kInvalidSpec: return RSG_ERR_INVALID_SPEC;
    case ErrorCode::kAssumption: return RSG_ERR_ASSUMPTION;
    case ErrorCode::kNumerical: return RSG_ERR_NUMERICAL;
    case ErrorCode::kIo: return RSG_ERR_IO;
  }
  return RSG_ERR_INTERNAL;
}

template <typename F>
rsg_status Guard(F&& body) {
  g_last_error.clear();
  try {
    return body();
  } catch (const rsgame::Error& e) {
    g_last_error = e.what();
    return ToStatus(e.code());
  } catch (const json::exception& e) {
    g_last_error = std::string("malformed solution: ") + e.what();
    return RSG_ERR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return RSG_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RSG_ERR_INTERNAL;
  }
}

rsg_result* NewResult(const json& j, bool passed) {
  auto* r = new rsg_result;
  r->json = j.dump(2);
  r->json.push_back('\n');
  r->passed = passed;
  return r;
}

void Need(const void* p, const char* what) {
  if (p == nullptr) {
    Fail(ErrorCode::kInvalidArgument, std::string(what) + " is NULL");
  }
}

json ParseSolution(const rsg_game* game, const char* text) {
  json sol;
  try {
    sol = json::parse(text);
  } catch (const json::exception& e) {
    Fail(ErrorCode::kInvalidArgument,
         std::string("malformed solution JSON: ") + e.what());
  }
  if (!sol.is_object() || !sol.contains("kind") ||
      !sol.contains("spec_hash")) {
    Fail(ErrorCode::kInvalidArgument, "solution lacks 'kind' or 'spec_hash'");
  }
  if (sol.at("spec_hash").get<std::string>() != game->hash) {
    Fail(ErrorCode::kInvalidArgument,
         "solution was computed for a different spec (hash mismatch)");
  }
  return sol;
}

json Compare(const rsgame::mc::EstimatorReport& r, double exact) {
  json j = rsgame::io::ToJson(r);
  j["exact"] = exact;
  j["z_score"] = r.stderr_ > 0.0 ? (r.point - exact) / r.stderr_
                                 : (r.point == exact ? 0.0 : 1e300);
  return j;
}

std::string SumsCsv(const char* label, const std::vector<double>& a,
                    const std::vector<double>& b) {
  std::ostringstream os;
  os.precision(17);
  os << label << ",sum_cost_1,sum_cost_2\n";
  for (std::size_t i = 0; i < a.size(); ++i) {
    os << i << ',' << a[i] << ',' << b[i] << '\n';
  }
  return os.str();
}

}  // namespace

extern "C" {

const char* rsg_version(void) { return "0.1.0"; }

const char* rsg_last_error(void) { return g_last_error.c_str(); }

rsg_status rsg_sha256_hex(const void* data, size_t len, char* out) {
  return Guard([&] {
    Need(out, "out");
    if (len > 0) Need(data, "data");
    const std::string h = rsgame::io::Sha256Hex(
        std::string(static_cast<const char*>(data), len));
    std::memcpy(out, h.c_str(), h.size() + 1);
    return RSG_OK;
  });
}

rsg_status rsg_game_from_json(const char* text, rsg_game** out) {
  return Guard([&] {
    Need(text, "text");
    Need(out, "out");
    *out = nullptr;
    auto* g = new rsg_game;
    try {
      g->spec = rsgame::io::SpecFromText(text);
      g->hash = rsgame::io::SpecHash(g->spec);
    } catch (...) {
      delete g;
      throw;
    }
    *out = g;
    return RSG_OK;
  });
}

rsg_status rsg_game_from_file(const char* path, rsg_game** out) {
  return Guard([&] {
    Need(path, "path");
    Need(out, "out");
    *out = nullptr;
    std::ifstream in(path, std::ios::binary);
    if (!in) Fail(ErrorCode::kIo, std::string("cannot open ") + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return rsg_game_from_json(ss.str().c_str(), out);
  });
}

void rsg_game_free(rsg_game* game) { delete game; }

rsg_status rsg_game_hash(const rsg_game* game, char* out) {
  return Guard([&] {
    Need(game, "game");
    Need(out, "out");
    std::memcpy(out, game->hash.c_str(), game->hash.size() + 1);
    return RSG_OK;
  });
}

int rsg_game_n_states(const rsg_game* game) {
  return game ? game->spec.n_states : 0;
}

void rsg_check_options_default(rsg_check_options* o) {
  const rsgame::markov::RecurrenceOptions d;
  o->safety_margin = d.safety_margin;
  o->r_max = d.r_max;
}

void rsg_discounted_options_default(rsg_discounted_options* o) {
  o->eps = 1e-8;
  o->horizon = 0;
  o->verify_tol = 1e-8;
}

void rsg_ergodic_options_default(rsg_ergodic_options* o) {
  const rsgame::ergodic::NashSearchConfig d;
  o->verify_tol = d.verify_tol;
  o->damping = d.damping;
  o->stage_sweeps = d.stage_sweeps;
  o->fallback_cap = d.fallback_cap;
  o->max_rounds = d.max_rounds;
  o->force = 0;
}

void rsg_simulate_options_default(rsg_simulate_options* o) {
  o->seed = 1;
  o->paths = 100000;
  o->horizon = 0;
  o->batches = 200;
  o->threads = 0;
  o->censor_cap = 1000000;
}

void rsg_verify_options_default(rsg_verify_options* o) { o->tol = 0.0; }

rsg_status rsg_check_assumptions(const rsg_game* game,
                                 const rsg_check_options* opts,
                                 rsg_result** out) {
  return Guard([&] {
    Need(game, "game");
    Need(out, "out");
    *out = nullptr;
    rsg_check_options o;
    rsg_check_options_default(&o);
    if (opts) o = *opts;
    rsgame::markov::RecurrenceOptions ro;
    ro.safety_margin = o.safety_margin;
    ro.r_max = o.r_max;
    const auto rep = rsgame::markov::CheckAssumptions(game->spec, ro);
    json j = rsgame::io::ToJson(rep);
    j["spec_hash"] = game->hash;
    *out = NewResult(j, rep.all_hold());
    return RSG_OK;
  });
}

rsg_status rsg_solve_discounted(const rsg_game* game,
                                const rsg_discounted_options* opts,
                                rsg_result** out) {
  return Guard([&] {
    Need(game, "game");
    Need(out, "out");
    *out = nullptr;
    rsg_discounted_options o;
    rsg_discounted_options_default(&o);
    if (opts) o = *opts;
    rsgame::discounted::DiscountedOptions d;
    d.eps = o.eps;
    d.horizon = o.horizon;
    const auto sol = rsgame::discounted::SolveDiscounted(game->spec, d);
    const auto ver = rsgame::discounted::VerifyNashDiscounted(
        game->spec, sol.profile, o.verify_tol, sol.values.tail_bound);
    *out = NewResult(rsgame::io::DiscountedSolutionJson(game->spec, sol, ver),
                     ver.pass);
    return RSG_OK;
  });
}

rsg_status rsg_solve_ergodic(const rsg_game* game,
                             const rsg_ergodic_options* opts,
                             rsg_result** out) {
  return Guard([&] {
    Need(game, "game");
    Need(out, "out");
    *out = nullptr;
    rsg_ergodic_options o;
    rsg_ergodic_options_default(&o);
    if (opts) o = *opts;
    const auto rep = rsgame::markov::CheckAssumptions(game->spec);
    json warnings = json::array();
    if (!rep.all_hold()) {
      if (!o.force) {
        json j{{"kind", "assumption-failure"},
               {"spec_hash", game->hash},
               {"recurrence_report", rsgame::io::ToJson(rep)}};
        *out = NewResult(j, false);
        g_last_error = "assumptions do not hold; rerun with force to solve";
        return RSG_ERR_ASSUMPTION;
      }
      warnings.push_back(
          "assumptions a1-a3 do not all hold; solved anyway because force was "
          "set, so existence and uniqueness guarantees do not apply");
    }
    rsgame::ergodic::NashSearchConfig cfg;
    cfg.verify_tol = o.verify_tol;
    cfg.damping = o.damping;
    cfg.stage_sweeps = o.stage_sweeps;
    cfg.fallback_cap = o.fallback_cap;
    cfg.max_rounds = o.max_rounds;
    const auto outcome = rsgame::ergodic::NashSearchErgodic(game->spec, cfg);
    json j = rsgame::io::ErgodicOutcomeJson(game->spec, outcome, rep);
    j["warnings"] = warnings;
    const bool passed = outcome.found && outcome.verification->pass;
    *out = NewResult(j, passed);
    if (!outcome.found) {
      g_last_error = outcome.failure_reason;
      return RSG_ERR_SEARCH_FAILED;
    }
    return RSG_OK;
  });
}

rsg_status rsg_simulate(const rsg_game* game, const char* solution_json,
                        const rsg_simulate_options* opts, rsg_result** out) {
  return Guard([&] {
    Need(game, "game");
    Need(out, "out");
    *out = nullptr;
    rsg_simulate_options o;
    rsg_simulate_options_default(&o);
    if (opts) o = *opts;
    const GameSpec& spec = game->spec;
    rsgame::mc::McOptions mo;
    mo.threads = o.threads;
    mo.censor_cap = o.censor_cap;
    json j{{"kind", "simulation"}, {"spec_hash", game->hash},
           {"seed", o.seed}};
    std::string csv;

    std::string kind = "none";
    json sol;
    if (solution_json) {
      sol = ParseSolution(game, solution_json);
      kind = sol.at("kind").get<std::string>();
    }
    if (kind == "discounted") {
      const auto profile = rsgame::io::MarkovFromJson(sol.at("profile"));
      const int horizon = o.horizon > 0 ? o.horizon : profile.horizon();
      if (horizon > profile.horizon()) {
        Fail(ErrorCode::kInvalidArgument,
             "horizon exceeds the solution's horizon");
      }
      // psi from the solution is exact only for the full horizon.
      const bool full = horizon == profile.horizon();
      const auto r1 = rsgame::mc::EstimateDiscountedCost(
          spec, profile, Player::kOne, horizon, o.paths, o.seed, mo);
      const auto r2 = rsgame::mc::EstimateDiscountedCost(
          spec, profile, Player::kTwo, horizon, o.paths, o.seed, mo);
      const int ref = spec.ref_state;
      j["discounted"] = {
          {"start_state", ref},
          {"player1", full ? Compare(r1, sol.at("psi1").at(ref).get<double>())
                           : rsgame::io::ToJson(r1)},
          {"player2", full ? Compare(r2, sol.at("psi2").at(ref).get<double>())
                           : rsgame::io::ToJson(r2)}};
      csv = SumsCsv("path", r1.samples, r2.samples);
    } else if (kind == "ergodic" || kind == "none") {
      const auto profile =
          kind == "ergodic"
              ? rsgame::io::StationaryFromJson(sol.at("profile"))
              : rsgame::StationaryProfile::Uniform(spec);
      rsgame::CheckProfile(spec, profile);
      const int horizon = o.horizon > 0 ? o.horizon : 2000;
      const auto r1 = rsgame::mc::EstimateErgodicCost(
          spec, profile, Player::kOne, horizon, o.batches, o.seed, mo);
      const auto r2 = rsgame::mc::EstimateErgodicCost(
          spec, profile, Player::kTwo, horizon, o.batches, o.seed, mo);
      if (kind == "ergodic") {
        j["ergodic"] = {
            {"player1", Compare(r1, sol.at("lambda1").get<double>())},
            {"player2", Compare(r2, sol.at("lambda2").get<double>())}};
      } else {
        j["ergodic"] = {{"player1", rsgame::io::ToJson(r1)},
                        {"player2", rsgame::io::ToJson(r2)}};
      }
      double r = 1.0;
      if (kind == "ergodic") {
        const json& rec = sol.at("recurrence_report").at("recurrence");
        if (rec.is_object()) r = rec.at("R0").get<double>();
      }
      const auto rt = rsgame::mc::SampleReturnTime(
          spec, profile, spec.ref_state, o.paths, r, o.seed, mo);
      const auto p = rsgame::InducedKernel(spec, profile);
      const int a[] = {spec.ref_state};
      json rtj = rsgame::io::ToJson(rt);
      rtj["R"] = r;
      try {
        rtj["exact"] = rsgame::markov::GeometricMoment(p, r, a)(spec.ref_state);
        rtj["exact_mean_sigma"] =
            rsgame::markov::ExpectedReturnTime(p, a)(spec.ref_state);
      } catch (const rsgame::Error& e) {
        rtj["exact_error"] = e.what();
      }
      j["return_time"] = rtj;
      csv = SumsCsv("batch", r1.samples, r2.samples);
    } else {
      Fail(ErrorCode::kInvalidArgument, "cannot simulate a '" + kind + "'");
    }
    rsg_result* res = NewResult(j, true);
    res->csv = std::move(csv);
    *out = res;
    return RSG_OK;
  });
}

rsg_status rsg_verify(const rsg_game* game, const char* solution_json,
                      const rsg_verify_options* opts, rsg_result** out) {
  return Guard([&] {
    Need(game, "game");
    Need(solution_json, "solution_json");
    Need(out, "out");
    *out = nullptr;
    rsg_verify_options o;
    rsg_verify_options_default(&o);
    if (opts) o = *opts;
    const json sol = ParseSolution(game, solution_json);
    const std::string kind = sol.at("kind").get<std::string>();
    const GameSpec& spec = game->spec;
    if (kind == "discounted") {
      const auto profile = rsgame::io::MarkovFromJson(sol.at("profile"));
      rsgame::CheckProfile(spec, profile);
      const double tol = o.tol > 0.0 ? o.tol : 1e-8;
      const double tail = rsgame::discounted::TailBound(
          spec.theta, spec.alpha, spec.max_cost_norm(), profile.horizon());
      const auto ver =
          rsgame::discounted::VerifyNashDiscounted(spec, profile, tol, tail);
      json j{{"kind", "discounted-verification"},
             {"spec_hash", game->hash},
             {"horizon", profile.horizon()},
             {"tail_bound", tail},
             {"verification", rsgame::io::ToJson(ver)}};
      *out = NewResult(j, ver.pass);
      return RSG_OK;
    }
    if (kind == "ergodic") {
      const auto profile = rsgame::io::StationaryFromJson(sol.at("profile"));
      rsgame::CheckProfile(spec, profile);
      const double tol = o.tol > 0.0 ? o.tol : 1e-7;
      const auto ver = rsgame::ergodic::VerifyNashErgodic(spec, profile, tol);
      json j{{"kind", "ergodic-verification"},
             {"spec_hash", game->hash},
             {"verification", rsgame::io::ToJson(ver)}};
      *out = NewResult(j, ver.pass);
      return RSG_OK;
    }
    Fail(ErrorCode::kInvalidArgument, "cannot verify a '" + kind + "'");
  });
}

const char* rsg_result_json(const rsg_result* result) {
  return result ? result->json.c_str() : "";
}

const char* rsg_result_csv(const rsg_result* result) {
  return result ? result->csv.c_str() : "";
}

int rsg_result_passed(const rsg_result* result) {
  return result && result->passed ? 1 : 0;
}

void rsg_result_free(rsg_result* result) { delete result; }

}  // extern "C"
