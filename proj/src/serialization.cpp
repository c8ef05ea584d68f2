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

#include "serialization.hpp"

#include <cmath>
#include <sstream>

#include <openssl/evp.h>

#include "error.hpp"

namespace rsgame::io {
namespace {

[[noreturn]] void Bad(const std::string& msg) {
  Fail(ErrorCode::kInvalidSpec, msg);
}

const json& Field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    Bad(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

double Number(const json& j, const std::string& where) {
  if (!j.is_number()) Bad(where + " is not a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) Bad(where + " is not finite");
  return x;
}

int PositiveInt(const json& j, const char* key) {
  const json& f = Field(j, key);
  if (!f.is_number_integer() || f.get<long long>() <= 0 ||
      f.get<long long>() > 1000000) {
    Bad(std::string("'") + key + "' must be a positive integer");
  }
  return f.get<int>();
}

const json& Array(const json& j, std::size_t n, const std::string& where) {
  if (!j.is_array() || j.size() != n) {
    std::ostringstream os;
    os << where << " must be an array of length " << n;
    Bad(os.str());
  }
  return j;
}

void ReadCost(const json& j, const GameSpec& s, std::vector<double>& out,
              const char* name) {
  const json& a = Array(Field(j, name), s.n_states, name);
  for (int k = 0; k < s.n_states; ++k) {
    const std::string wk = std::string(name) + "[" + std::to_string(k) + "]";
    const json& ak = Array(a[k], s.n_actions_u, wk);
    for (int u = 0; u < s.n_actions_u; ++u) {
      const std::string wu = wk + "[" + std::to_string(u) + "]";
      const json& au = Array(ak[u], s.n_actions_v, wu);
      for (int v = 0; v < s.n_actions_v; ++v) {
        out[s.cost_index(k, u, v)] =
            Number(au[v], wu + "[" + std::to_string(v) + "]");
      }
    }
  }
}

MixedAction MixedFromJson(const json& j) {
  if (!j.is_array()) Bad("mixed action must be an array");
  MixedAction m;
  for (std::size_t i = 0; i < j.size(); ++i) {
    m.weights.push_back(Number(j[i], "mixed action weight"));
  }
  return m;
}

json MixedList(const std::vector<MixedAction>& v) {
  json out = json::array();
  for (const MixedAction& m : v) out.push_back(m.weights);
  return out;
}

}  // namespace

GameSpec SpecFromJson(const json& j) {
  if (!j.is_object()) Bad("spec must be a JSON object");
  GameSpec s = GameSpec::Zeros(PositiveInt(j, "n_states"),
                               PositiveInt(j, "n_actions_u"),
                               PositiveInt(j, "n_actions_v"));
  ReadCost(j, s, s.r1, "r1");
  ReadCost(j, s, s.r2, "r2");
  const json& q = Array(Field(j, "q"), s.n_states, "q");
  for (int k = 0; k < s.n_states; ++k) {
    const std::string wk = "q[" + std::to_string(k) + "]";
    const json& qk = Array(q[k], s.n_actions_u, wk);
    for (int u = 0; u < s.n_actions_u; ++u) {
      const std::string wu = wk + "[" + std::to_string(u) + "]";
      const json& qu = Array(qk[u], s.n_actions_v, wu);
      for (int v = 0; v < s.n_actions_v; ++v) {
        const std::string wv = wu + "[" + std::to_string(v) + "]";
        const json& row = Array(qu[v], s.n_states, wv);
        auto dst = s.q_row_mut(k, u, v);
        for (int n = 0; n < s.n_states; ++n) {
          dst[n] = Number(row[n], wv + "[" + std::to_string(n) + "]");
        }
      }
    }
  }
  s.theta = Number(Field(j, "theta"), "theta");
  s.theta_max = Number(Field(j, "theta_max"), "theta_max");
  s.alpha = Number(Field(j, "alpha"), "alpha");
  if (j.contains("ref_state")) {
    const json& r = j.at("ref_state");
    if (!r.is_number_integer()) Bad("'ref_state' must be an integer");
    s.ref_state = r.get<int>();
  }
  ValidateOrThrow(s);
  return s;
}

GameSpec SpecFromText(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    Bad(std::string("malformed JSON: ") + e.what());
  }
  return SpecFromJson(j);
}

json SpecToJson(const GameSpec& s) {
  json r1 = json::array(), r2 = json::array(), q = json::array();
  for (int k = 0; k < s.n_states; ++k) {
    json a1 = json::array(), a2 = json::array(), aq = json::array();
    for (int u = 0; u < s.n_actions_u; ++u) {
      json b1 = json::array(), b2 = json::array(), bq = json::array();
      for (int v = 0; v < s.n_actions_v; ++v) {
        b1.push_back(s.r(Player::kOne, k, u, v));
        b2.push_back(s.r(Player::kTwo, k, u, v));
        auto row = s.q_row(k, u, v);
        bq.push_back(std::vector<double>(row.begin(), row.end()));
      }
      a1.push_back(b1);
      a2.push_back(b2);
      aq.push_back(bq);
    }
    r1.push_back(a1);
    r2.push_back(a2);
    q.push_back(aq);
  }
  return json{{"n_states", s.n_states},   {"n_actions_u", s.n_actions_u},
              {"n_actions_v", s.n_actions_v}, {"r1", r1},
              {"r2", r2},                 {"q", q},
              {"theta", s.theta},         {"theta_max", s.theta_max},
              {"alpha", s.alpha},         {"ref_state", s.ref_state}};
}

std::string Sha256Hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) !=
      1) {
    Fail(ErrorCode::kIo, "SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

std::string SpecHash(const GameSpec& spec) {
  return Sha256Hex(SpecToJson(spec).dump());
}

json ToJson(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

json ToJson(const StationaryProfile& p) {
  return json{{"mu", MixedList(p.mu)}, {"nu", MixedList(p.nu)}};
}

json ToJson(const MarkovProfile& p) {
  json stages = json::array();
  for (const auto& s : p.stages) stages.push_back(ToJson(s));
  return json{{"horizon", p.horizon()}, {"stages", stages}};
}

StationaryProfile StationaryFromJson(const json& j) {
  StationaryProfile p;
  for (const char* side : {"mu", "nu"}) {
    const json& a = Field(j, side);
    if (!a.is_array()) Bad(std::string("'") + side + "' must be an array");
    auto& dst = side[0] == 'm' ? p.mu : p.nu;
    for (const json& m : a) dst.push_back(MixedFromJson(m));
  }
  return p;
}

MarkovProfile MarkovFromJson(const json& j) {
  const json& st = Field(j, "stages");
  if (!st.is_array() || st.empty()) Bad("'stages' must be a non-empty array");
  MarkovProfile p;
  for (const json& s : st) p.stages.push_back(StationaryFromJson(s));
  return p;
}

json ToJson(const markov::RecurrenceReport& r) {
  json a1{{"irreducible", r.a1.irreducible},
          {"aperiodic", r.a1.aperiodic},
          {"holds", r.a1_holds},
          {"aperiodicity_method", r.a1.aperiodicity_method},
          {"detail", r.a1.detail}};
  if (r.a1.witness) a1["witness"] = ToJson(*r.a1.witness);
  json out{{"delta", r.delta},
           {"a1", a1},
           {"a2", {{"holds", r.a2_holds}, {"delta", r.delta}}},
           {"a3",
            {{"holds", r.a3_holds},
             {"norm_r1", r.norm_r1},
             {"norm_r2", r.norm_r2},
             {"threshold", r.a3_threshold ? json(*r.a3_threshold) : json()}}},
           {"all_hold", r.all_hold()},
           {"errors", r.errors}};
  if (r.recurrence) {
    out["recurrence"] = {{"r_star", r.recurrence->r_star},
                         {"R0", r.recurrence->r0},
                         {"B0", r.recurrence->b0},
                         {"capped", r.recurrence->capped},
                         {"bisection_steps", r.recurrence->bisection_steps}};
  } else {
    out["recurrence"] = nullptr;
  }
  out["L0"] = r.l0 ? json(*r.l0) : json();
  if (r.lyapunov) {
    out["lyapunov"] = {{"V", ToJson(r.lyapunov->v)},
                       {"eta", r.lyapunov->eta},
                       {"b", r.lyapunov->b},
                       {"C", r.lyapunov->c},
                       {"holds", r.lyapunov->holds},
                       {"max_violation", r.lyapunov->max_violation}};
  } else {
    out["lyapunov"] = nullptr;
  }
  return out;
}

json ToJson(const discounted::DiscountedVerification& v) {
  auto gap = [](const discounted::PlayerGap& g) {
    return json{{"gap_exp", ToJson(g.gap_exp)},
                {"gap_psi", ToJson(g.gap_psi)},
                {"max_gap", g.max_gap}};
  };
  return json{{"player1", gap(v.player1)},
              {"player2", gap(v.player2)},
              {"tol", v.tol},
              {"tail_slack", v.tail_slack},
              {"pass", v.pass}};
}

json ToJson(const ergodic::ErgodicVerification& v) {
  return json{{"lambda_profile", {v.lambda_profile1, v.lambda_profile2}},
              {"lambda_best_response", {v.lambda_star1, v.lambda_star2}},
              {"gap1", v.gap1},
              {"gap2", v.gap2},
              {"state_regret1", v.state_regret1},
              {"state_regret2", v.state_regret2},
              {"tol", v.tol},
              {"pass", v.pass}};
}

json ToJson(const mc::EstimatorReport& r) {
  json out{{"estimator_kind", r.estimator_kind},
           {"point", r.point},
           {"stderr", r.stderr_},
           {"n_paths", r.n_paths},
           {"seed", r.seed},
           {"effective_sample_size", r.effective_sample_size},
           {"flagged", r.flagged},
           {"notes", r.notes}};
  if (r.estimator_kind == "return-time-moment") {
    out["mean_sigma"] = r.mean_sigma;
    out["mean_sigma_stderr"] = r.mean_sigma_stderr;
    out["n_censored"] = r.n_censored;
  } else {
    out["horizon"] = r.horizon;
  }
  return out;
}

json DiscountedSolutionJson(const GameSpec& spec,
                            const discounted::DiscountedSolution& sol,
                            const discounted::DiscountedVerification& ver) {
  return json{{"kind", "discounted"},
              {"spec_hash", SpecHash(spec)},
              {"horizon", sol.values.horizon},
              {"tail_bound", sol.values.tail_bound},
              {"psi1", ToJson(sol.values.psi1.front())},
              {"psi2", ToJson(sol.values.psi2.front())},
              {"phi1", ToJson(sol.values.phi1.front())},
              {"phi2", ToJson(sol.values.phi2.front())},
              {"skipped_supports", sol.skipped_supports},
              {"stages_with_multiple_equilibria",
               sol.stages_with_multiple_equilibria},
              {"profile", ToJson(sol.profile)},
              {"verification", ToJson(ver)}};
}

json ErgodicOutcomeJson(const GameSpec& spec,
                        const ergodic::NashSearchOutcome& o,
                        const markov::RecurrenceReport& report) {
  json search{{"method", o.method},
              {"rounds", o.rounds},
              {"cycle_detected", o.cycle_detected},
              {"stage_sweeps", o.stage_sweeps},
              {"candidate_space", o.candidate_space},
              {"candidates_examined", o.candidates_examined}};
  json out{{"spec_hash", SpecHash(spec)},
           {"search", search},
           {"recurrence_report", ToJson(report)},
           {"warnings", json::array()}};
  if (!o.found) {
    out["kind"] = "ergodic-failure";
    out["failure_reason"] = o.failure_reason;
    return out;
  }
  const ergodic::ErgodicSolution& s = *o.solution;
  out["kind"] = "ergodic";
  out["lambda1"] = s.lambda1;
  out["lambda2"] = s.lambda2;
  out["h1"] = ToJson(s.h1);
  out["h2"] = ToJson(s.h2);
  out["normalization"] = {{"ref_state", spec.ref_state},
                          {"h1_ref", s.normalization1},
                          {"h2_ref", s.normalization2}};
  out["mpe_residual"] = {s.mpe_residual1, s.mpe_residual2};
  out["profile"] = ToJson(s.profile);
  out["verification"] = ToJson(*o.verification);
  if (report.recurrence) {
    const double bound = report.recurrence->r0 * report.recurrence->b0;
    const double lo = std::min(s.h1.minCoeff(), s.h2.minCoeff());
    const double hi = std::max(s.h1.maxCoeff(), s.h2.maxCoeff());
    out["h_bounds"] = {{"lower", 1.0 / bound},
                       {"upper", bound},
                       {"within", lo >= 1.0 / bound && hi <= bound}};
  }
  return out;
}

}  // namespace rsgame::io
