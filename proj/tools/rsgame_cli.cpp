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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rsgame/rsgame.h"

namespace {

using nlohmann::json;

enum Exit {
  kOk = 0,
  kNumericalFailure = 1,
  kInputError = 2,
  kAssumptionFailure = 3,
  kDiscountedVerifyFailure = 4,
  kErgodicFailure = 5,
};

struct Common {
  std::string spec;
  std::string out;
  std::string manifest;
  int threads = 0;
};

int ExitFor(rsg_status s) {
  switch (s) {
    case RSG_OK: return kOk;
    case RSG_ERR_INVALID_ARGUMENT:
    case RSG_ERR_INVALID_SPEC:
    case RSG_ERR_IO: return kInputError;
    case RSG_ERR_ASSUMPTION: return kAssumptionFailure;
    case RSG_ERR_SEARCH_FAILED: return kErgodicFailure;
    default: return kNumericalFailure;
  }
}

bool ReadFile(const std::string& path, std::string* out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  *out = ss.str();
  return true;
}

bool WriteFile(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << text;
  return static_cast<bool>(f);
}

std::string Hex(const std::string& bytes) {
  char buf[65];
  rsg_sha256_hex(bytes.data(), bytes.size(), buf);
  return buf;
}

// Collects everything a run needs to be reproduced, then writes it once.
class Run {
 public:
  Run(std::string command, const Common& c)
      : command_(std::move(command)), common_(c) {}

  json& options() { return options_; }

  // Returns false (and reports) when the spec cannot be loaded.
  bool LoadGame(rsg_game** game) {
    std::string text;
    if (!ReadFile(common_.spec, &text)) {
      std::cerr << "error: cannot read spec " << common_.spec << "\n";
      return false;
    }
    spec_sha256_ = Hex(text);
    const rsg_status s = rsg_game_from_json(text.c_str(), game);
    if (s != RSG_OK) {
      std::cerr << "error: " << rsg_last_error() << "\n";
      return false;
    }
    char h[65];
    rsg_game_hash(*game, h);
    canonical_ = h;
    return true;
  }

  void Emit(const std::string& text) {
    if (common_.out.empty()) {
      std::cout << text;
      return;
    }
    if (!WriteFile(common_.out, text)) {
      std::cerr << "error: cannot write " << common_.out << "\n";
      write_failed_ = true;
      return;
    }
    outputs_.push_back(common_.out);
  }

  void EmitExtra(const std::string& path, const std::string& text) {
    if (!WriteFile(path, text)) {
      std::cerr << "error: cannot write " << path << "\n";
      write_failed_ = true;
      return;
    }
    outputs_.push_back(path);
  }

  int Finish(int code) {
    if (write_failed_ && code == kOk) code = kInputError;
    json m{{"command", command_},
           {"tool_version", rsg_version()},
           {"spec", {{"path", common_.spec},
                     {"sha256", spec_sha256_},
                     {"canonical_hash", canonical_}}},
           {"options", options_},
           {"outputs", outputs_},
           {"exit_code", code}};
    std::string path = common_.manifest;
    if (path.empty() && !common_.out.empty()) {
      path = common_.out + ".manifest.json";
    }
    if (path.empty()) {
      std::cerr << m.dump() << "\n";
    } else if (!WriteFile(path, m.dump(2) + "\n")) {
      std::cerr << "error: cannot write manifest " << path << "\n";
      if (code == kOk) code = kInputError;
    }
    return code;
  }

 private:
  std::string command_;
  Common common_;
  json options_ = json::object();
  std::vector<std::string> outputs_;
  std::string spec_sha256_;
  std::string canonical_;
  bool write_failed_ = false;
};

void AddCommon(CLI::App* app, Common* c) {
  app->add_option("--spec", c->spec, "game spec JSON")->required();
  app->add_option("--out", c->out, "output JSON (stdout if omitted)");
  app->add_option("--manifest", c->manifest,
                  "run manifest path (default <out>.manifest.json)");
  app->add_option("--threads", c->threads,
                  "worker threads (default RSGAME_THREADS or all cores)");
}

// Runs one operation and emits its JSON; keeps the status and pass flag.
struct Outcome {
  rsg_status status = RSG_OK;
  bool passed = false;
};

template <typename F>
Outcome Execute(Run& run, F&& op, std::string* csv = nullptr) {
  rsg_result* res = nullptr;
  Outcome o;
  o.status = op(&res);
  if (res) {
    run.Emit(rsg_result_json(res));
    o.passed = rsg_result_passed(res) != 0;
    if (csv) *csv = rsg_result_csv(res);
    rsg_result_free(res);
  }
  if (o.status != RSG_OK) std::cerr << "error: " << rsg_last_error() << "\n";
  return o;
}

std::string ReadSolution(const std::string& path, bool* ok) {
  std::string text;
  *ok = ReadFile(path, &text);
  if (!*ok) std::cerr << "error: cannot read solution " << path << "\n";
  return text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Risk-sensitive stochastic game solver"};
  app.require_subcommand(1);
  app.set_version_flag("--version", rsg_version());

  Common common;
  bool strict = false, force = false;
  rsg_discounted_options dopt;
  rsg_discounted_options_default(&dopt);
  rsg_ergodic_options eopt;
  rsg_ergodic_options_default(&eopt);
  rsg_simulate_options sopt;
  rsg_simulate_options_default(&sopt);
  rsg_verify_options vopt;
  rsg_verify_options_default(&vopt);
  std::string solution, csv_path;

  CLI::App* check = app.add_subcommand("check", "check assumptions");
  AddCommon(check, &common);
  check->add_flag("--strict", strict, "exit 3 when an assumption fails");

  CLI::App* sd = app.add_subcommand("solve-discounted",
                                    "solve the discounted game");
  AddCommon(sd, &common);
  sd->add_option("--eps", dopt.eps, "tail tolerance fixing the horizon")
      ->capture_default_str();
  sd->add_option("--horizon", dopt.horizon, "explicit horizon (overrides eps)");
  sd->add_option("--tol", dopt.verify_tol, "verification tolerance")
      ->capture_default_str();

  CLI::App* se = app.add_subcommand("solve-ergodic", "solve the ergodic game");
  AddCommon(se, &common);
  se->add_option("--tol", eopt.verify_tol, "verification tolerance")
      ->capture_default_str();
  se->add_flag("--force", force, "solve even if assumptions fail");
  se->add_option("--damping", eopt.damping, "best-response damping")
      ->capture_default_str();
  se->add_option("--max-rounds", eopt.max_rounds, "best-response rounds")
      ->capture_default_str();
  se->add_option("--stage-sweeps", eopt.stage_sweeps,
                 "stage-game iteration sweeps (0 disables)")
      ->capture_default_str();
  se->add_option("--fallback-cap", eopt.fallback_cap,
                 "support enumeration cap (0 disables)")
      ->capture_default_str();

  CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo estimates");
  AddCommon(sim, &common);
  sim->add_option("--solution", solution, "solution JSON to simulate");
  sim->add_option("--paths", sopt.paths, "paths")->capture_default_str();
  sim->add_option("--horizon", sopt.horizon, "path length");
  sim->add_option("--seed", sopt.seed, "RNG seed")->capture_default_str();
  sim->add_option("--batches", sopt.batches, "ergodic batches")
      ->capture_default_str();
  sim->add_option("--censor-cap", sopt.censor_cap, "return-time cap")
      ->capture_default_str();
  sim->add_option("--csv", csv_path, "per-batch CSV output");

  CLI::App* ver = app.add_subcommand("verify", "re-verify a solution");
  AddCommon(ver, &common);
  ver->add_option("--solution", solution, "solution JSON")->required();
  ver->add_option("--tol", vopt.tol,
                  "tolerance (default 1e-8 discounted, 1e-7 ergodic)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }

  Run run(app.get_subcommands().front()->get_name(), common);
  run.options()["threads"] = common.threads;
  rsg_game* game = nullptr;
  if (!run.LoadGame(&game)) return run.Finish(kInputError);

  int code = kOk;
  if (*check) {
    run.options()["strict"] = strict;
    const Outcome o = Execute(run, [&](rsg_result** r) {
      return rsg_check_assumptions(game, nullptr, r);
    });
    code = o.status != RSG_OK ? ExitFor(o.status)
           : (strict && !o.passed) ? kAssumptionFailure
                                   : kOk;
  } else if (*sd) {
    run.options()["eps"] = dopt.eps;
    run.options()["horizon"] = dopt.horizon;
    run.options()["tol"] = dopt.verify_tol;
    const Outcome o = Execute(run, [&](rsg_result** r) {
      return rsg_solve_discounted(game, &dopt, r);
    });
    code = o.status != RSG_OK ? ExitFor(o.status)
           : o.passed         ? kOk
                              : kDiscountedVerifyFailure;
  } else if (*se) {
    eopt.force = force ? 1 : 0;
    run.options()["tol"] = eopt.verify_tol;
    run.options()["force"] = force;
    run.options()["damping"] = eopt.damping;
    run.options()["max_rounds"] = eopt.max_rounds;
    run.options()["stage_sweeps"] = eopt.stage_sweeps;
    run.options()["fallback_cap"] = eopt.fallback_cap;
    const Outcome o = Execute(run, [&](rsg_result** r) {
      return rsg_solve_ergodic(game, &eopt, r);
    });
    code = o.status != RSG_OK ? ExitFor(o.status)
           : o.passed         ? kOk
                              : kErgodicFailure;
  } else if (*sim) {
    sopt.threads = common.threads;
    run.options()["paths"] = sopt.paths;
    run.options()["horizon"] = sopt.horizon;
    run.options()["seed"] = sopt.seed;
    run.options()["batches"] = sopt.batches;
    run.options()["censor_cap"] = sopt.censor_cap;
    run.options()["solution"] = solution;
    bool ok = true;
    std::string text;
    if (!solution.empty()) {
      text = ReadSolution(solution, &ok);
      run.options()["solution_sha256"] = Hex(text);
    }
    if (!ok) {
      code = kInputError;
    } else {
      std::string csv;
      const Outcome o = Execute(
          run,
          [&](rsg_result** r) {
            return rsg_simulate(game, solution.empty() ? nullptr : text.c_str(),
                                &sopt, r);
          },
          &csv);
      code = ExitFor(o.status);
      if (o.status == RSG_OK && !csv_path.empty()) run.EmitExtra(csv_path, csv);
    }
  } else if (*ver) {
    run.options()["tol"] = vopt.tol;
    run.options()["solution"] = solution;
    bool ok = true;
    const std::string text = ReadSolution(solution, &ok);
    if (!ok) {
      code = kInputError;
    } else {
      run.options()["solution_sha256"] = Hex(text);
      const json parsed = json::parse(text, nullptr, false);
      const bool ergodic = parsed.is_object() && parsed.contains("kind") &&
                           parsed["kind"] == "ergodic";
      const Outcome o = Execute(run, [&](rsg_result** r) {
        return rsg_verify(game, text.c_str(), &vopt, r);
      });
      code = o.status != RSG_OK ? ExitFor(o.status)
             : o.passed         ? kOk
             : ergodic          ? kErgodicFailure
                                : kDiscountedVerifyFailure;
    }
  }
  rsg_game_free(game);
  return run.Finish(code);
}
