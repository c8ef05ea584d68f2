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

#ifndef RSGAME_RSGAME_H_
#define RSGAME_RSGAME_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RSG_API __declspec(dllexport)
#elif defined(__GNUC__)
#define RSG_API __attribute__((visibility("default")))
#else
#define RSG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rsg_status {
  RSG_OK = 0,
  RSG_ERR_INVALID_ARGUMENT = 1,
  RSG_ERR_INVALID_SPEC = 2,
  RSG_ERR_ASSUMPTION = 3,
  RSG_ERR_SEARCH_FAILED = 5,
  RSG_ERR_NUMERICAL = 6,
  RSG_ERR_IO = 7,
  RSG_ERR_INTERNAL = 99
} rsg_status;

typedef struct rsg_game rsg_game;
typedef struct rsg_result rsg_result;

RSG_API const char* rsg_version(void);

// Message of the last failed call on this thread ("" if none).
RSG_API const char* rsg_last_error(void);

// Lowercase hex SHA-256 of a byte buffer; out must hold 65 bytes.
RSG_API rsg_status rsg_sha256_hex(const void* data, size_t len, char* out);

RSG_API rsg_status rsg_game_from_json(const char* text, rsg_game** out);
RSG_API rsg_status rsg_game_from_file(const char* path, rsg_game** out);
RSG_API void rsg_game_free(rsg_game* game);
// Canonical content hash of the parsed game; out must hold 65 bytes.
RSG_API rsg_status rsg_game_hash(const rsg_game* game, char* out);
RSG_API int rsg_game_n_states(const rsg_game* game);

typedef struct rsg_check_options {
  double safety_margin;  // R0 = (1 - safety_margin) R*
  double r_max;
} rsg_check_options;

typedef struct rsg_discounted_options {
  double eps;         // tail tolerance that fixes the horizon
  int horizon;        // > 0 overrides eps
  double verify_tol;  // on exponential-scale gaps
} rsg_discounted_options;

typedef struct rsg_ergodic_options {
  double verify_tol;
  double damping;
  int stage_sweeps;         // 0 disables stage-game iteration
  long long fallback_cap;  // 0 disables support enumeration
  int max_rounds;
  int force;  // solve even when the assumptions fail
} rsg_ergodic_options;

typedef struct rsg_simulate_options {
  uint64_t seed;
  long long paths;    // discounted paths and return-time samples
  int horizon;        // ergodic batch length; 0 uses the solution horizon
  long long batches;  // ergodic batches
  int threads;        // 0: RSGAME_THREADS or hardware concurrency
  long long censor_cap;
} rsg_simulate_options;

typedef struct rsg_verify_options {
  double tol;
} rsg_verify_options;

RSG_API void rsg_check_options_default(rsg_check_options* o);
RSG_API void rsg_discounted_options_default(rsg_discounted_options* o);
RSG_API void rsg_ergodic_options_default(rsg_ergodic_options* o);
RSG_API void rsg_simulate_options_default(rsg_simulate_options* o);
RSG_API void rsg_verify_options_default(rsg_verify_options* o);

// Each operation stores a JSON result in *out, also for
// RSG_ERR_ASSUMPTION and RSG_ERR_SEARCH_FAILED where the result is the
// diagnostic report. *out is NULL for other errors. Options may be NULL.
RSG_API rsg_status rsg_check_assumptions(const rsg_game* game,
                                         const rsg_check_options* opts,
                                         rsg_result** out);
RSG_API rsg_status rsg_solve_discounted(const rsg_game* game,
                                        const rsg_discounted_options* opts,
                                        rsg_result** out);
RSG_API rsg_status rsg_solve_ergodic(const rsg_game* game,
                                     const rsg_ergodic_options* opts,
                                     rsg_result** out);
// solution_json may be NULL (uniform stationary profile).
RSG_API rsg_status rsg_simulate(const rsg_game* game,
                                const char* solution_json,
                                const rsg_simulate_options* opts,
                                rsg_result** out);
RSG_API rsg_status rsg_verify(const rsg_game* game, const char* solution_json,
                              const rsg_verify_options* opts,
                              rsg_result** out);

RSG_API const char* rsg_result_json(const rsg_result* result);
// CSV text for simulation results, "" otherwise.
RSG_API const char* rsg_result_csv(const rsg_result* result);
// 1 when the result reports a passing check or verification.
RSG_API int rsg_result_passed(const rsg_result* result);
RSG_API void rsg_result_free(rsg_result* result);

#ifdef __cplusplus
}
#endif

#endif  // RSGAME_RSGAME_H_
