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

#ifndef RSGAME_SERIALIZATION_HPP_
#define RSGAME_SERIALIZATION_HPP_

#include <string>

#include "json.hpp"

#include "discounted_solver.hpp"
#include "ergodic_solver.hpp"
#include "game_model.hpp"
#include "markov_analysis.hpp"
#include "mc_simulator.hpp"

namespace rsgame::io {

using nlohmann::json;

// Nested arrays r1[k][u][v], r2[k][u][v], q[k][u][v][j] plus the scalars.
// Throws Error(kInvalidSpec) on malformed input or a failed validation.
GameSpec SpecFromJson(const json& j);
GameSpec SpecFromText(const std::string& text);
json SpecToJson(const GameSpec& spec);

std::string Sha256Hex(const std::string& data);
// Hash of the canonical serialization, independent of input formatting.
std::string SpecHash(const GameSpec& spec);

json ToJson(const Vector& v);
json ToJson(const StationaryProfile& p);
json ToJson(const MarkovProfile& p);
StationaryProfile StationaryFromJson(const json& j);
MarkovProfile MarkovFromJson(const json& j);

json ToJson(const markov::RecurrenceReport& r);
json ToJson(const discounted::DiscountedVerification& v);
json ToJson(const ergodic::ErgodicVerification& v);
json ToJson(const mc::EstimatorReport& r);

json DiscountedSolutionJson(const GameSpec& spec,
                            const discounted::DiscountedSolution& sol,
                            const discounted::DiscountedVerification& ver);

json ErgodicOutcomeJson(const GameSpec& spec,
                        const ergodic::NashSearchOutcome& outcome,
                        const markov::RecurrenceReport& report);

}  // namespace rsgame::io

#endif  // RSGAME_SERIALIZATION_HPP_
