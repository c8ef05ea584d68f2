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

#ifndef RSGAME_ERROR_HPP_
#define RSGAME_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace rsgame {

// Mirrors the status codes of the C API (see include/rsgame/rsgame.h).
enum class ErrorCode {
  kInvalidArgument = 1,
  kInvalidSpec = 2,
  kAssumption = 3,
  kNumerical = 6,
  kIo = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace rsgame

#endif  // RSGAME_ERROR_HPP_
