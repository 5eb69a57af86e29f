// Copyright 2026 The tcpa-loopctl Authors
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

#ifndef TCPA_ERROR_HPP_
#define TCPA_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace tcpa {

enum class ErrorKind {
  kDimensionMismatch,
  kOutOfRange,
  kParse,
  kValidation,
  kSlotConflict,
  kInfeasible,
  kCapacity,
  kSimulation,
  kFifoOverflow,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this exception type. The kind
// lets callers (CLI, bindings, tests) dispatch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace tcpa

#endif  // TCPA_ERROR_HPP_
