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

#include "tcpa/error.hpp"

namespace tcpa {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDimensionMismatch: return "dimension mismatch";
    case ErrorKind::kOutOfRange: return "out of range";
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kValidation: return "validation error";
    case ErrorKind::kSlotConflict: return "slot conflict";
    case ErrorKind::kInfeasible: return "infeasible";
    case ErrorKind::kCapacity: return "capacity exceeded";
    case ErrorKind::kSimulation: return "simulation error";
    case ErrorKind::kFifoOverflow: return "fifo overflow";
  }
  return "error";
}

}  // namespace tcpa
