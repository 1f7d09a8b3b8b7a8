// Copyright 2026 The bhastlo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bhastlo/error.hpp"

namespace bhastlo {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidSite: return "invalid-site";
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::Regime: return "regime";
    case ErrorKind::OutOfCutoff: return "out-of-cutoff";
    case ErrorKind::Capacity: return "capacity";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::NotNormalized: return "not-normalized";
    case ErrorKind::Propagation: return "propagation";
    case ErrorKind::Schema: return "schema";
    case ErrorKind::Io: return "io";
    case ErrorKind::Internal: return "internal";
  }
  return "unknown";
}

}  // namespace bhastlo
