// Copyright 2026 The fibbraid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace fibbraid {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define FIBBRAID_DEFINE_ERROR(Name)         \
  class Name : public Error {               \
   public:                                  \
    using Error::Error;                     \
  }

FIBBRAID_DEFINE_ERROR(NonUnitaryInput);
FIBBRAID_DEFINE_ERROR(UninitializedNetwork);
FIBBRAID_DEFINE_ERROR(ShapeMismatch);
FIBBRAID_DEFINE_ERROR(SpecMismatch);
FIBBRAID_DEFINE_ERROR(CorruptCheckpoint);
FIBBRAID_DEFINE_ERROR(DivergenceDetected);
FIBBRAID_DEFINE_ERROR(EmptyGateSet);
FIBBRAID_DEFINE_ERROR(DepthGuardExceeded);
FIBBRAID_DEFINE_ERROR(CommutatorDecompositionFailure);
FIBBRAID_DEFINE_ERROR(ParseError);

#undef FIBBRAID_DEFINE_ERROR

}  // namespace fibbraid
