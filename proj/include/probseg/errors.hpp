// Copyright 2026 The Probseg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PROBSEG_ERRORS_HPP
#define PROBSEG_ERRORS_HPP

#include <stdexcept>

namespace probseg {

/// Malformed file content (bad header, ragged rows, truncated payload).
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Structurally well-formed data that violates a domain invariant
/// (negative probability, simplex sum off beyond tolerance, shape mismatch).
struct validation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace probseg

#endif  // PROBSEG_ERRORS_HPP
