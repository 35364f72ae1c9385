// Copyright 2026 The MEL Authors.
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

#ifndef MEL_CORE_ERRORS_H_
#define MEL_CORE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace mel {

// Malformed input: bad shapes, out-of-range parameters, invalid tables.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// A well-formed request that the operation does not support, e.g. a gap mode
// that is undefined for the given policy class.
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

// An internal numerical routine failed to meet its contract.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mel

#endif  // MEL_CORE_ERRORS_H_
