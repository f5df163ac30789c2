// Copyright 2026 The scora Authors.
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

#ifndef SCORA_ERROR_HPP_
#define SCORA_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace scora {

// Malformed arguments: bad indices, dimension mismatches, invalid budgets,
// unparsable tokens.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// NaN or infinity showed up where a finite value is required.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what)
      : std::runtime_error(what) {}
};

// A metric is not defined for the given input (e.g. constant vectors).
class UndefinedMetricError : public std::domain_error {
 public:
  explicit UndefinedMetricError(const std::string& what)
      : std::domain_error(what) {}
};

}  // namespace scora

#endif  // SCORA_ERROR_HPP_
