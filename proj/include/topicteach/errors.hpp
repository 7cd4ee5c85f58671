// Copyright 2026 The topicteach Authors.
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

#ifndef TOPICTEACH_ERRORS_HPP
#define TOPICTEACH_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

/**
 * \file
 * \brief Exception types thrown by the library.
 */

namespace topicteach {

/// Invalid argument: wrong dimensions, nonpositive concentration, empty input.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An exact enumeration was requested over a space larger than its budget.
class GuardError : public std::runtime_error {
 public:
  GuardError(const std::string& what, double required, double budget)
      : std::runtime_error(
            what + " (requires " + std::to_string(required) + " evaluations, budget " + std::to_string(budget) + ")"),
        required_{required},
        budget_{budget} {}

  [[nodiscard]] double required() const noexcept { return required_; }
  [[nodiscard]] double budget() const noexcept { return budget_; }

 private:
  double required_;
  double budget_;
};

/// A quantity is undefined for the given input (e.g. every importance weight is zero).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed input file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace topicteach

#endif  // TOPICTEACH_ERRORS_HPP
