// Copyright 2026 The localgt Authors
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

#ifndef LOCALGT_ERRORS_H_
#define LOCALGT_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace localgt {

// Shape mismatch or other violated precondition on an argument.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Power iteration did not settle within its iteration budget.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, double last_estimate)
      : std::runtime_error(what), last_estimate_(last_estimate) {}
  double last_estimate() const { return last_estimate_; }

 private:
  double last_estimate_;
};

class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConnectivityError : public std::runtime_error {
 public:
  ConnectivityError(const std::string& what, std::size_t attempts)
      : std::runtime_error(what), attempts_(attempts) {}
  std::size_t attempts() const { return attempts_; }

 private:
  std::size_t attempts_;
};

// An iterate left the finite range. Carries the communication round.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, std::size_t round)
      : std::runtime_error(what), round_(round) {}
  std::size_t round() const { return round_; }

 private:
  std::size_t round_;
};

// A bound formula was evaluated outside the regime where it applies.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace localgt

#endif  // LOCALGT_ERRORS_H_
