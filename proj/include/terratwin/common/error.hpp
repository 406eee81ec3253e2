// Copyright 2026 The terratwin Authors
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

#ifndef TERRATWIN_COMMON_ERROR_HPP_
#define TERRATWIN_COMMON_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace terratwin {

// Base of every error the library throws. Callers that need to map errors
// onto exit codes or HTTP statuses switch on the concrete subclass.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller-supplied argument violates an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed input file or payload. `line()` is 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A referenced entity (node, region, layer, scenario) does not exist.
class NotFound : public Error {
 public:
  using Error::Error;
};

// Well-formed request that the domain cannot answer (empty class, no source
// population, undefined recall, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace terratwin

#endif  // TERRATWIN_COMMON_ERROR_HPP_
