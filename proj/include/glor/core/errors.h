// Copyright 2026 The Glor Authors
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
#ifndef GLOR_CORE_ERRORS_H_
#define GLOR_CORE_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace glor {

// Caller passed arguments that violate an operation's preconditions.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A record or config failed schema validation. Carries the 1-based line
// number (0 when not line-oriented) and a dotted field path.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::size_t line, std::string field, const std::string& msg)
      : std::runtime_error(Format(line, field, msg)),
        line_(line),
        field_(std::move(field)) {}

  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  static std::string Format(std::size_t line, const std::string& field,
                            const std::string& msg) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!field.empty()) out += "field '" + field + "': ";
    return out + msg;
  }

  std::size_t line_;
  std::string field_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConflictError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A statistic is undefined for the given input (zero variance, p_e = 1, ...).
class DegenerateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace glor

#endif  // GLOR_CORE_ERRORS_H_
