// Copyright 2026 The rtc Authors
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

#ifndef RTC_ERRORS_HPP
#define RTC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rtc {

/// Base class of every error raised by the library. The CLI maps these to
/// exit code 1 (data errors) as opposed to usage errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside its admissible domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input is empty or otherwise too degenerate for the operation.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// The regression function or problem shape is not supported by an operation.
class UnsupportedSpecError : public Error {
 public:
  using Error::Error;
};

/// Dimension mismatch between arrays.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A bound was requested outside the regime where it applies.
class RegimeError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed input that violates the dataset schema (e.g. non-binary label).
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Zero-variance feature; the message names the column.
class DegenerateFeatureError : public Error {
 public:
  using Error::Error;
};

/// A requested split would be empty.
class SizeError : public Error {
 public:
  using Error::Error;
};

}  // namespace rtc

#endif  // RTC_ERRORS_HPP
