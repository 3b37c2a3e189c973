// Copyright 2026 The repday Authors
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

#ifndef REPDAY_ERROR_HPP
#define REPDAY_ERROR_HPP

#include <stdexcept>
#include <string>

namespace repday {

// Every failure raised by the library derives from Error. The C API maps each
// subclass onto one status code, so new subclasses must be registered there.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (CSV, key-tree, LP/MPS, solution files).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// Invalid scalar parameter such as K <= 0.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A documented precondition of an algorithm does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// System data violates its schema or invariants.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// A model could not be assembled from otherwise valid inputs.
class BuildError : public Error {
 public:
  using Error::Error;
};

// A solution was rejected, or the solver could not certify a result.
class SolveError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace repday

#endif  // REPDAY_ERROR_HPP
