// Copyright 2026 The dpod Authors
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

#ifndef DPOD_ERROR_HPP_
#define DPOD_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace dpod {

// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters or configuration (bad epsilon, missing key, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed input content; the message names the offending line.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Filesystem / stream failures.
class IoError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Region id or index out of declared bounds.
class BoundsError : public Error {
 public:
  using Error::Error;
};

// Mismatched matrix / series shapes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Duplicate release id appended to a privacy ledger.
class ConflictError : public Error {
 public:
  using Error::Error;
};

// Non-finite or otherwise unusable numeric state.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace dpod

#endif  // DPOD_ERROR_HPP_
