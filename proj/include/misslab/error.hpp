// Copyright 2026 The misslab Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace misslab {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (bad dimensions, labels out of range,
/// unreadable files). The CLI maps these to exit code 1.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A covariance matrix could not be Cholesky-factorized.
class FactorizationError : public Error {
 public:
  using Error::Error;
};

/// Logistic regression without a finite maximum-likelihood estimate.
class SeparationError : public Error {
 public:
  using Error::Error;
};

/// An iterative routine failed to produce a usable result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace misslab
