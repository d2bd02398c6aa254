// Copyright 2026 The qkinema Authors
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

namespace qkinema {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// An input violates a documented invariant (bad trace, non-positive effect, ...).
class ValidationError : public Error {
  public:
    using Error::Error;
};

class DimensionMismatch : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

/// An identity that must hold mathematically failed numerically. Indicates a bug.
class ConsistencyError : public Error {
  public:
    using Error::Error;
};

/// The eigensolver did not converge.
class NumericalError : public Error {
  public:
    using Error::Error;
};

/// Projection onto an outcome whose probability is below the floor.
class ZeroProbabilityBranch : public Error {
  public:
    using Error::Error;
};

/// A StateMap produced something that is not a density operator.
class InvalidMapOutput : public Error {
  public:
    using Error::Error;
};

} // namespace qkinema
