// Copyright 2026 The liomsim Authors
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

namespace liomsim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameters outside the admissible region (xi, q, N, radii, t, eps, shapes).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Request is well posed but exceeds a configured resource cap.
class FeasibilityError : public Error {
 public:
  using Error::Error;
};

class ContractionTooWide : public FeasibilityError {
 public:
  ContractionTooWide(int legs, int cap)
      : FeasibilityError("contraction needs " + std::to_string(legs) +
                         " open legs, cap is " + std::to_string(cap)),
        legs_(legs),
        cap_(cap) {}
  int legs() const { return legs_; }
  int cap() const { return cap_; }

 private:
  int legs_;
  int cap_;
};

// Mismatched legs, unclosed networks, malformed operators.
class StructuralError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// Conditional probability requested on a zero-probability prefix.
class DegenerateBranch : public Error {
 public:
  using Error::Error;
};

}  // namespace liomsim
