// Copyright 2026 The pptq Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace pptq {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file: bad JSON, wrong shape, inconsistent dimensions.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input that breaks a domain invariant (non-Hermitian, trace != 1).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

class DimensionCapExceeded : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// E_N(rho) < E_N(sigma): no PPT quasi-operation maps rho to sigma.
class PreconditionViolated : public Error {
 public:
  PreconditionViolated(const std::string& what, double en_rho, double en_sigma)
      : Error(what), en_rho_(en_rho), en_sigma_(en_sigma) {}
  double en_rho() const { return en_rho_; }
  double en_sigma() const { return en_sigma_; }

 private:
  double en_rho_;
  double en_sigma_;
};

class NegativeNegativity : public Error {
 public:
  using Error::Error;
};

/// Conversion ratio towards a target with zero log-negativity is unbounded.
class ZeroNegativityTarget : public Error {
 public:
  using Error::Error;
};

}  // namespace pptq
