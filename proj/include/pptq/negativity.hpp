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

#include <cstddef>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "pptq/states.hpp"

namespace pptq {

using BigInt = boost::multiprecision::cpp_int;

/// Exponents within this distance of log2(k) for an integer k snap to k.
inline constexpr double kSnapGuard = 1e-12;

struct NegativityValue {
  double log_negativity;  ///< bits
  double trace_norm_pt;   ///< ||rho^{T_B}||_1
};

/// E_N(s) = log2 ||s^{T_B}||_1. A norm within kSnapGuard (in log2) of an
/// integer is snapped to it.
NegativityValue log_negativity(const QuasiState& s);

/// Schmidt rank d of a maximally entangled state together with log2 d.
struct SchmidtRank {
  double log_d;
  BigInt d;

  /// Decimal rendering; exact for any size.
  std::string d_string() const { return d.str(); }
  bool fits_int64() const;
};

/// floor(2^x) with the snap rule: if x is within kSnapGuard of log2(k+1) the
/// result is k+1.
BigInt floor_pow2(double x);
/// ceil(2^x), snapping down to k-1 when x is within kSnapGuard of log2(k-1).
BigInt ceil_pow2(double x);

/// d = floor(2^{n E_N(s)}), clamped to >= 1.
SchmidtRank one_shot_exact_distillable(const QuasiState& s, std::size_t n);
SchmidtRank one_shot_exact_distillable_from_en(double en, std::size_t n);

/// d = ceil(2^{n E_N(s)}). Throws NegativeNegativity if E_N(s) < 0.
SchmidtRank one_shot_exact_cost(const QuasiState& s, std::size_t n);
SchmidtRank one_shot_exact_cost_from_en(double en, std::size_t n);

}  // namespace pptq
