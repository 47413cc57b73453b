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

#include "pptq/negativity.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "pptq/errors.hpp"

namespace pptq {

namespace {

using BigFloat = boost::multiprecision::cpp_bin_float_100;

double log2_of(const BigInt& d) {
  const unsigned msb = boost::multiprecision::msb(d);
  if (msb < 1000) return std::log2(d.convert_to<double>());
  const unsigned shift = msb - 60;
  const BigInt top = d >> shift;
  return std::log2(top.convert_to<double>()) + static_cast<double>(shift);
}

SchmidtRank make_rank(BigInt d) {
  const double log_d = log2_of(d);
  return {log_d, std::move(d)};
}

}  // namespace

bool SchmidtRank::fits_int64() const { return d <= std::numeric_limits<std::int64_t>::max(); }

NegativityValue log_negativity(const QuasiState& s) {
  double norm = trace_norm(partial_transpose(s.op()));
  // Integer norms (maximally entangled inputs) come back a few ulps off.
  const double k = std::round(norm);
  if (k >= 1.0 && std::abs(std::log2(norm) - std::log2(k)) <= kSnapGuard) norm = k;
  return {std::log2(norm), norm};
}

namespace {

BigFloat big_log2(const BigInt& k) {
  return boost::multiprecision::log(BigFloat(k)) / boost::multiprecision::log(BigFloat(2));
}

BigFloat exact_pow2(double x) { return boost::multiprecision::exp2(BigFloat(x)); }

// Nearest integer to 2^x if its log2 lies within the guard band of x.
std::optional<BigInt> snapped_pow2(const BigFloat& value, double x) {
  const BigInt k = boost::multiprecision::round(value).convert_to<BigInt>();
  if (k >= 1 && boost::multiprecision::abs(big_log2(k) - BigFloat(x)) <= BigFloat(kSnapGuard)) return k;
  return std::nullopt;
}

}  // namespace

BigInt floor_pow2(double x) {
  const BigFloat value = exact_pow2(x);
  if (auto k = snapped_pow2(value, x)) return *k;
  return boost::multiprecision::floor(value).convert_to<BigInt>();
}

BigInt ceil_pow2(double x) {
  const BigFloat value = exact_pow2(x);
  if (auto k = snapped_pow2(value, x)) return *k;
  return boost::multiprecision::ceil(value).convert_to<BigInt>();
}

SchmidtRank one_shot_exact_distillable_from_en(double en, std::size_t n) {
  if (n == 0) throw InvariantViolation("number of copies must be >= 1");
  BigInt d = floor_pow2(static_cast<double>(n) * en);
  if (d < 1) d = 1;
  return make_rank(std::move(d));
}

SchmidtRank one_shot_exact_distillable(const QuasiState& s, std::size_t n) {
  return one_shot_exact_distillable_from_en(log_negativity(s).log_negativity, n);
}

SchmidtRank one_shot_exact_cost_from_en(double en, std::size_t n) {
  if (n == 0) throw InvariantViolation("number of copies must be >= 1");
  if (en < -kSnapGuard) {
    throw NegativeNegativity("exact cost is undefined for negative log-negativity");
  }
  return make_rank(ceil_pow2(static_cast<double>(n) * en));
}

SchmidtRank one_shot_exact_cost(const QuasiState& s, std::size_t n) {
  return one_shot_exact_cost_from_en(log_negativity(s).log_negativity, n);
}

}  // namespace pptq
