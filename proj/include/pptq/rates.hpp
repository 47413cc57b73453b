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
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pptq/negativity.hpp"
#include "pptq/states.hpp"
#include "pptq/tempered.hpp"

namespace pptq {

inline constexpr std::size_t kDefaultTableDepth = 12;
/// Below this a log-negativity counts as zero for ratio purposes.
inline constexpr double kZeroNegativity = 1e-12;

struct OneShotRow {
  std::size_t n;
  SchmidtRank distill;  ///< floor(2^{n E_N})
  SchmidtRank cost;     ///< ceil(2^{n E_N})
  double distill_rate;  ///< log2(distill.d) / n
  double cost_rate;     ///< log2(cost.d) / n
};

/// One-shot exact rates for n = 1..depth, from E_N additivity (no tensor
/// powers are formed).
std::vector<OneShotRow> one_shot_table(double en, std::size_t depth = kDefaultTableDepth);

/// Asymptotic exact conversion rates under PPT quasi-operations, which are
/// ratios of log-negativities.
struct RateReport {
  double en_rho = 0.0;
  double en_sigma = 0.0;
  double ratio_forward = 0.0;   ///< E_N(rho) / E_N(sigma)
  double ratio_backward = 0.0;  ///< E_N(sigma) / E_N(rho)
  double reversibility_product = 0.0;
  /// Table for rho.
  std::vector<OneShotRow> one_shot_table;
};

/// Throws ZeroNegativityTarget when E_N(sigma) = 0. If only E_N(rho) = 0 the
/// backward ratio is unbounded; that case also throws since the product is
/// undefined.
RateReport conversion_ratio(const QuasiState& rho, const QuasiState& sigma,
                            std::size_t depth = kDefaultTableDepth);

struct ExactRates {
  double distillable;
  double cost;
};

/// Exact distillable entanglement and exact cost; both equal E_N(rho).
ExactRates exact_rates(const QuasiState& rho);

struct Interval {
  double lower;
  double upper;
};

enum class ChainStatus { Holds, Fails, Inconclusive };
std::string to_string(ChainStatus s);

struct ChainLink {
  std::string name;
  /// rhs - lhs of the inequality; negative beyond tolerance means broken.
  double margin;
  bool holds;
};

/// The tempered-negativity / log-negativity chain for one state. The
/// asymptotic vanishing-error quantities are only bounded, so they are
/// reported as intervals.
struct ChainReport {
  double e_n_tau = 0.0;
  double e_n = 0.0;
  ExactRates exact{};
  Interval cost_interval{};        ///< E_C in [e_n_tau, e_n]
  Interval distillable_interval{}; ///< E_D in [e_n, e_n]
  std::vector<double> one_shot_cost_rates;
  std::vector<double> one_shot_distill_rates;
  std::vector<ChainLink> links;
  ChainStatus status = ChainStatus::Inconclusive;
  double tolerance = 1e-6;
  TemperedResult tempered;

  bool chain_holds() const { return status == ChainStatus::Holds; }
};

/// rho must have side <= 9. `tolerance` is the slack for e_n_tau <= e_n.
ChainReport chain_report(const QuasiState& rho, const SolverConfig& cfg = {},
                         std::size_t depth = kDefaultTableDepth, double tolerance = 1e-6);

nlohmann::json to_json(const OneShotRow& row);
nlohmann::json to_json(const RateReport& report);
nlohmann::json to_json(const ChainReport& report);

}  // namespace pptq
