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

#include "pptq/rates.hpp"

#include <algorithm>
#include <cmath>

#include "pptq/errors.hpp"

namespace pptq {

namespace {

// Rendered as a JSON integer when it fits, as a decimal string otherwise.
nlohmann::json rank_to_json(const SchmidtRank& r) {
  if (r.fits_int64()) return r.d.convert_to<std::int64_t>();
  return r.d_string();
}

}  // namespace

std::vector<OneShotRow> one_shot_table(double en, std::size_t depth) {
  std::vector<OneShotRow> rows;
  rows.reserve(depth);
  for (std::size_t n = 1; n <= depth; ++n) {
    SchmidtRank distill = one_shot_exact_distillable_from_en(en, n);
    SchmidtRank cost = one_shot_exact_cost_from_en(std::max(en, 0.0), n);
    const double nd = static_cast<double>(n);
    rows.push_back({n, distill, cost, distill.log_d / nd, cost.log_d / nd});
  }
  return rows;
}

RateReport conversion_ratio(const QuasiState& rho, const QuasiState& sigma, std::size_t depth) {
  RateReport report;
  report.en_rho = log_negativity(rho).log_negativity;
  report.en_sigma = log_negativity(sigma).log_negativity;
  if (report.en_sigma <= kZeroNegativity) {
    throw ZeroNegativityTarget("E_N(sigma) = 0: the forward conversion ratio is unbounded");
  }
  if (report.en_rho <= kZeroNegativity) {
    throw ZeroNegativityTarget("E_N(rho) = 0: the backward conversion ratio is unbounded");
  }
  report.ratio_forward = report.en_rho / report.en_sigma;
  report.ratio_backward = report.en_sigma / report.en_rho;
  report.reversibility_product = report.ratio_forward * report.ratio_backward;
  report.one_shot_table = one_shot_table(report.en_rho, depth);
  return report;
}

ExactRates exact_rates(const QuasiState& rho) {
  const double en = log_negativity(rho).log_negativity;
  return {en, en};
}

std::string to_string(ChainStatus s) {
  switch (s) {
    case ChainStatus::Holds: return "holds";
    case ChainStatus::Fails: return "fails";
    case ChainStatus::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

ChainReport chain_report(const QuasiState& rho, const SolverConfig& cfg, std::size_t depth,
                         double tolerance) {
  if (rho.side() > 9) throw DimensionCapExceeded("chain_report needs side <= 9");
  ChainReport report;
  report.tolerance = tolerance;
  report.tempered = tempered_negativity(rho, cfg);
  report.e_n_tau = tempered_log_negativity(report.tempered);
  report.e_n = log_negativity(rho).log_negativity;
  report.exact = exact_rates(rho);
  report.cost_interval = {report.e_n_tau, report.e_n};
  report.distillable_interval = {report.e_n, report.e_n};

  const std::vector<OneShotRow> table = one_shot_table(report.e_n, depth);
  double worst_distill = std::numeric_limits<double>::infinity();
  double worst_cost = std::numeric_limits<double>::infinity();
  for (const OneShotRow& row : table) {
    report.one_shot_distill_rates.push_back(row.distill_rate);
    report.one_shot_cost_rates.push_back(row.cost_rate);
    worst_distill = std::min(worst_distill, report.e_n - row.distill_rate);
    worst_cost = std::min(worst_cost, row.cost_rate - report.e_n);
  }

  // Guard for the floor/ceil snap on the one-shot links.
  constexpr double kRateSlack = 1e-12;
  auto link = [&](std::string name, double margin, double slack) {
    report.links.push_back({std::move(name), margin, margin >= -slack});
  };
  link("e_n_tau <= e_n", report.e_n - report.e_n_tau, tolerance);
  link("distill_rate(n) <= e_n", worst_distill, kRateSlack);
  link("e_n <= cost_rate(n)", worst_cost, kRateSlack);
  link("exact distillable = e_n", -std::abs(report.exact.distillable - report.e_n), 0.0);
  link("exact cost = e_n", -std::abs(report.exact.cost - report.e_n), 0.0);

  const bool all_links = std::all_of(report.links.begin(), report.links.end(),
                                     [](const ChainLink& l) { return l.holds; });
  if (!all_links) {
    report.status = ChainStatus::Fails;
  } else if (!report.tempered.converged) {
    report.status = ChainStatus::Inconclusive;
  } else {
    report.status = ChainStatus::Holds;
  }
  return report;
}

nlohmann::json to_json(const OneShotRow& row) {
  return nlohmann::json{{"n", row.n},
                        {"distill_d", rank_to_json(row.distill)},
                        {"cost_d", rank_to_json(row.cost)},
                        {"distill_rate", row.distill_rate},
                        {"cost_rate", row.cost_rate}};
}

nlohmann::json to_json(const RateReport& report) {
  nlohmann::json table = nlohmann::json::array();
  for (const auto& row : report.one_shot_table) table.push_back(to_json(row));
  return nlohmann::json{{"en_rho", report.en_rho},
                        {"en_sigma", report.en_sigma},
                        {"ratio_forward", report.ratio_forward},
                        {"ratio_backward", report.ratio_backward},
                        {"reversibility_product", report.reversibility_product},
                        {"status", "bounded"},
                        {"one_shot_table", std::move(table)}};
}

nlohmann::json to_json(const ChainReport& report) {
  nlohmann::json links = nlohmann::json::array();
  for (const auto& l : report.links) {
    links.push_back({{"name", l.name}, {"margin", l.margin}, {"holds", l.holds}});
  }
  return nlohmann::json{
      {"e_n_tau", report.e_n_tau},
      {"e_n", report.e_n},
      {"n_tau", report.tempered.n_tau},
      {"exact_distillable", report.exact.distillable},
      {"exact_cost", report.exact.cost},
      {"cost_interval", {report.cost_interval.lower, report.cost_interval.upper}},
      {"distillable_interval", {report.distillable_interval.lower, report.distillable_interval.upper}},
      {"one_shot_cost_rates", report.one_shot_cost_rates},
      {"one_shot_distill_rates", report.one_shot_distill_rates},
      {"links", std::move(links)},
      {"chain_status", to_string(report.status)},
      {"chain_holds", report.chain_holds()},
      {"tolerance", report.tolerance},
      {"solver", {{"converged", report.tempered.converged},
                  {"iterations", report.tempered.iterations},
                  {"bisection_steps", report.tempered.bisection_steps},
                  {"config", to_json(report.tempered.config)}}}};
}

}  // namespace pptq
