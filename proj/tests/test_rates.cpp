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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pptq/errors.hpp"
#include "pptq/rates.hpp"

using namespace pptq;

TEST_CASE("exact rates of maximally entangled states") {
  for (std::size_t d : {2u, 3u, 4u, 8u}) {
    const ExactRates r = exact_rates(max_entangled(d));
    CHECK(r.distillable == std::log2(static_cast<double>(d)));
    CHECK(r.cost == std::log2(static_cast<double>(d)));
  }
}

TEST_CASE("one-shot table for Phi3") {
  const auto rows = one_shot_table(std::log2(3.0), 4);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].distill.d == 3);
  CHECK(rows[1].distill.d == 9);
  CHECK(rows[1].cost.d == 9);
  CHECK(rows[3].cost.d == 81);
  CHECK(rows[2].n == 3);
}

TEST_CASE("one-shot table brackets a generic E_N") {
  const auto rows = one_shot_table(0.7, 12);
  for (const OneShotRow& row : rows) {
    CHECK(row.distill_rate <= 0.7);
    CHECK(row.cost_rate >= 0.7);
    CHECK(row.cost_rate - row.distill_rate <= 2.0 / static_cast<double>(row.n));
  }
  CHECK(rows[0].distill.d == 1);  // floor(2^0.7)
  CHECK(rows[0].cost.d == 2);
}

TEST_CASE("conversion ratio Phi4 -> Phi2") {
  const RateReport r = conversion_ratio(max_entangled(4), max_entangled(2));
  CHECK(r.ratio_forward == 2.0);
  CHECK(r.ratio_backward == 0.5);
  CHECK(r.reversibility_product == 1.0);
  CHECK(r.one_shot_table.size() == kDefaultTableDepth);
}

TEST_CASE("reversibility and transitivity on random pairs") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const QuasiState a = random_pure_state(2, 2, seed);
    const QuasiState b = random_pure_state(2, 3, seed + 100);
    const QuasiState c = random_state(3, 3, seed + 200, 1);
    const RateReport ab = conversion_ratio(a, b);
    const RateReport bc = conversion_ratio(b, c);
    const RateReport ac = conversion_ratio(a, c);
    CHECK(std::abs(ab.reversibility_product - 1.0) <= 1e-12);
    CHECK(std::abs(ab.ratio_forward * bc.ratio_forward - ac.ratio_forward) <= 1e-9);
  }
}

TEST_CASE("zero log-negativity makes the ratio unbounded") {
  CHECK_THROWS_AS(conversion_ratio(max_entangled(2), maximally_mixed(2, 2)), ZeroNegativityTarget);
  CHECK_THROWS_AS(conversion_ratio(maximally_mixed(2, 2), max_entangled(2)), ZeroNegativityTarget);
}

TEST_CASE("chain on maximally entangled and PPT states") {
  for (std::size_t d : {2u, 3u}) {
    const ChainReport r = chain_report(max_entangled(d));
    CHECK(r.chain_holds());
    CHECK(r.e_n == std::log2(static_cast<double>(d)));
    CHECK(std::abs(r.e_n_tau - r.e_n) <= 1e-4);
    CHECK(r.cost_interval.lower == r.e_n_tau);
    CHECK(r.cost_interval.upper == r.e_n);
    CHECK(r.distillable_interval.lower == r.distillable_interval.upper);
  }
  const ChainReport mixed = chain_report(maximally_mixed(2, 2));
  CHECK(mixed.chain_holds());
  CHECK(mixed.e_n_tau == 0.0);
  CHECK(mixed.e_n == 0.0);
}

TEST_CASE("chain on random NPT states") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ChainReport r = chain_report(random_pure_state(2, 2 + seed % 2, seed));
    CHECK(r.chain_holds());
    CHECK(r.e_n_tau <= r.e_n + 1e-6);
    CHECK(r.one_shot_cost_rates.size() == kDefaultTableDepth);
    for (const ChainLink& l : r.links) CHECK(l.holds);
  }
}

TEST_CASE("chain reports inconclusive when the solver is capped") {
  SolverConfig cfg;
  cfg.max_iterations = 2;
  const ChainReport r = chain_report(random_pure_state(2, 2, 1), cfg);
  CHECK(r.status == ChainStatus::Inconclusive);
  CHECK_FALSE(r.chain_holds());
}

TEST_CASE("chain is limited to small systems") {
  CHECK_THROWS_AS(chain_report(max_entangled(4)), DimensionCapExceeded);
}

TEST_CASE("rate JSON renders huge Schmidt ranks as strings") {
  const auto rows = one_shot_table(8.0, 10);
  const nlohmann::json j = to_json(rows[9]);  // 2^80
  CHECK(j["cost_d"].is_string());
  CHECK(j["cost_d"].get<std::string>() == "1208925819614629174706176");
  CHECK(to_json(rows[0])["cost_d"].get<std::int64_t>() == 256);
}
