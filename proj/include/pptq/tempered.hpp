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
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "pptq/operator_core.hpp"
#include "pptq/states.hpp"

namespace pptq {

/// For quantum states the program is solved by a log-barrier method on the
/// face {||X||_inf = tr(X rho)}; for proper quasi-states by bisection on the
/// objective with Dykstra feasibility probes.
struct SolverConfig {
  /// Target width of the certified bracket on the objective.
  double bisection_tol = 1e-6;
  /// Bisection steps, or barrier stages.
  std::size_t max_bisection_steps = 200;
  /// Dykstra sweeps per feasibility probe, or total Newton steps.
  std::size_t max_iterations = 5000;
  /// A Dykstra probe is feasible once every constraint violation is below this.
  double feasibility_tol = 1e-8;
};

struct FeasibilityResiduals {
  double r_op = 0.0;   ///< max(0, ||X||_inf - tr(X rho))
  double r_pt = 0.0;   ///< max(0, ||X^{T_B}||_inf - 1)
  double r_lin = 0.0;  ///< | ||X||_inf - tr(X rho) |
};

/// Independently recomputed constraint residuals of a witness.
FeasibilityResiduals witness_residuals(const BipartiteOperator& witness, const QuasiState& rho);

/// Result of the tempered-negativity program
///
///   N_tau(sigma|rho) = sup { tr(X sigma) : ||X^{T_B}||_inf <= 1, ||X||_inf = tr(X rho) }.
///
/// `n_tau` is tr(witness sigma) of the returned witness, so it is a certified
/// lower bound even when the solver did not converge. On the state path
/// `upper_bound` is a dual certificate; on the quasi-state path it is the
/// bisection's upper end.
struct TemperedResult {
  double n_tau = 1.0;
  double upper_bound = 1.0;
  BipartiteOperator witness{1, 1, Matrix::Identity(1, 1)};
  FeasibilityResiduals residuals;
  /// Newton steps or Dykstra sweeps.
  std::size_t iterations = 0;
  /// Barrier stages or bisection steps.
  std::size_t bisection_steps = 0;
  /// Probes that hit the iteration cap and were treated as infeasible.
  std::size_t capped_probes = 0;
  bool converged = false;
  /// Set when rho is not PSD; the program is then outside its usual domain.
  bool experimental = false;
  /// Lower end of the bracket after each stage (non-decreasing).
  std::vector<double> lower_bound_history;
  SolverConfig config;
};

/// N_tau(rho) = N_tau(rho|rho).
TemperedResult tempered_negativity(const QuasiState& rho, const SolverConfig& cfg = {});

/// N_tau(sigma|rho). Throws DimensionMismatch.
TemperedResult tempered_negativity_cross(const QuasiState& sigma, const QuasiState& rho,
                                         const SolverConfig& cfg = {});

/// log2 N_tau(rho).
double tempered_log_negativity(const TemperedResult& result);

enum class Verdict { Pass, Fail, Inconclusive };
std::string to_string(Verdict v);

struct PropertyCheck {
  Verdict verdict = Verdict::Pass;
  /// Smallest (lhs - rhs) over the trials; negative means violated.
  double worst_margin = std::numeric_limits<double>::infinity();
  std::size_t trials = 0;
  std::size_t inconclusive = 0;
};

/// Randomized checks of the three tempered-negativity properties around rho:
///   (a) ||sigma^{T_B}||_1 >= N_tau(sigma|rho),
///   (b) ||sigma - rho||_1 <= eps  =>  N_tau(sigma|rho) >= (1 - eps) N_tau(rho),
///   (c) N_tau(rho (x) rho) >= N_tau(rho)^2.
struct PropertyReport {
  PropertyCheck a;
  PropertyCheck b;
  PropertyCheck c;
  double tolerance = 1e-4;
  bool all_pass() const;
};

/// rho must be a state of side <= 9. Each trial perturbs rho into a sigma
/// with ||sigma - rho||_1 = eps for a random eps in (0, 0.5].
PropertyReport verify_lemma_properties(const QuasiState& rho, std::size_t trials,
                                       std::uint64_t seed, const SolverConfig& cfg = {},
                                       double tolerance = 1e-4);

nlohmann::json to_json(const SolverConfig& cfg);
nlohmann::json to_json(const TemperedResult& result);
nlohmann::json to_json(const PropertyReport& report);

}  // namespace pptq
