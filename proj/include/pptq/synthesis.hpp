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
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <string_view>
#include <utility>

#include <json.hpp>

#include "pptq/operator_core.hpp"
#include "pptq/states.hpp"

namespace pptq {

using Dims = std::pair<std::size_t, std::size_t>;

/// A linear map between bipartite spaces given by its Choi matrix
///
///   J = sum_{ij} |i><j|_in (x) N(|i><j|)
///
/// with the input factor first: row index = i_in * side_out + i_out, and
/// i_in = a * d_b + b, i_out = a' * d_b' + b'. J is not required to be
/// Hermitian; Hermiticity is a verification verdict.
struct ChannelChoi {
  Dims in_dims;
  Dims out_dims;
  Matrix choi;

  std::size_t in_side() const { return in_dims.first * in_dims.second; }
  std::size_t out_side() const { return out_dims.first * out_dims.second; }
};

using LinearMap = std::function<Matrix(const Matrix&)>;

/// Choi matrix of `map` evaluated on the matrix-unit basis of the input.
ChannelChoi choi_of(const LinearMap& map, Dims in_dims, Dims out_dims);

ChannelChoi identity_channel(Dims dims);
/// X -> tr(X) target.
ChannelChoi constant_channel(Dims in_dims, const QuasiState& target);
/// The partial transpose on B, as a map.
ChannelChoi partial_transpose_channel(Dims dims);

/// N(X) = tr_in[(X^T (x) I) J]. Throws DimensionMismatch.
Matrix apply(const ChannelChoi& ch, const Matrix& input);
/// Throws DimensionMismatch; InvariantViolation if the output is not a
/// quasi-state (e.g. the channel is not HPTP).
QuasiState apply(const ChannelChoi& ch, const QuasiState& input);

/// J^{T_B (x) T_B'}: the Choi matrix of T_B' o N o T_B.
Matrix pt_conjugated_choi(const ChannelChoi& ch);

/// tr_out J.
Matrix choi_input_marginal(const ChannelChoi& ch);

enum class SynthesisBranch {
  /// The measure-and-prepare construction with the R+/R- split.
  General,
  /// E_N(sigma) = 0: the constant map onto sigma.
  ConstantTarget,
  /// tr R- = 0 but sigma not numerically PPT: the P- weight is routed into
  /// the |k><k| completion.
  NoNegativePart,
};

std::string_view to_string(SynthesisBranch b);

/// Intermediate objects of the construction, kept for auditing.
struct SynthesisCertificate {
  SynthesisBranch branch = SynthesisBranch::General;
  SpectralDecomposition spectrum_rho_pt;
  SpectralDecomposition spectrum_sigma_pt;
  double tr_r_plus = 0.0;
  double tr_r_minus = 0.0;
  double tr_s_plus_tilde = 0.0;
  double tr_s_minus = 0.0;
  std::size_t chosen_k = 0;
  /// Minimum of the completion weight lambda(omega) over pure inputs.
  double lambda_min = 0.0;
  double en_rho = 0.0;
  double en_sigma = 0.0;
};

struct SynthesisResult {
  ChannelChoi channel;
  SynthesisCertificate certificate;
};

/// Eigenvalues with |r| <= this are put in the positive class.
inline constexpr double kSpectralSignGuard = 1e-12;
/// Slack allowed in E_N(rho) >= E_N(sigma).
inline constexpr double kPreconditionSlack = 1e-12;

/// Builds a PPT quasi-operation N with N(rho) = sigma.
///
/// N = T_B' o M o T_B where M is the measure-and-prepare channel
///
///   M(w) = tr(P+ w)/tr R+ * S+~ + tr(P- w)/tr R- * S- + lambda(w) |k><k|,
///   lambda(w) = tr w - tr(P+ w) tr S+~ / tr R+ - tr(P- w) tr S- / tr R-,
///
/// built from rho^{T_B} = R+ - R- (projectors P+, P-) and
/// sigma^{T_B'} = S+~ - S- + s_k |k><k| with k the largest eigenvalue.
/// Throws PreconditionViolated if E_N(rho) < E_N(sigma) - kPreconditionSlack.
SynthesisResult synthesize(const QuasiState& rho, const QuasiState& sigma);

struct VerifyTolerances {
  double hermitian = 1e-10;
  double trace_preserving = 1e-9;
  double positivity = 1e-9;
  double maps_to = 1e-8;
};

struct CheckResult {
  bool evaluated = false;
  bool pass = false;
  /// The exact quantity compared against the tolerance.
  double value = 0.0;
};

/// Each `value` is re-derivable from the Choi matrix alone.
struct VerificationReport {
  CheckResult hp;                 ///< max |J - J^dagger|
  CheckResult tp;                 ///< max |tr_out J - I|
  CheckResult cp;                 ///< min eigenvalue of J
  CheckResult pptq;               ///< min eigenvalue of J^{T_B (x) T_B'}
  CheckResult maps_rho_to_sigma;  ///< ||N(rho) - sigma||_1

  /// True iff every evaluated check passed.
  bool all_pass() const;
  /// hp, tp and pptq pass (plus maps_rho_to_sigma if evaluated).
  bool is_pptq_channel() const;
};

VerificationReport verify(const ChannelChoi& ch, const QuasiState* rho = nullptr,
                          const QuasiState* sigma = nullptr,
                          const VerifyTolerances& tol = {});

struct MonotoneReport {
  std::size_t trials = 0;
  std::size_t violations = 0;
  /// Largest E_N(N(x)) - E_N(x) seen.
  double max_increase = -std::numeric_limits<double>::infinity();
  double tolerance = 1e-9;
  bool pass() const { return violations == 0; }
};

/// Checks E_N(N(x)) <= E_N(x) + tolerance on random inputs x: quantum states
/// and quasi-states with negative mass 0.25 and 0.5, in rotation.
MonotoneReport en_monotone_check(const ChannelChoi& ch, std::size_t trials, std::uint64_t seed,
                                 double tolerance = 1e-9);

// Channel file: {"in_dims": [dA, dB], "out_dims": [dA2, dB2],
//                "choi": [[[re, im], ...], ...], "convention": "input-major-row-major"}
inline constexpr std::string_view kChoiConvention = "input-major-row-major";

nlohmann::json channel_to_json(const ChannelChoi& ch);
ChannelChoi channel_from_json(const nlohmann::json& j);
void save_channel(const ChannelChoi& ch, const std::filesystem::path& path);
ChannelChoi load_channel(const std::filesystem::path& path);

nlohmann::json to_json(const VerificationReport& report);
nlohmann::json to_json(const SynthesisCertificate& cert);
nlohmann::json to_json(const MonotoneReport& report);

}  // namespace pptq
