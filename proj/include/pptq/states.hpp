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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "pptq/operator_core.hpp"

namespace pptq {

inline constexpr double kTraceTolerance = 1e-10;
/// Eigenvalues at or above -kSignTolerance count as nonnegative for the
/// PSD and PPT classifications.
inline constexpr double kSignTolerance = 1e-10;

enum class Classification { QuantumState, ProperQuasiState };
enum class PptFlag { PPT, NPT, Unknown };

std::string_view to_string(Classification c);
std::string_view to_string(PptFlag f);

/// A unit-trace Hermitian operator: an affine combination of quantum states.
/// Quantum states are the PSD special case.
class QuasiState {
 public:
  /// Validates tr = 1 (InvariantViolation otherwise) and classifies.
  explicit QuasiState(BipartiteOperator op);

  const BipartiteOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }
  std::size_t d_a() const { return op_.d_a(); }
  std::size_t d_b() const { return op_.d_b(); }
  std::size_t side() const { return op_.side(); }

  Classification classification() const { return classification_; }
  PptFlag ppt_flag() const { return ppt_flag_; }
  bool is_state() const { return classification_ == Classification::QuantumState; }
  bool is_ppt() const { return ppt_flag_ == PptFlag::PPT; }
  double min_eigenvalue() const { return min_eigenvalue_; }
  double min_pt_eigenvalue() const { return min_pt_eigenvalue_; }

 private:
  BipartiteOperator op_;
  Classification classification_;
  PptFlag ppt_flag_;
  double min_eigenvalue_;
  double min_pt_eigenvalue_;
};

/// Phi^d = 1/d sum_{i,j} |ii><jj| on C^d (x) C^d. d = 1 is the trivial state.
QuasiState max_entangled(std::size_t d);

/// I / (d_a d_b).
QuasiState maximally_mixed(std::size_t d_a, std::size_t d_b);

/// Haar-random unitary conjugation of a normalized random nonnegative
/// diagonal. `rank` = 0 means full rank; otherwise only `rank` diagonal
/// entries are nonzero. Deterministic in `seed`.
QuasiState random_state(std::size_t d_a, std::size_t d_b, std::uint64_t seed,
                        std::size_t rank = 0);

/// Haar-random pure state |psi><psi|.
QuasiState random_pure_state(std::size_t d_a, std::size_t d_b, std::uint64_t seed);

/// Random Hermitian unit-trace operator with signed spectrum: total negative
/// eigenvalue mass equals `neg_weight` (positive mass 1 + neg_weight), in a
/// Haar-random eigenbasis. neg_weight = 0 yields a quantum state.
QuasiState random_quasi_state(std::size_t d_a, std::size_t d_b, double neg_weight,
                              std::uint64_t seed);

/// Haar-random unitary of the given side (QR of a Ginibre matrix with the
/// phases of R's diagonal absorbed).
Matrix random_unitary(std::size_t side, std::uint64_t seed);

/// Random Hermitian matrix with i.i.d. Gaussian entries (GUE-like).
Matrix random_hermitian(std::size_t side, std::uint64_t seed);

// Serialization. Schema:
//   {"d_a": int, "d_b": int, "matrix": [[[re, im], ...], ...]}
// Row-major, composite index a * d_b + b, doubles as shortest round-trip
// decimals, one line terminated by LF.

nlohmann::json matrix_to_json(const Matrix& m);
/// Throws ParseError on a non-square or malformed matrix array.
Matrix matrix_from_json(const nlohmann::json& j);

nlohmann::json state_to_json(const QuasiState& s);
/// ParseError on shape problems, InvariantViolation on non-Hermitian or
/// trace != 1.
QuasiState state_from_json(const nlohmann::json& j);

std::string dump_canonical(const nlohmann::json& j);

void save(const QuasiState& s, const std::filesystem::path& path);
QuasiState load(const std::filesystem::path& path);

/// Reads and parses a JSON file; ParseError on I/O or syntax failure.
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace pptq
