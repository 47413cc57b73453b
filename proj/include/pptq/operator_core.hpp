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

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace pptq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Entries with |M - M^dagger| above this are rejected as non-Hermitian.
inline constexpr double kHermitianTolerance = 1e-10;

/// Default cap on the side of any tensor-power matrix.
inline constexpr std::size_t kDefaultDimensionCap = 4096;

/// Largest entry magnitude of M - M^dagger.
double hermiticity_residual(const Matrix& m);

/// Largest entry magnitude.
double max_abs_entry(const Matrix& m);

/// Hermitian matrix on H_A (x) H_B.
///
/// Composite index convention: i = a * d_b + b (A-major, B-minor). Every
/// module and every file format in this library uses this ordering.
///
/// Construction symmetrizes (M + M^dagger) / 2 when the deviation is within
/// kHermitianTolerance and throws InvariantViolation above it, so a stored
/// matrix satisfies M(i,j) == conj(M(j,i)) bit-for-bit.
class BipartiteOperator {
 public:
  BipartiteOperator(std::size_t d_a, std::size_t d_b, Matrix matrix);

  std::size_t d_a() const { return d_a_; }
  std::size_t d_b() const { return d_b_; }
  std::size_t side() const { return d_a_ * d_b_; }
  const Matrix& matrix() const { return matrix_; }

  Complex trace() const { return matrix_.trace(); }

  BipartiteOperator operator+(const BipartiteOperator& other) const;
  BipartiteOperator operator-(const BipartiteOperator& other) const;
  BipartiteOperator operator*(double scale) const;

 private:
  std::size_t d_a_;
  std::size_t d_b_;
  Matrix matrix_;
};

/// Eigenvalues in descending order, eigenvectors as matching columns.
///
/// Each eigenvector's phase is fixed so that its first entry of (near)
/// maximal magnitude is real and positive; ties between equal eigenvalues
/// are broken by lexicographic order of the phase-fixed eigenvectors.
struct SpectralDecomposition {
  RealVector eigenvalues;
  Matrix eigenvectors;

  /// V diag(r) V^dagger.
  Matrix reconstruct() const;
};

/// Transposes the B factor: out((a,b),(a',b')) = in((a,b'),(a',b)).
BipartiteOperator partial_transpose(const BipartiteOperator& op);

/// Raw-matrix form of the partial transpose for a matrix on H_A (x) H_B that
/// need not be Hermitian.
Matrix partial_transpose(const Matrix& m, std::size_t d_a, std::size_t d_b);

/// Throws NonConvergence if the Hermitian eigensolver fails.
SpectralDecomposition eigendecompose(const BipartiteOperator& op);
SpectralDecomposition eigendecompose(const Matrix& hermitian);

/// Sum of absolute eigenvalues.
double trace_norm(const BipartiteOperator& op);
double trace_norm(const Matrix& hermitian);

/// Largest absolute eigenvalue.
double operator_norm(const BipartiteOperator& op);
double operator_norm(const Matrix& hermitian);

/// n-fold tensor power regrouped across the A^n : B^n cut, i.e. the systems
/// (A1 B1 ... An Bn) are permuted to (A1 ... An)(B1 ... Bn). The output side
/// (d_a d_b)^n must not exceed `dimension_cap`.
BipartiteOperator tensor_power(const BipartiteOperator& op, std::size_t n,
                               std::size_t dimension_cap = kDefaultDimensionCap);

/// Tensor product of two bipartite operators across the (A1 A2):(B1 B2) cut.
BipartiteOperator tensor_product(const BipartiteOperator& x, const BipartiteOperator& y,
                                 std::size_t dimension_cap = kDefaultDimensionCap);

}  // namespace pptq
