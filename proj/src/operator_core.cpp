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

#include "pptq/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "pptq/errors.hpp"

namespace pptq {

namespace {

// Eigenvalues closer than this are treated as a tie for ordering purposes.
constexpr double kEigenTie = 1e-12;

bool lexicographically_less(const Eigen::Ref<const Eigen::VectorXcd>& x,
                            const Eigen::Ref<const Eigen::VectorXcd>& y) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i].real() != y[i].real()) return x[i].real() < y[i].real();
    if (x[i].imag() != y[i].imag()) return x[i].imag() < y[i].imag();
  }
  return false;
}

void fix_phase(Eigen::Ref<Eigen::VectorXcd> v) {
  double largest = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) largest = std::max(largest, std::abs(v[i]));
  if (largest == 0.0) return;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    // First entry within a relative hair of the maximum picks the phase, so
    // near-equal magnitudes do not flip the choice between runs.
    if (std::abs(v[i]) >= largest * (1.0 - 1e-9)) {
      v *= std::conj(v[i]) / std::abs(v[i]);
      v[i] = Complex(v[i].real(), 0.0);
      return;
    }
  }
}

std::size_t checked_pow(std::size_t base, std::size_t n, std::size_t cap) {
  std::size_t out = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (base != 0 && out > cap / base) return cap + 1;
    out *= base;
  }
  return out;
}

}  // namespace

double hermiticity_residual(const Matrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return max_abs_entry(m - m.adjoint());
}

double max_abs_entry(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

BipartiteOperator::BipartiteOperator(std::size_t d_a, std::size_t d_b, Matrix matrix)
    : d_a_(d_a), d_b_(d_b), matrix_(std::move(matrix)) {
  if (d_a_ == 0 || d_b_ == 0) {
    throw InvariantViolation("local dimensions must be positive");
  }
  const auto side = static_cast<Eigen::Index>(d_a_ * d_b_);
  if (matrix_.rows() != side || matrix_.cols() != side) {
    throw InvariantViolation("matrix side " + std::to_string(matrix_.rows()) + "x" +
                             std::to_string(matrix_.cols()) + " does not match d_a*d_b = " +
                             std::to_string(side));
  }
  const double residual = hermiticity_residual(matrix_);
  if (!(residual <= kHermitianTolerance)) {
    throw InvariantViolation("matrix is not Hermitian (max |M - M^dagger| = " +
                             std::to_string(residual) + ")");
  }
  Matrix sym = (matrix_ + matrix_.adjoint()) * 0.5;
  matrix_ = std::move(sym);
}

BipartiteOperator BipartiteOperator::operator+(const BipartiteOperator& other) const {
  if (d_a_ != other.d_a_ || d_b_ != other.d_b_) throw DimensionMismatch("operator dimensions differ");
  return {d_a_, d_b_, matrix_ + other.matrix_};
}

BipartiteOperator BipartiteOperator::operator-(const BipartiteOperator& other) const {
  if (d_a_ != other.d_a_ || d_b_ != other.d_b_) throw DimensionMismatch("operator dimensions differ");
  return {d_a_, d_b_, matrix_ - other.matrix_};
}

BipartiteOperator BipartiteOperator::operator*(double scale) const {
  return {d_a_, d_b_, matrix_ * scale};
}

Matrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

Matrix partial_transpose(const Matrix& m, std::size_t d_a, std::size_t d_b) {
  const auto side = static_cast<Eigen::Index>(d_a * d_b);
  if (m.rows() != side || m.cols() != side) {
    throw DimensionMismatch("partial_transpose: matrix side does not match d_a*d_b");
  }
  Matrix out(side, side);
  for (std::size_t a = 0; a < d_a; ++a) {
    for (std::size_t b = 0; b < d_b; ++b) {
      for (std::size_t a2 = 0; a2 < d_a; ++a2) {
        for (std::size_t b2 = 0; b2 < d_b; ++b2) {
          out(a * d_b + b, a2 * d_b + b2) = m(a * d_b + b2, a2 * d_b + b);
        }
      }
    }
  }
  return out;
}

BipartiteOperator partial_transpose(const BipartiteOperator& op) {
  return {op.d_a(), op.d_b(), partial_transpose(op.matrix(), op.d_a(), op.d_b())};
}

SpectralDecomposition eigendecompose(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian);
  if (solver.info() != Eigen::Success) {
    throw NonConvergence("Hermitian eigensolver failed to converge");
  }
  const Eigen::Index n = hermitian.rows();
  Matrix vectors = solver.eigenvectors();
  const RealVector& values = solver.eigenvalues();
  for (Eigen::Index j = 0; j < n; ++j) fix_phase(vectors.col(j));

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    if (std::abs(values[x] - values[y]) > kEigenTie) return values[x] > values[y];
    return lexicographically_less(vectors.col(x), vectors.col(y));
  });

  SpectralDecomposition out{RealVector(n), Matrix(n, n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    out.eigenvalues[j] = values[order[static_cast<std::size_t>(j)]];
    out.eigenvectors.col(j) = vectors.col(order[static_cast<std::size_t>(j)]);
  }
  return out;
}

SpectralDecomposition eigendecompose(const BipartiteOperator& op) {
  return eigendecompose(op.matrix());
}

double trace_norm(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NonConvergence("eigensolver failed in trace_norm");
  return solver.eigenvalues().cwiseAbs().sum();
}

double trace_norm(const BipartiteOperator& op) { return trace_norm(op.matrix()); }

double operator_norm(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NonConvergence("eigensolver failed in operator_norm");
  if (hermitian.rows() == 0) return 0.0;
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double operator_norm(const BipartiteOperator& op) { return operator_norm(op.matrix()); }

BipartiteOperator tensor_product(const BipartiteOperator& x, const BipartiteOperator& y,
                                 std::size_t dimension_cap) {
  const std::size_t side = x.side() * y.side();
  if (side > dimension_cap) {
    throw DimensionCapExceeded("tensor product side " + std::to_string(side) +
                               " exceeds cap " + std::to_string(dimension_cap));
  }
  const std::size_t xa = x.d_a(), xb = x.d_b(), ya = y.d_a(), yb = y.d_b();
  const std::size_t db = xb * yb;
  Matrix out(static_cast<Eigen::Index>(side), static_cast<Eigen::Index>(side));
  // Output index ((a1 a2),(b1 b2)); input x index (a1,b1), y index (a2,b2).
  for (std::size_t a1 = 0; a1 < xa; ++a1)
    for (std::size_t a2 = 0; a2 < ya; ++a2)
      for (std::size_t b1 = 0; b1 < xb; ++b1)
        for (std::size_t b2 = 0; b2 < yb; ++b2) {
          const auto row = static_cast<Eigen::Index>((a1 * ya + a2) * db + b1 * yb + b2);
          const auto xr = static_cast<Eigen::Index>(a1 * xb + b1);
          const auto yr = static_cast<Eigen::Index>(a2 * yb + b2);
          for (std::size_t c1 = 0; c1 < xa; ++c1)
            for (std::size_t c2 = 0; c2 < ya; ++c2)
              for (std::size_t e1 = 0; e1 < xb; ++e1)
                for (std::size_t e2 = 0; e2 < yb; ++e2) {
                  const auto col = static_cast<Eigen::Index>((c1 * ya + c2) * db + e1 * yb + e2);
                  out(row, col) = x.matrix()(xr, static_cast<Eigen::Index>(c1 * xb + e1)) *
                                  y.matrix()(yr, static_cast<Eigen::Index>(c2 * yb + e2));
                }
        }
  return {xa * ya, db, std::move(out)};
}

BipartiteOperator tensor_power(const BipartiteOperator& op, std::size_t n,
                               std::size_t dimension_cap) {
  if (n == 0) throw InvariantViolation("tensor_power requires n >= 1");
  const std::size_t side = checked_pow(op.side(), n, dimension_cap);
  if (side > dimension_cap) {
    throw DimensionCapExceeded("tensor power side exceeds cap " + std::to_string(dimension_cap));
  }
  BipartiteOperator out = op;
  for (std::size_t k = 1; k < n; ++k) out = tensor_product(out, op, dimension_cap);
  return out;
}

}  // namespace pptq
