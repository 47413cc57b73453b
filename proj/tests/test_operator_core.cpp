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

#include "pptq/errors.hpp"
#include "pptq/operator_core.hpp"
#include "pptq/states.hpp"

using namespace pptq;

namespace {

Matrix basis_op(std::size_t side, std::size_t i, std::size_t j) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(side), static_cast<Eigen::Index>(side));
  m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("partial transpose swaps the B indices") {
  // |a b><a' b'| -> |a b'><a' b| with index a*d_b + b.
  const std::size_t da = 2, db = 3;
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t b = 0; b < db; ++b)
      for (std::size_t ap = 0; ap < da; ++ap)
        for (std::size_t bp = 0; bp < db; ++bp) {
          const Matrix in = basis_op(da * db, a * db + b, ap * db + bp);
          const Matrix expect = basis_op(da * db, a * db + bp, ap * db + b);
          CHECK((partial_transpose(in, da, db) - expect).norm() == 0.0);
        }
}

TEST_CASE("partial transpose is an involution and preserves trace") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Matrix h = random_hermitian(6, seed);
    const BipartiteOperator op(2, 3, h);
    const BipartiteOperator twice = partial_transpose(partial_transpose(op));
    CHECK((twice.matrix() - op.matrix()).norm() == 0.0);
    CHECK(std::abs(partial_transpose(op).trace() - op.trace()) < 1e-14);
  }
}

TEST_CASE("PT of the maximally entangled state is swap / d") {
  for (std::size_t d : {2u, 3u, 4u}) {
    const BipartiteOperator pt = partial_transpose(max_entangled(d).op());
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        const auto r = static_cast<Eigen::Index>(i * d + j);
        const auto c = static_cast<Eigen::Index>(j * d + i);
        CHECK(std::abs(pt.matrix()(r, c) - Complex(1.0 / d, 0.0)) < 1e-15);
      }
    CHECK(trace_norm(pt) == doctest::Approx(static_cast<double>(d)).epsilon(1e-13));
    CHECK(operator_norm(pt) == doctest::Approx(1.0 / d).epsilon(1e-13));
  }
}

TEST_CASE("eigendecompose orders eigenvalues and fixes phases") {
  const Matrix h = random_hermitian(5, 3);
  const SpectralDecomposition s = eigendecompose(h);
  for (Eigen::Index i = 1; i < s.eigenvalues.size(); ++i) CHECK(s.eigenvalues[i - 1] >= s.eigenvalues[i]);
  CHECK((s.reconstruct() - h).norm() < 1e-12);
  for (Eigen::Index c = 0; c < s.eigenvectors.cols(); ++c) {
    const auto v = s.eigenvectors.col(c);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    CHECK(v[arg].real() > 0.0);
    CHECK(std::abs(v[arg].imag()) < 1e-12);
  }
  // Deterministic: same input, bit-identical output.
  const SpectralDecomposition again = eigendecompose(h);
  CHECK((again.eigenvectors - s.eigenvectors).norm() == 0.0);
}

TEST_CASE("norms of a diagonal operator") {
  Matrix d = Matrix::Zero(4, 4);
  d.diagonal() << 0.5, -0.25, 2.0, -3.0;
  CHECK(trace_norm(d) == doctest::Approx(5.75));
  CHECK(operator_norm(d) == doctest::Approx(3.0));
}

TEST_CASE("non-Hermitian input is rejected, near-Hermitian is symmetrized") {
  Matrix m = Matrix::Identity(4, 4);
  m(0, 1) = 1e-3;
  CHECK_THROWS_AS(BipartiteOperator(2, 2, m), InvariantViolation);
  m(0, 1) = 1e-12;
  const BipartiteOperator ok(2, 2, m);
  CHECK(hermiticity_residual(ok.matrix()) == 0.0);
  CHECK_THROWS_AS(BipartiteOperator(2, 3, Matrix::Identity(4, 4)), InvariantViolation);
}

TEST_CASE("tensor power regroups across the A:B cut") {
  const QuasiState phi = max_entangled(2);
  const BipartiteOperator sq = tensor_power(phi.op(), 2);
  CHECK(sq.d_a() == 4);
  CHECK(sq.d_b() == 4);
  // Phi2 (x) Phi2 regrouped is Phi4.
  CHECK((sq.matrix() - max_entangled(4).matrix()).norm() < 1e-14);
  // log-negativity is additive.
  const QuasiState rho = random_state(2, 2, 11);
  const double one = trace_norm(partial_transpose(rho.op()));
  const double two = trace_norm(partial_transpose(tensor_power(rho.op(), 2)));
  CHECK(two == doctest::Approx(one * one).epsilon(1e-12));
}

TEST_CASE("tensor product of distinct factors keeps each factor's PT norm") {
  const QuasiState x = random_state(2, 3, 5);
  const QuasiState y = random_state(3, 2, 6);
  const BipartiteOperator xy = tensor_product(x.op(), y.op());
  CHECK(xy.d_a() == 6);
  CHECK(xy.d_b() == 6);
  CHECK(trace_norm(partial_transpose(xy)) ==
        doctest::Approx(trace_norm(partial_transpose(x.op())) * trace_norm(partial_transpose(y.op())))
            .epsilon(1e-12));
}

TEST_CASE("tensor power respects the dimension cap") {
  const QuasiState phi = max_entangled(2);
  CHECK_THROWS_AS(tensor_power(phi.op(), 7), DimensionCapExceeded);  // 4^7 = 16384
  CHECK_NOTHROW(tensor_power(phi.op(), 6));
  CHECK_THROWS_AS(tensor_power(phi.op(), 3, 32), DimensionCapExceeded);
}

TEST_CASE("PT norm bound ||X^TB||_1 <= d ||X||_1") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t da = 2 + seed % 2, db = 2 + (seed / 2) % 2;
    const Matrix x = random_hermitian(da * db, 100 + seed);
    const double lhs = trace_norm(Matrix(partial_transpose(x, da, db)));
    CHECK(lhs <= static_cast<double>(da * db) * trace_norm(x) + 1e-12);
  }
}
